"""Closed-form spinor families for free motion along one axis.

Momentum-space eigenspinors phi_{lambda s}(p) of H(p) = alpha1 p + beta m

    phi_{lambda s}(p) = sqrt((m + lambda E_p)/(2 lambda E_p))
                        (eta_s ; sigma1 p / (m + lambda E_p) eta_s),

their position-interval duals xi_{b s}(x) obtained by the substitution
p -> x, m -> tau, E_p -> T_x = sqrt(x^2 + tau^2), lambda -> b, the
conventional u/w forms, and the infinite-mass limits zeta.

The spin label s picks the two-component basis vector eta_{+1/2} = (1, 0),
eta_{-1/2} = (0, 1); the lower block always carries sigma1 applied to
eta_s.  (The labels are attached to the sigma1-block structure, not to a
separately diagonalised helicity operator.)

Normalisation factors are evaluated in cancellation-free form,

    E_p - m = p^2 / (E_p + m),      T_x - tau = x^2 / (T_x + tau),

so the lambda = -1 (and b = -1) branches stay positive, finite and accurate
down to |p| far below m.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import SIGMA1

HALF_SPINS = (0.5, -0.5)
SIGNS = (1, -1)


@dataclass(frozen=True)
class PhysParams:
    """Physical parameters in natural units: the rest mass m >= 0."""

    m: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.m) or self.m < 0.0:
            raise ValueError(f"rest mass must be finite and >= 0, got {self.m}")


@dataclass(frozen=True)
class QuantumNumbers:
    """Discrete labels: energy sign lam, spin s, arrival-time sign b."""

    lam: int = 1
    s: float = 0.5
    b: int = 1

    def __post_init__(self):
        if self.lam not in SIGNS:
            raise ValueError(f"lam must be +1 or -1, got {self.lam}")
        if self.s not in HALF_SPINS:
            raise ValueError(f"s must be +1/2 or -1/2, got {self.s}")
        if self.b not in SIGNS:
            raise ValueError(f"b must be +1 or -1, got {self.b}")


@dataclass(frozen=True)
class KinematicPoint:
    """One (p, x) sample with its derived kinematic quantities.

    E_p = sqrt(p^2 + m^2) is the on-shell energy, tau = x m / p the proper
    arrival time for the interval x, and T_x = sqrt(x^2 + tau^2) = |x E_p/p|
    its associated arrival-time magnitude.
    """

    p: float
    x: float
    m: float

    def __post_init__(self):
        if self.p == 0.0:
            raise ValueError("p = 0 is excluded")
        if self.m < 0.0:
            raise ValueError("m must be >= 0")

    @property
    def e_p(self) -> float:
        return float(np.hypot(self.p, self.m))

    @property
    def tau(self) -> float:
        return self.x * self.m / self.p

    @property
    def t_x(self) -> float:
        return float(np.hypot(self.x, self.tau))


def eta(s: float) -> np.ndarray:
    """Two-component spin basis vector: (1,0) for s=+1/2, (0,1) for s=-1/2."""
    if s == 0.5:
        return np.array([1.0, 0.0], dtype=complex)
    if s == -0.5:
        return np.array([0.0, 1.0], dtype=complex)
    raise ValueError(f"s must be +1/2 or -1/2, got {s}")


def _pair_components(sign: int, a: np.ndarray, c: float | np.ndarray):
    """Stable (upper, lower) scalar factors for the generic eigenspinor.

    For the mass-shell pair (a, c) = (p, m) with energy e = hypot(p, m),
    returns (sqrt(s_sign/2e), sign * a / sqrt(2 e s_sign)) where
    s_sign = e + sign*c is evaluated without cancellation.
    """
    a = np.asarray(a, dtype=float)
    c_arr = np.asarray(c, dtype=float)
    e = np.hypot(a, c_arr)
    s_plus = e + np.abs(c_arr)
    s_signed = np.where(sign * np.sign(c_arr) >= 0.0, s_plus, a * a / s_plus)
    upper = np.sqrt(s_signed / (2.0 * e))
    lower = sign * a / np.sqrt(2.0 * e * s_signed)
    return upper, lower


def phi_momentum(qn: QuantumNumbers, p: float | np.ndarray, params: PhysParams):
    """Momentum-space eigenspinor phi_{lambda s}(p) of alpha1 p + beta m.

    Unit-norm eigenvector with eigenvalue lambda * E_p.  For m = 0 this
    reduces to (eta_s ; lambda sign(p) sigma1 eta_s)/sqrt(2).  Accepts a
    scalar p (returns shape (4,)) or an array (returns shape (N, 4)).
    """
    p_arr = np.atleast_1d(np.asarray(p, dtype=float))
    if np.any(p_arr == 0.0):
        raise ValueError("p = 0 is excluded by the standing assumption p != 0")
    upper, lower = _pair_components(qn.lam, p_arr, params.m)
    values = _assemble(upper, lower, qn.s)
    return values[0] if np.isscalar(p) or np.ndim(p) == 0 else values


def xi_position(b: int, s: float, x: float, tau: float) -> np.ndarray:
    """Interval-space spinor xi_{b s}(x) built from (x, tau).

    Structurally phi_{lambda s}(p) under p -> x, m -> tau, E_p -> T_x,
    lambda -> b; tau may be negative (tau = x m / p carries the sign of
    x/p).  Unit norm whenever T_x = hypot(x, tau) > 0.
    """
    if b not in SIGNS:
        raise ValueError(f"b must be +1 or -1, got {b}")
    t_x = np.hypot(x, tau)
    if t_x == 0.0:
        raise ValueError("x = tau = 0 is degenerate (T_x = 0)")
    if x == 0.0 and b * np.sign(tau) < 0.0:
        raise ValueError("x = 0 with b opposite to sign(tau) is degenerate")
    upper, lower = _pair_components(b, x, tau)
    return _assemble(np.atleast_1d(upper), np.atleast_1d(lower), s)[0]


def _assemble(upper: np.ndarray, lower: np.ndarray, s: float) -> np.ndarray:
    two = eta(s)
    sig_eta = SIGMA1 @ two
    values = np.zeros(upper.shape + (4,), dtype=complex)
    values[..., :2] = upper[..., None] * two
    values[..., 2:] = lower[..., None] * sig_eta
    return values


def u_w_spinors(s: float, p: float, params: PhysParams):
    """Conventional particle/antiparticle spinors u(p, s) and w(p, s).

    u(p, s) = phi_{+1, s}(p);
    w(p, s) = sqrt((m+E_p)/2E_p) (sigma1 p/(m+E_p) eta_s ; eta_s),
    which equals (sigma1 p/|p|) phi_{-1, s}(-p).  Both unit norm.
    """
    if p == 0.0:
        raise ValueError("p = 0 is excluded")
    u = phi_momentum(QuantumNumbers(lam=1, s=s), p, params)
    e = np.hypot(p, params.m)
    norm = np.sqrt((params.m + e) / (2.0 * e))
    two = eta(s)
    sig_eta = SIGMA1 @ two
    w = np.zeros(4, dtype=complex)
    w[:2] = norm * (p / (params.m + e)) * sig_eta
    w[2:] = norm * two
    return u, w


def zeta_limit(lam: int, s: float) -> np.ndarray:
    """Infinite-mass limit spinors: (eta_s ; 0) for lam=+1, (0 ; eta_s) for lam=-1."""
    if lam not in SIGNS:
        raise ValueError(f"lam must be +1 or -1, got {lam}")
    two = eta(s)
    z = np.zeros(4, dtype=complex)
    if lam == 1:
        z[:2] = two
    else:
        z[2:] = two
    return z
