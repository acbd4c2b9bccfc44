"""Hamiltonian and arrival-time operators on discrete grids.

Momentum representation (x = +i d/dp, fixed by <x|p> = e^{ipx}/sqrt(2 pi)):

    H(p)        = alpha1 p + beta m                     (block-diagonal)
    T_dirac(p)  = (alpha1 + beta m/p)(-i d/dp) + i beta m/(2 p^2)
    T_non(p)    = -(m/2) [(1/p)(i d/dp) + (i d/dp)(1/p)]
    tau_hat     = -T_non        (proper arrival-time operator)

Position representation:

    T_dirac(x)  = -(alpha1 x + beta tau_hat),  exactly -alpha1 diag(x) at m=0

Energy representation:

    T_dirac(E)  = -i d/dE   per branch of the two-branch spectrum.

The simplified momentum form above equals the fully symmetrised
quantisation -(1/4)[H (p^-1 x + x p^-1) + (p^-1 x + x p^-1) H] in the
continuum because H and p^-1 commute; on a finite grid the two assemblies
differ by interpolation error of 1/p terms, which `symmetrized_defect`
measures on smooth interior states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.integrate

from .algebra import ALPHA1, BETA, I4
from .grids import DiscreteOperator, Grid1D, GridWaveFunction, inner
from .spinors import PhysParams

_I4R = np.eye(4)


def _require_kind(grid: Grid1D, kind: str):
    if grid.kind != kind:
        raise ValueError(f"expected a {kind} grid, got kind={grid.kind!r}")


def _node_diag(values: np.ndarray, block: np.ndarray) -> np.ndarray:
    """Block-diagonal matrix with values[i] * block at node i."""
    return np.kron(np.diag(values), block)


def build_hamiltonian(grid: Grid1D, params: PhysParams) -> DiscreteOperator:
    """H = alpha1 p + beta m, block-diagonal over momentum nodes.

    Hermitian, and per node H(p)^2 = (p^2 + m^2) I.
    """
    _require_kind(grid, "momentum")
    p = grid.nodes
    mat = _node_diag(p, ALPHA1) + _node_diag(np.full(p.size, params.m), BETA)
    return DiscreteOperator(rep="momentum", grid=grid, matrix=mat)


def build_toa_momentum(grid: Grid1D, params: PhysParams) -> DiscreteOperator:
    """Arrival-time operator in the momentum representation.

    (alpha1 + beta m/p)(-i D) + i beta m/(2 p^2), with D the per-branch
    differentiation matrix.  At m = 0 this collapses to alpha1 (-i D),
    i.e. -alpha1 x in the momentum representation.
    """
    _require_kind(grid, "momentum")
    p = grid.nodes
    if np.any(p == 0.0):
        raise ValueError("momentum grid contains p = 0")
    m = params.m
    d4 = np.kron(grid.diff, _I4R)
    coeff = np.kron(np.eye(p.size), ALPHA1) + _node_diag(m / p, BETA)
    mat = coeff @ (-1j * d4) + _node_diag(1j * m / (2.0 * p * p), BETA)
    return DiscreteOperator(rep="momentum", grid=grid, matrix=mat)


def build_toa_momentum_symmetrized(grid: Grid1D, params: PhysParams) -> DiscreteOperator:
    """Fully symmetrised assembly -(i/4)[H S + S H], S = (1/p) D + D (1/p)."""
    _require_kind(grid, "momentum")
    p = grid.nodes
    pinv = np.diag(1.0 / p)
    s4 = np.kron(pinv @ grid.diff + grid.diff @ pinv, _I4R)
    h = build_hamiltonian(grid, params).matrix
    return DiscreteOperator(
        rep="momentum", grid=grid, matrix=-0.25j * (h @ s4 + s4 @ h)
    )


def symmetrized_defect(
    grid: Grid1D, params: PhysParams, states: list[GridWaveFunction]
) -> tuple[float, float]:
    """Disagreement between the simplified and symmetrised assemblies.

    Returns (max relative defect on the given smooth states, raw matrix
    Frobenius defect).  The matrix defect is dominated by 1/p interpolation
    error near the inner branch edges and is reported for information only.
    """
    t13 = build_toa_momentum(grid, params)
    t7 = build_toa_momentum_symmetrized(grid, params)
    worst = 0.0
    for psi in states:
        diff = t13.apply(psi).values - t7.apply(psi).values
        num = np.sqrt(np.sum(grid.weights * np.sum(np.abs(diff) ** 2, axis=1)))
        worst = max(worst, float(num / psi.norm()))
    raw = float(np.linalg.norm(t13.matrix - t7.matrix))
    return worst, raw


def build_toa_nonrel(grid: Grid1D, params: PhysParams) -> DiscreteOperator:
    """Nonrelativistic arrival-time operator -(m/2)(p^-1 x + x p^-1).

    Spin-diagonal (scalar operator tensored with I_4); the zero operator
    when m = 0.
    """
    _require_kind(grid, "momentum")
    p = grid.nodes
    if np.any(p == 0.0):
        raise ValueError("momentum grid contains p = 0")
    pinv = np.diag(1.0 / p)
    xd = 1j * grid.diff
    scalar = -(params.m / 2.0) * (pinv @ xd + xd @ pinv)
    return DiscreteOperator(rep="momentum", grid=grid, matrix=np.kron(scalar, _I4R))


def proper_time_nodes(grid: Grid1D, params: PhysParams) -> np.ndarray:
    """Node-space matrix of the proper arrival-time operator tau = -T_non."""
    p = grid.nodes
    pinv = np.diag(1.0 / p)
    xd = 1j * grid.diff
    return (params.m / 2.0) * (pinv @ xd + xd @ pinv)


def build_toa_position(
    grid: Grid1D, params: PhysParams, proper_time: np.ndarray | None = None
) -> DiscreteOperator:
    """Arrival-time operator in the position representation: -(alpha1 x + beta tau).

    At m = 0 the proper-time term vanishes and the result is exactly
    -alpha1 diag(x), a hermitian matrix with eigenvalues -/+ x_i.  For
    m > 0 the caller supplies the node-space matrix of tau (built on the
    representation of their choice, e.g. `proper_time_nodes` on the
    conjugate momentum grid); the assembly is then formal/mixed.
    """
    _require_kind(grid, "position")
    x = grid.nodes
    mat = -_node_diag(x, ALPHA1)
    if params.m != 0.0:
        if proper_time is None:
            raise ValueError(
                "m > 0 requires an explicit proper-time node matrix "
                "(tau is realised on the conjugate grid)"
            )
        mat = mat - np.kron(np.asarray(proper_time, dtype=complex), BETA)
    return DiscreteOperator(rep="position", grid=grid, matrix=mat)


def build_toa_energy(grid: Grid1D) -> DiscreteOperator:
    """Arrival-time operator in the energy representation: -i d/dE per branch."""
    _require_kind(grid, "energy")
    return DiscreteOperator(
        rep="energy", grid=grid, matrix=np.kron(-1j * grid.diff, _I4R)
    )


def build_hamiltonian_position(grid: Grid1D, params: PhysParams) -> DiscreteOperator:
    """H = alpha1 (-i d/dx) + beta m on a position grid (p = -i d/dx)."""
    _require_kind(grid, "position")
    d4 = np.kron(grid.diff, _I4R)
    mat = np.kron(np.eye(grid.size), ALPHA1) @ (-1j * d4) + _node_diag(
        np.full(grid.size, params.m), BETA
    )
    return DiscreteOperator(rep="position", grid=grid, matrix=mat)


def kinetic_energy_operator(grid: Grid1D, params: PhysParams) -> DiscreteOperator:
    """Nonrelativistic Hamiltonian p^2/(2m), diagonal in the momentum representation."""
    _require_kind(grid, "momentum")
    if params.m <= 0.0:
        raise ValueError("kinetic energy operator needs m > 0")
    p = grid.nodes
    return DiscreteOperator(
        rep="momentum",
        grid=grid,
        matrix=_node_diag(p * p / (2.0 * params.m), np.asarray(I4)),
    )


@dataclass(frozen=True, eq=False)
class OperatorSuite:
    """Hamiltonian and arrival-time operators sharing one grid."""

    h: DiscreteOperator
    t_dirac: DiscreteOperator
    t_non: DiscreteOperator
    rep: str
    params: PhysParams
    grid: Grid1D


def build_suite(grid: Grid1D, params: PhysParams) -> OperatorSuite:
    """Momentum-representation operator suite on a shared grid."""
    return OperatorSuite(
        h=build_hamiltonian(grid, params),
        t_dirac=build_toa_momentum(grid, params),
        t_non=build_toa_nonrel(grid, params),
        rep="momentum",
        params=params,
        grid=grid,
    )


def commutator_defect(
    a: DiscreteOperator, b: DiscreteOperator, targets: list[GridWaveFunction]
) -> float:
    """max over targets of ||(AB - BA + i) psi|| / ||psi||.

    Zero defect means the pair is canonically conjugate, [A, B] = -i, on
    the span of the targets.
    """
    if a.grid.signature() != b.grid.signature() or a.rep != b.rep:
        raise ValueError("operators must share grid and representation")
    worst = 0.0
    for psi in targets:
        r = a.apply(b.apply(psi)).values - b.apply(a.apply(psi)).values
        r = r + 1j * psi.values
        num = np.sqrt(np.sum(a.grid.weights * np.sum(np.abs(r) ** 2, axis=1)))
        worst = max(worst, float(num / psi.norm()))
    return worst


def energy_image_grid(
    grid_p: Grid1D, params: PhysParams, n_per_branch: int, scheme: str = "chebyshev"
) -> Grid1D:
    """Energy grid whose branches are the image of the momentum range.

    [e_lo, e_hi] with e_lo = E(p_min), e_hi = E(p_max), mirrored to
    negative energies; this is the matched truncation required by the
    trace identity.
    """
    from .grids import make_energy_grid

    pos = [br for br in grid_p.branches if br.lo > 0.0]
    if not pos:
        raise ValueError("momentum grid has no positive branch")
    p_min, p_max = pos[0].lo, pos[0].hi
    e_lo = float(np.hypot(p_min, params.m))
    e_hi = float(np.hypot(p_max, params.m))
    return make_energy_grid(params.m, e_hi, n_per_branch, scheme=scheme, e_min=e_lo)


def spectral_jacobian(e: np.ndarray, m: float) -> np.ndarray:
    """|dp/dE| = |E| / sqrt(E^2 - m^2), the squared representation-change weight."""
    e = np.asarray(e, dtype=float)
    return np.abs(e) / np.sqrt(e * e - m * m)


def energy_rep_trace_identity(
    grid_p: Grid1D,
    grid_e: Grid1D,
    params: PhysParams,
    damping_scale: float | None = None,
) -> tuple[float, float]:
    """Regulated two-sided trace sum testing the spectral measure change.

    With a Gaussian regulator g(u) = exp(-(u/L)^2):

      momentum side: 2 * sum_lambda  int dp g(lambda E_p)
      energy side:   4 * int_{both branches} dE g(E) |E|/sqrt(E^2 - m^2)

    The factor 2 counts spins on both sides; the extra factor 2 on the
    energy side counts the two momentum signs mapping onto each energy
    branch.  The Jacobian |dp/dE| equals the squared weight relating the
    energy- and momentum-normalised bases, which is the identity the pair
    of quadratures isolates.  Requires matched truncations (energy range
    equal to the image of the momentum range).
    """
    _require_kind(grid_p, "momentum")
    _require_kind(grid_e, "energy")
    m = params.m
    pos_p = [br for br in grid_p.branches if br.lo > 0.0][0]
    pos_e = [br for br in grid_e.branches if br.lo > 0.0][0]
    img_lo, img_hi = np.hypot(pos_p.lo, m), np.hypot(pos_p.hi, m)
    if abs(pos_e.lo - img_lo) > 1e-9 * img_hi or abs(pos_e.hi - img_hi) > 1e-9 * img_hi:
        raise ValueError(
            "energy grid truncation must match the image of the momentum range; "
            f"expected [{img_lo}, {img_hi}], got [{pos_e.lo}, {pos_e.hi}]"
        )
    if damping_scale is None:
        damping_scale = img_hi / 3.0

    def g(u):
        return np.exp(-((u / damping_scale) ** 2))

    e_p = np.hypot(grid_p.nodes, m)
    lhs = 2.0 * float(np.sum(grid_p.weights * (g(e_p) + g(-e_p))))
    e_nodes = grid_e.nodes
    rhs = 4.0 * float(
        np.sum(grid_e.weights * g(e_nodes) * spectral_jacobian(e_nodes, m))
    )
    return lhs, rhs


def trace_identity_quad_reference(
    p_min: float, p_max: float, m: float, damping_scale: float
) -> float:
    """Adaptive-quadrature reference value for both trace-identity sides."""

    def integrand(p):
        e = np.hypot(p, m)
        return np.exp(-((e / damping_scale) ** 2)) + np.exp(
            -(((-e) / damping_scale) ** 2)
        )

    val, _ = scipy.integrate.quad(integrand, p_min, p_max, limit=200)
    return 4.0 * val  # two momentum branches, two spins


def expectation(op: DiscreteOperator, psi: GridWaveFunction) -> complex:
    """<psi | Op psi> / <psi | psi> in the quadrature inner product."""
    return inner(psi, op.apply(psi)) / inner(psi, psi)
