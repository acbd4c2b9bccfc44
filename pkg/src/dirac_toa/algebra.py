"""Dirac matrices in the standard representation and Clifford-algebra checks.

Conventions: metric g = diag(1, -1, -1, -1); gamma0 = diag(I, -I); gamma_i
block off-diagonal with +/- sigma_i; alpha_i = gamma0 gamma_i; beta = gamma0.
Matrices are plain 4x4 (or 2x2) complex numpy arrays and spinors are length-4
complex vectors, so the hermitian conjugate, products, traces and Frobenius
norms the rest of the package needs come straight from numpy.
"""

from __future__ import annotations

import numpy as np

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

SIGMA1 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA3 = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)


def dagger(a: np.ndarray) -> np.ndarray:
    """Hermitian conjugate of a matrix."""
    return np.conj(np.asarray(a)).T


def frobenius(a: np.ndarray) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(np.asarray(a)))


def pauli_matrices() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three 2x2 Pauli matrices (sigma1, sigma2, sigma3)."""
    return SIGMA1.copy(), SIGMA2.copy(), SIGMA3.copy()


def standard_gammas() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """The four gamma matrices in the standard representation.

    gamma0 is hermitian, the spatial gammas are anti-hermitian, and together
    they satisfy {gamma_mu, gamma_nu} = 2 g_{mu nu} I exactly (all entries
    are 0 or +/-1, +/-i).
    """
    zeros = np.zeros((2, 2), dtype=complex)
    g0 = np.block([[I2, zeros], [zeros, -I2]])
    spatial = tuple(
        np.block([[zeros, s], [-s, zeros]]) for s in (SIGMA1, SIGMA2, SIGMA3)
    )
    return (g0,) + spatial


def alpha_beta() -> tuple[np.ndarray, np.ndarray]:
    """alpha1 = gamma0 gamma1 and beta = gamma0.

    Both are hermitian, square to the identity and anticommute.
    """
    gammas = standard_gammas()
    beta = gammas[0]
    alpha1 = gammas[0] @ gammas[1]
    return alpha1, beta


ALPHA1, BETA = alpha_beta()


def clifford_residual(gammas=None) -> float:
    """Worst-case defect of the anticommutation algebra.

    Returns max over (mu, nu) of ||gamma_mu gamma_nu + gamma_nu gamma_mu
    - 2 g_{mu nu} I||_F.  Zero (to rounding) for any valid representation.
    """
    if gammas is None:
        gammas = standard_gammas()
    worst = 0.0
    for mu in range(4):
        for nu in range(4):
            anti = gammas[mu] @ gammas[nu] + gammas[nu] @ gammas[mu]
            worst = max(worst, frobenius(anti - 2.0 * METRIC[mu, nu] * I4))
    return worst


def similarity_transform(gammas, unitary: np.ndarray):
    """Conjugate a gamma set by a unitary; preserves the algebra."""
    u = np.asarray(unitary)
    return tuple(u @ g @ dagger(u) for g in gammas)


def random_unitary(dim: int, seed: int = 0) -> np.ndarray:
    """Haar-like random unitary via QR of a complex Ginibre sample."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
