"""One-dimensional multi-branch grids, quadrature and spectral calculus.

Momentum grids exclude p = 0 (two branches symmetric about the origin),
energy grids exclude |E| < m (two branches outside the mass gap), position
grids are a single interval.  Each branch carries Chebyshev-Gauss-Lobatto
nodes with Clenshaw-Curtis weights (scheme "chebyshev") or equispaced nodes
with trapezoid weights and second-order differences (scheme "uniform").

Grid functions are one 4-spinor per node; the inner product is the
quadrature sum <f, g> = sum_i w_i f_i^dag g_i, and operator adjoints are
taken with respect to it: adj(M) = W^-1 M^dag W.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg

KINDS = ("momentum", "position", "energy")
SCHEMES = ("chebyshev", "uniform")


def _cgl_nodes(n: int) -> np.ndarray:
    """n Chebyshev-Gauss-Lobatto nodes on [-1, 1], increasing."""
    if n < 2:
        raise ValueError("need at least 2 nodes per branch")
    return -np.cos(np.pi * np.arange(n) / (n - 1))


def _clenshaw_curtis_weights(n: int) -> np.ndarray:
    """Clenshaw-Curtis weights for the CGL nodes on [-1, 1].

    Positive, symmetric, sum to 2; exact for polynomials of degree <= n-1.
    """
    big_n = n - 1
    theta = np.pi * np.arange(n) / big_n
    w = np.zeros(n)
    v = np.ones(big_n - 1)
    if big_n % 2 == 0:
        w[0] = w[-1] = 1.0 / (big_n**2 - 1)
        for k in range(1, big_n // 2):
            v -= 2.0 * np.cos(2.0 * k * theta[1:-1]) / (4 * k**2 - 1)
        v -= np.cos(big_n * theta[1:-1]) / (big_n**2 - 1)
    else:
        w[0] = w[-1] = 1.0 / big_n**2
        for k in range(1, (big_n - 1) // 2 + 1):
            v -= 2.0 * np.cos(2.0 * k * theta[1:-1]) / (4 * k**2 - 1)
    w[1:-1] = 2.0 * v / big_n
    return w


def _cheb_diff(n: int) -> np.ndarray:
    """Chebyshev collocation differentiation matrix on [-1, 1], increasing order.

    Exact on polynomials of degree <= n-1 sampled at the CGL nodes.
    """
    big_n = n - 1
    x = np.cos(np.pi * np.arange(n) / big_n)
    c = np.ones(n)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** np.arange(n)
    dx = x[:, None] - x[None, :]
    d = np.outer(c, 1.0 / c) / (dx + np.eye(n))
    d -= np.diag(d.sum(axis=1))
    return d[::-1, ::-1]


def _uniform_diff(n: int, h: float) -> np.ndarray:
    """Second-order finite-difference matrix on an equispaced branch."""
    d = np.zeros((n, n))
    for i in range(1, n - 1):
        d[i, i - 1] = -0.5 / h
        d[i, i + 1] = 0.5 / h
    d[0, 0], d[0, 1], d[0, 2] = -1.5 / h, 2.0 / h, -0.5 / h
    d[-1, -1], d[-1, -2], d[-1, -3] = 1.5 / h, -2.0 / h, 0.5 / h
    return d


@dataclass(frozen=True, eq=False)
class Branch:
    lo: float
    hi: float
    nodes: np.ndarray
    weights: np.ndarray


def _build_branch(lo: float, hi: float, n: int, scheme: str) -> Branch:
    if not hi > lo:
        raise ValueError(f"branch bounds must satisfy lo < hi, got [{lo}, {hi}]")
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    if n == 1 and scheme == "uniform":
        # degenerate one-node rule (midpoint); used by deliberately
        # under-resolved controls
        mid = 0.5 * (lo + hi)
        return Branch(lo=lo, hi=hi, nodes=np.array([mid]), weights=np.array([hi - lo]))
    half = 0.5 * (hi - lo)
    if scheme == "chebyshev":
        nodes = lo + half * (_cgl_nodes(n) + 1.0)
        weights = half * _clenshaw_curtis_weights(n)
    else:
        nodes = np.linspace(lo, hi, n)
        h = (hi - lo) / (n - 1)
        weights = np.full(n, h)
        weights[0] = weights[-1] = 0.5 * h
    nodes[0], nodes[-1] = lo, hi  # pin endpoints against affine-map rounding
    return Branch(lo=lo, hi=hi, nodes=nodes, weights=weights)


def _branch_diff(branch: Branch, scheme: str) -> np.ndarray:
    n = branch.nodes.size
    if scheme == "chebyshev":
        return _cheb_diff(n) * (2.0 / (branch.hi - branch.lo))
    return _uniform_diff(n, (branch.hi - branch.lo) / (n - 1))


@dataclass(frozen=True, eq=False)
class Grid1D:
    """Quadrature grid on a union of disjoint intervals."""

    kind: str
    scheme: str
    branches: tuple[Branch, ...]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        for br in self.branches:
            if np.any(np.diff(br.nodes) <= 0.0):
                raise ValueError("nodes must be strictly increasing per branch")
            if np.any(br.weights <= 0.0):
                raise ValueError("quadrature weights must be positive")
            if self.kind in ("momentum", "energy") and br.lo <= 0.0 <= br.hi:
                raise ValueError(f"{self.kind} branch may not contain 0")

    @cached_property
    def nodes(self) -> np.ndarray:
        return np.concatenate([br.nodes for br in self.branches])

    @cached_property
    def weights(self) -> np.ndarray:
        return np.concatenate([br.weights for br in self.branches])

    @property
    def size(self) -> int:
        return sum(br.nodes.size for br in self.branches)

    @cached_property
    def branch_slices(self) -> tuple[slice, ...]:
        out, start = [], 0
        for br in self.branches:
            out.append(slice(start, start + br.nodes.size))
            start += br.nodes.size
        return tuple(out)

    @cached_property
    def diff(self) -> np.ndarray:
        """Block-diagonal differentiation matrix (size N x N)."""
        return scipy.linalg.block_diag(
            *[_branch_diff(br, self.scheme) for br in self.branches]
        )

    def signature(self) -> tuple:
        return (
            self.kind,
            self.scheme,
            tuple((br.lo, br.hi, br.nodes.size) for br in self.branches),
        )

    def boundary_indices(self) -> np.ndarray:
        """Global indices of the first and last node of every branch."""
        idx = []
        for sl in self.branch_slices:
            idx.extend([sl.start, sl.stop - 1])
        return np.array(sorted(set(idx)), dtype=int)

    def to_text(self) -> str:
        lines = [f"kind={self.kind}", f"scheme={self.scheme}"]
        for br in self.branches:
            lines.append(f"branch={br.lo!r},{br.hi!r},{br.nodes.size}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_text(text: str) -> "Grid1D":
        kind = scheme = None
        branches = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            key = key.strip()
            if key == "kind":
                kind = value.strip()
            elif key == "scheme":
                scheme = value.strip()
            elif key == "branch":
                lo_s, hi_s, n_s = value.split(",")
                branches.append((float(lo_s), float(hi_s), int(n_s)))
            else:
                raise ValueError(f"unknown grid key {key!r}")
        if kind is None or scheme is None or not branches:
            raise ValueError("grid text must define kind, scheme and branches")
        built = tuple(_build_branch(lo, hi, n, scheme) for lo, hi, n in branches)
        return Grid1D(kind=kind, scheme=scheme, branches=built)


def diff_matrix(grid: Grid1D) -> np.ndarray:
    """Block-diagonal per-branch differentiation matrix of a grid."""
    return grid.diff


def make_momentum_grid(
    p_min: float, p_max: float, n_per_branch: int, scheme: str = "chebyshev"
) -> Grid1D:
    """Two symmetric momentum branches [-p_max, -p_min] and [p_min, p_max]."""
    if not 0.0 < p_min < p_max:
        raise ValueError(f"need 0 < p_min < p_max, got ({p_min}, {p_max})")
    if n_per_branch < 8:
        raise ValueError("need at least 8 nodes per branch")
    neg = _build_branch(-p_max, -p_min, n_per_branch, scheme)
    pos = _build_branch(p_min, p_max, n_per_branch, scheme)
    return Grid1D(kind="momentum", scheme=scheme, branches=(neg, pos))


def make_momentum_window(
    p_lo: float, p_hi: float, n: int, scheme: str = "chebyshev"
) -> Grid1D:
    """Single-branch momentum window; must not contain p = 0."""
    if p_lo <= 0.0 <= p_hi:
        raise ValueError("momentum window may not contain 0")
    return Grid1D(
        kind="momentum", scheme=scheme, branches=(_build_branch(p_lo, p_hi, n, scheme),)
    )


def make_position_grid(
    lo: float, hi: float, n: int, scheme: str = "chebyshev"
) -> Grid1D:
    """Single position branch [lo, hi]; may contain the origin."""
    return Grid1D(
        kind="position", scheme=scheme, branches=(_build_branch(lo, hi, n, scheme),)
    )


def make_energy_grid(
    m: float,
    e_max: float,
    n_per_branch: int,
    scheme: str = "chebyshev",
    e_min: float | None = None,
) -> Grid1D:
    """Energy branches [-e_max, -e_min] and [e_min, e_max] outside the mass gap.

    e_min defaults to m plus a small offset so the branches sit strictly
    inside |E| > m.
    """
    if m < 0.0:
        raise ValueError("m must be >= 0")
    if e_min is None:
        e_min = m + 1e-6 * max(m, 1.0)
    if not e_min > m:
        raise ValueError(f"need e_min > m, got e_min={e_min}, m={m}")
    if not e_max > e_min:
        raise ValueError(f"need e_max > e_min, got ({e_min}, {e_max})")
    neg = _build_branch(-e_max, -e_min, n_per_branch, scheme)
    pos = _build_branch(e_min, e_max, n_per_branch, scheme)
    return Grid1D(kind="energy", scheme=scheme, branches=(neg, pos))


# --------------------------------------------------------------------------
# Grid functions and discrete operators
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GridWaveFunction:
    """One 4-spinor per grid node; values has shape (N, 4)."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.grid.size, 4):
            raise ValueError(
                f"values must have shape ({self.grid.size}, 4), got {vals.shape}"
            )
        object.__setattr__(self, "values", vals)

    def norm(self) -> float:
        return float(np.sqrt(inner(self, self).real))


def spinor_state(grid: Grid1D, profile: np.ndarray, spinor: np.ndarray) -> GridWaveFunction:
    """Grid function profile(node) * constant 4-spinor."""
    prof = np.asarray(profile, dtype=complex)
    return GridWaveFunction(grid, np.outer(prof, np.asarray(spinor, dtype=complex)))


def _check_same_grid(f: GridWaveFunction, g: GridWaveFunction):
    if f.grid is not g.grid and f.grid.signature() != g.grid.signature():
        raise ValueError("grid mismatch between wavefunctions")


def inner(f: GridWaveFunction, g: GridWaveFunction) -> complex:
    """Quadrature inner product sum_i w_i f_i^dag g_i (conjugate-linear in f)."""
    _check_same_grid(f, g)
    per_node = np.sum(np.conj(f.values) * g.values, axis=1)
    return complex(np.sum(f.grid.weights * per_node))


@dataclass(frozen=True, eq=False)
class DiscreteOperator:
    """Dense (4N) x (4N) operator acting on grid wavefunctions.

    Node-major layout: flat index = 4 * node + component, so a scalar node
    operator A enters as kron(A, I_4).
    """

    rep: str
    grid: Grid1D
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        n4 = 4 * self.grid.size
        if mat.shape != (n4, n4):
            raise ValueError(f"matrix must be ({n4}, {n4}), got {mat.shape}")
        object.__setattr__(self, "matrix", mat)

    def apply(self, f: GridWaveFunction) -> GridWaveFunction:
        _check_same_grid_op(self, f)
        out = self.matrix @ f.values.reshape(-1)
        return GridWaveFunction(f.grid, out.reshape(-1, 4))

    def adjoint(self) -> "DiscreteOperator":
        """Adjoint with respect to the quadrature inner product: W^-1 M^dag W."""
        w4 = np.repeat(self.grid.weights, 4)
        adj = (self.matrix.conj().T * w4[None, :]) / w4[:, None]
        return DiscreteOperator(rep=self.rep, grid=self.grid, matrix=adj)

    def hermiticity_defect(self) -> float:
        """Frobenius distance to its own quadrature adjoint."""
        return float(np.linalg.norm(self.matrix - self.adjoint().matrix))

    def interior_matrix(self) -> np.ndarray:
        """Matrix with the branch-endpoint node rows and columns removed."""
        drop = self.grid.boundary_indices()
        keep_nodes = np.setdiff1d(np.arange(self.grid.size), drop)
        keep = (4 * keep_nodes[:, None] + np.arange(4)[None, :]).ravel()
        return self.matrix[np.ix_(keep, keep)]


def _check_same_grid_op(op: DiscreteOperator, f: GridWaveFunction):
    if op.grid is not f.grid and op.grid.signature() != f.grid.signature():
        raise ValueError("operator/wavefunction grid mismatch")


def adjoint(op: DiscreteOperator) -> DiscreteOperator:
    return op.adjoint()


# --------------------------------------------------------------------------
# Deterministic smooth test states
# --------------------------------------------------------------------------

_SPINOR_CYCLE = (
    np.array([1, 0, 0, 0], dtype=complex),
    np.array([0, 1, 0, 0], dtype=complex),
    np.array([0, 0, 1, 0], dtype=complex),
    np.array([0, 0, 0, 1], dtype=complex),
    np.array([1, 0, 1, 0], dtype=complex) / np.sqrt(2.0),
    np.array([0, 1, 0, -1j], dtype=complex) / np.sqrt(2.0),
)


def gaussian_profile(grid: Grid1D, center: float, width: float) -> np.ndarray:
    return np.exp(-((grid.nodes - center) ** 2) / (2.0 * width**2))


def edge_decay(state: GridWaveFunction) -> float:
    """Largest boundary-node density relative to the peak node density."""
    dens = np.sum(np.abs(state.values) ** 2, axis=1)
    peak = float(dens.max())
    if peak == 0.0:
        return 0.0
    return float(dens[state.grid.boundary_indices()].max() / peak)


def interior_gaussian_states(
    grid: Grid1D, count: int = 10, width_fraction: float = 1.0 / 16.0
) -> list[GridWaveFunction]:
    """Deterministic family of smooth states supported away from branch edges.

    Gaussians of width (branch length) * width_fraction placed across the
    middle of each branch, paired with a fixed cycle of spinor directions.
    The construction enforces node-density decay below 1e-12 at every
    branch endpoint and raises if a state violates it.
    """
    branches = grid.branches
    states: list[GridWaveFunction] = []
    fractions = (0.5, 0.4, 0.6, 0.45, 0.55)
    k = 0
    while len(states) < count:
        br = branches[k % len(branches)]
        frac = fractions[(k // len(branches)) % len(fractions)]
        center = br.lo + frac * (br.hi - br.lo)
        width = (br.hi - br.lo) * width_fraction
        profile = gaussian_profile(grid, center, width)
        state = spinor_state(grid, profile, _SPINOR_CYCLE[k % len(_SPINOR_CYCLE)])
        if edge_decay(state) > 1e-12:
            raise ValueError(
                "test state fails to decay below 1e-12 at a branch endpoint; "
                "shrink width_fraction or widen the branch"
            )
        states.append(state)
        k += 1
    return states
