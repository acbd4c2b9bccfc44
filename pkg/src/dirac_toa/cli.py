"""Batch verification driver.

Subcommands run the verification suites and sweeps, print one PASS/FAIL
line per check, and write CSV artifacts (plus rendered figures) into the
output directory.  Exit codes: 0 all checks passed, 1 tolerance breach,
2 configuration or precondition error.

Grid defaults follow the mass scale: p_min = 0.01 * m (or 0.01 * p_max for
m = 0) and p_max = 20 * max(m, 1).  Checks with stricter resolvability
requirements (interval-eigenfunction residuals, completeness, the spectral
trace identity) run on documented sub-ranges of the main grid: the quartic
spectral weight has a branch point at p = 0 and the energy-side Jacobian
one at |E| = m, so spectral accuracy at moderate n needs branches that
keep their distance from those points.  See docs/formats.md for the file
schemas.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import reporting as rep
from .algebra import (
    ALPHA1,
    BETA,
    I2,
    SIGMA1,
    alpha_beta,
    clifford_residual,
    dagger,
    frobenius,
    random_unitary,
    similarity_transform,
    standard_gammas,
)
from .eigensystem import (
    completeness_check,
    eigen_residual,
    eigfun_by_x,
    orthogonality_check,
    truncated_plane_kernel,
)
from .grids import (
    Grid1D,
    interior_gaussian_states,
    make_energy_grid,
    make_momentum_grid,
    make_position_grid,
)
from .limits import (
    default_epsilon_samples,
    dual_equation_report,
    duality_table_check,
    nonrel_eigenfunction_limit,
    nonrel_eigenvalue_limit,
)
from .operators import (
    build_suite,
    build_toa_momentum,
    commutator_defect,
    energy_image_grid,
    energy_rep_trace_identity,
    kinetic_energy_operator,
    symmetrized_defect,
    trace_identity_quad_reference,
)
from .selfadjoint import (
    boundary_term_residual,
    deficiency_indices,
    massless_selfadjoint_check,
    symmetry_defect_energy,
)
from .spinors import (
    HALF_SPINS,
    PhysParams,
    QuantumNumbers,
    eta,
    phi_momentum,
    u_w_spinors,
    xi_position,
    zeta_limit,
)
from .wavepackets import make_gaussian_packet, packet_reconstruction_check, toa_amplitudes

TIERS = {"algebraic": 1e-12, "spectral": 1e-8, "commutator": 1e-6, "truncation": 1e-4}

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_CONFIG = 2


def _parse_masses(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValueError(f"cannot parse mass list {text!r}") from exc
    if len(values) < 2:
        raise ValueError("mass list needs at least two entries")
    return values


def _parse_window(text: str) -> tuple[float, float, int]:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError("window must be LO,HI,COUNT")
    return float(parts[0]), float(parts[1]), int(parts[2])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirac-toa",
        description="Verification suites for the relativistic arrival-time operator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mass", type=float, default=None, help="rest mass m >= 0 (default 1)")
    common.add_argument("--p-min", type=float, default=None, help="inner momentum cut (default 0.01*m)")
    common.add_argument("--p-max", type=float, default=None, help="outer momentum cut (default 20*max(m,1))")
    common.add_argument("--n", type=int, default=None, help="nodes per branch (default 64)")
    common.add_argument("--scheme", choices=["chebyshev", "uniform"], default=None)
    common.add_argument("--out-dir", default=None, help="artifact directory (default ./toa-out)")
    common.add_argument("--seed", type=int, default=None, help="seed for the similarity-test unitary (default 0)")
    common.add_argument("--config", default=None, help="key=value config file; explicit flags win")
    common.add_argument("--no-plots", action="store_true", help="skip figure rendering")
    for tier, default in TIERS.items():
        common.add_argument(
            f"--tol-{tier}", type=float, default=None,
            help=f"{tier}-tier tolerance (default {default:g})",
        )

    p = sub.add_parser("verify-algebra", parents=[common], help="matrix algebra and spinor suites")
    p.add_argument("--suites", default="clifford,spinors,duality",
                   help="comma list of suites (clifford, spinors, duality); empty = no-op")
    p.add_argument("--inject-gamma-perturbation", action="store_true",
                   help="test hook: perturb gamma1 to force a Clifford failure")

    p = sub.add_parser("verify-operators", parents=[common], help="operator and eigensystem suites")
    p.add_argument("--grid-spec", default=None, help="grid key-value file overriding the momentum grid")
    p.add_argument("--dump-operators", action="store_true",
                   help="export dense operator CSVs (large files)")

    p = sub.add_parser("deficiency", parents=[common], help="symmetry and deficiency-index analysis")
    p.add_argument("--e-max", type=float, default=None, help="energy truncation (default 50*max(m,1))")
    p.add_argument("--single-branch", action="store_true",
                   help="restrict to the (m, inf) branch: lower-bounded-spectrum control")

    p = sub.add_parser("limits", parents=[common], help="nonrelativistic limit sweeps")
    p.add_argument("--masses", default="10,20,40,80,160", help="comma list of sweep masses")
    p.add_argument("--x", type=float, default=1.0, help="interval for the eigenvalue limit")
    p.add_argument("--p", type=float, default=1.0, help="momentum for the eigenvalue limit")
    p.add_argument("--T", type=float, default=1.0, help="arrival time for the eigenfunction limit")

    p = sub.add_parser("duality", parents=[common], help="dual evolution equation and duality table")

    p = sub.add_parser("wavepacket", parents=[common], help="arrival-time distribution of a packet")
    p.add_argument("--p0", type=float, default=None, help="packet center (default 2*max(m,1))")
    p.add_argument("--sigma-p", type=float, default=None, help="packet width (default max(m,1)/4)")
    p.add_argument("--x0", type=float, default=0.0, help="initial position (momentum-space phase)")
    p.add_argument("--mix", default="0.7071067811865476,0.7071067811865476",
                   help="channel weights w_plus,w_minus")
    p.add_argument("--mix-phase-deg", type=float, default=90.0,
                   help="relative phase of the negative-energy channel (degrees)")
    p.add_argument("--x-window", default=None, help="LO,HI,COUNT for the x samples")
    return parser


def _apply_config_file(args: argparse.Namespace):
    if not args.config:
        return
    if not os.path.exists(args.config):
        raise ValueError(f"config file not found: {args.config}")
    with open(args.config) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            attr = key.strip().replace("-", "_")
            if not hasattr(args, attr):
                raise ValueError(f"unknown config key {key.strip()!r}")
            if getattr(args, attr) is None:  # explicit flags win
                current_type = float if attr not in ("n", "seed") else int
                if attr in ("scheme", "out_dir", "masses", "x_window", "mix", "suites", "grid_spec"):
                    setattr(args, attr, value.strip())
                else:
                    setattr(args, attr, current_type(value.strip()))


class RunConfig:
    """Validated run parameters with mass-scaled grid defaults."""

    def __init__(self, args: argparse.Namespace):
        self.mass = 1.0 if args.mass is None else float(args.mass)
        if not np.isfinite(self.mass) or self.mass < 0.0:
            raise ValueError(f"mass must be finite and >= 0, got {self.mass}")
        self.scale = max(self.mass, 1.0)
        self.p_max = 20.0 * self.scale if args.p_max is None else float(args.p_max)
        if args.p_min is not None:
            self.p_min = float(args.p_min)
        elif self.mass > 0.0:
            self.p_min = 1e-2 * self.mass
        else:
            self.p_min = 1e-2 * self.p_max
        if not 0.0 < self.p_min < self.p_max:
            raise ValueError(f"need 0 < p_min < p_max, got ({self.p_min}, {self.p_max})")
        self.n = 64 if args.n is None else int(args.n)
        if self.n < 8:
            raise ValueError("n must be at least 8")
        self.scheme = args.scheme or "chebyshev"
        self.out_dir = args.out_dir or "toa-out"
        self.seed = 0 if args.seed is None else int(args.seed)
        self.plots = not args.no_plots
        self.tols = {}
        for tier, default in TIERS.items():
            override = getattr(args, f"tol_{tier}")
            self.tols[tier] = default if override is None else float(override)
        self.params = PhysParams(m=self.mass)

    def momentum_grid(self) -> Grid1D:
        return make_momentum_grid(self.p_min, self.p_max, self.n, self.scheme)

    def residual_grid(self) -> Grid1D:
        """Sub-range grid for interval-eigenfunction residuals.

        Branches [p_max/40, p_max/2]: far enough from the p = 0 branch
        point of the spectral weight for spectral convergence at n = 64.
        """
        return make_momentum_grid(self.p_max / 40.0, self.p_max / 2.0, self.n, self.scheme)

    def path(self, name: str) -> str:
        return os.path.join(self.out_dir, name)


def _finish(cfg: RunConfig, results: list, csv_name: str, fig_title: str | None = None) -> int:
    ok = rep.print_checks(results)
    rep.write_checks_csv(cfg.path(csv_name), results, fig_title or csv_name)
    if cfg.plots and fig_title is not None:
        rep.fig_defect_bars(cfg.path(csv_name.replace(".csv", ".png")), results, fig_title)
    return EXIT_OK if ok else EXIT_TOLERANCE


# --------------------------------------------------------------------------
# verify-algebra
# --------------------------------------------------------------------------


def cmd_verify_algebra(args) -> int:
    cfg = RunConfig(args)
    suites = [s.strip() for s in args.suites.split(",") if s.strip()]
    if not suites:
        print("warning: empty suite selection, nothing to do")
        return EXIT_OK
    unknown = set(suites) - {"clifford", "spinors", "duality"}
    if unknown:
        raise ValueError(f"unknown suites: {sorted(unknown)}")
    tol_a = cfg.tols["algebraic"]
    results = []

    if "clifford" in suites:
        gammas = standard_gammas()
        if args.inject_gamma_perturbation:
            g1 = gammas[1].copy()
            g1[0, 0] += 0.1
            gammas = (gammas[0], g1, gammas[2], gammas[3])
        results.append(rep.check("clifford_residual", clifford_residual(gammas), tol_a))
        u = random_unitary(4, cfg.seed)
        results.append(rep.check(
            "clifford_residual_unitary_conjugated",
            clifford_residual(similarity_transform(standard_gammas(), u)),
            tol_a, note=f"seed={cfg.seed}",
        ))
        a1, beta = alpha_beta()
        results.append(rep.check("alpha1_hermitian", frobenius(a1 - dagger(a1)), tol_a))
        results.append(rep.check("alpha1_squares_to_identity", frobenius(a1 @ a1 - np.eye(4)), tol_a))
        results.append(rep.check("beta_squares_to_identity", frobenius(beta @ beta - np.eye(4)), tol_a))
        results.append(rep.check("alpha1_beta_anticommute", frobenius(a1 @ beta + beta @ a1), tol_a))
        results.append(rep.check("sigma1_squares_to_identity", frobenius(SIGMA1 @ SIGMA1 - np.asarray(I2)), tol_a))

    if "spinors" in suites:
        worst_norm = worst_orth = worst_eig = 0.0
        for m in (0.0, 1.0, 3.0):
            params = PhysParams(m=m)
            for p in (-4.0, -0.7, 0.5, 4.0):
                h = ALPHA1 * p + BETA * m
                e = np.hypot(p, m)
                spin = {}
                for lam in (1, -1):
                    for s in HALF_SPINS:
                        spin[(lam, s)] = phi_momentum(QuantumNumbers(lam=lam, s=s), p, params)
                for (lam, s), v in spin.items():
                    worst_norm = max(worst_norm, abs(np.vdot(v, v).real - 1.0))
                    worst_eig = max(worst_eig, float(np.linalg.norm(h @ v - lam * e * v)) / e)
                    for (lam2, s2), v2 in spin.items():
                        if (lam, s) != (lam2, s2):
                            worst_orth = max(worst_orth, abs(np.vdot(v, v2)))
        results.append(rep.check("spinor_normalization", worst_norm, tol_a))
        results.append(rep.check("spinor_orthogonality", worst_orth, tol_a))
        results.append(rep.check("spinor_eigenvector_residual", worst_eig, tol_a))
        comp = sum(np.outer(eta(s), np.conj(eta(s))) for s in HALF_SPINS)
        results.append(rep.check("eta_completeness", frobenius(comp - np.asarray(I2)), tol_a))
        uw = 0.0
        for p in (-3.0, 2.0):
            u_sp, w_sp = u_w_spinors(0.5, p, PhysParams(m=1.0))
            uw = max(uw, abs(np.vdot(u_sp, u_sp).real - 1.0), abs(np.vdot(w_sp, w_sp).real - 1.0))
        results.append(rep.check("u_w_normalization", uw, tol_a))

    if "duality" in suites:
        worst = 0.0
        for b in (1, -1):
            for s in HALF_SPINS:
                for (x, tau) in ((4.0, 3.0), (0.5, 2.0), (3.0, 0.0), (-2.0, 1.0)):
                    xi = xi_position(b, s, x, tau)
                    phi = phi_momentum(QuantumNumbers(lam=b, s=s), x, PhysParams(m=tau))
                    worst = max(worst, float(np.max(np.abs(xi - phi))))
        results.append(rep.check("interval_momentum_spinor_duality", worst, tol_a))
        # large-mass limit through the u/w forms: u -> zeta_+, w -> zeta_-
        dev = 0.0
        big_m = 1e6
        for s in HALF_SPINS:
            u_sp, w_sp = u_w_spinors(s, 1.0, PhysParams(m=big_m))
            for v, z in ((u_sp, zeta_limit(1, s)), (w_sp, zeta_limit(-1, s))):
                rate = float(np.linalg.norm(v - z)) * 2.0 * big_m  # ~ p/(2m) each
                dev = max(dev, abs(rate - 1.0))
        results.append(rep.check("large_mass_spinor_limit_rate", dev, 2e-1,
                                 note="|u - zeta| ~ p/2m within 20%"))

    return _finish(cfg, results, "verify_algebra.csv", "matrix algebra and spinor identities")


# --------------------------------------------------------------------------
# verify-operators
# --------------------------------------------------------------------------


def cmd_verify_operators(args) -> int:
    cfg = RunConfig(args)
    tol_a, tol_s = cfg.tols["algebraic"], cfg.tols["spectral"]
    tol_c, tol_t = cfg.tols["commutator"], cfg.tols["truncation"]
    results = []

    if args.grid_spec:
        with open(args.grid_spec) as fh:
            grid = Grid1D.from_text(fh.read())
        if grid.kind != "momentum":
            raise ValueError("grid-spec must describe a momentum grid")
    else:
        grid = cfg.momentum_grid()
    rep.atomic_write_text(cfg.path("grid.txt"), grid.to_text())
    params = cfg.params
    suite = build_suite(grid, params)

    shell = 0.0
    for m_test in sorted({0.0, cfg.mass, 5.0}):
        for p in grid.nodes:
            h = ALPHA1 * p + BETA * m_test
            shell = max(shell, frobenius(h @ h - (p * p + m_test * m_test) * np.eye(4)))
    results.append(rep.check("mass_shell_per_node", shell, max(tol_a, 1e-12 * (cfg.p_max**2)),
                             note="absolute, scales with p_max^2"))
    results.append(rep.check("hamiltonian_weight_hermiticity",
                             suite.h.hermiticity_defect() / max(1.0, cfg.p_max), 1e-10))

    states = interior_gaussian_states(grid, 10)
    comm = commutator_defect(suite.t_dirac, suite.h, states)
    results.append(rep.check("canonical_commutator_dirac", comm, tol_c))
    rep.write_csv(
        cfg.path("commutator_defects.csv"),
        "# per-state relative defect of [T,H]+i on interior Gaussians (natural units)",
        {
            "state": np.arange(len(states)),
            "defect": [commutator_defect(suite.t_dirac, suite.h, [s]) for s in states],
        },
    )
    if cfg.mass > 0.0:
        comm_n = commutator_defect(suite.t_non, kinetic_energy_operator(grid, params), states)
        results.append(rep.check("canonical_commutator_nonrel", comm_n, tol_c))

    rg = cfg.residual_grid()
    sym_defect, sym_raw = symmetrized_defect(rg, params, interior_gaussian_states(rg, 6))
    results.append(rep.check("symmetrized_vs_simplified_assembly", sym_defect, 1e-10,
                             note=f"raw matrix defect {sym_raw:.3e} (1/p interpolation)"))

    top = build_toa_momentum(rg, params)
    worst_res = 0.0
    rows = {"x": [], "lam": [], "s": [], "residual": []}
    for x in (0.05 * cfg.p_max / 2, 0.15 * cfg.p_max / 2, 0.3 * cfg.p_max / 2):
        for lam in (1, -1):
            for s in HALF_SPINS:
                eig = eigfun_by_x(x, QuantumNumbers(lam=lam, s=s), rg, params)
                res = eigen_residual(top, eig)
                worst_res = max(worst_res, res)
                rows["x"].append(x)
                rows["lam"].append(lam)
                rows["s"].append(s)
                rows["residual"].append(res)
    rep.write_csv(cfg.path("eigen_residuals.csv"),
                  "# nodewise eigenvalue residuals of interval-labelled eigenfunctions",
                  rows)
    results.append(rep.check("interval_eigenfunction_residual", worst_res, tol_s,
                             note="increase n (spectral resolution)" if worst_res >= tol_s else ""))
    eig_dump = eigfun_by_x(0.1 * cfg.p_max / 2, QuantumNumbers(lam=1, s=0.5), rg, params)
    rep.eigenfunction_to_csv(cfg.path("eigenfunction_example.csv"), eig_dump, rg, params)

    if cfg.mass > 0.0:
        from .grids import make_momentum_window, spinor_state
        gw = make_momentum_window(0.5 * cfg.scale, 2.5 * cfg.scale, cfg.n, cfg.scheme)
        t_val = 1.3 / cfg.scale
        p = gw.nodes
        prof = np.sqrt(np.abs(p)) * np.exp(1j * p * p * t_val / (2.0 * cfg.mass))
        f = spinor_state(gw, prof, np.array([1, 0, 0, 0], dtype=complex))
        tn = build_suite(gw, params).t_non
        diff = tn.apply(f).values - t_val * f.values
        res = float(np.sqrt(np.sum(gw.weights * np.sum(np.abs(diff) ** 2, axis=1))) / f.norm())
        results.append(rep.check("nonrel_eigenfunction_residual", res, tol_s))

    ortho = 0.0
    qn = QuantumNumbers(lam=1, s=0.5)
    for qn2 in (QuantumNumbers(lam=-1, s=0.5), QuantumNumbers(lam=1, s=-0.5)):
        ortho = max(ortho, abs(orthogonality_check(0.4, 0.4, qn, qn2, rg, params)))
    results.append(rep.check("eigenfunction_label_orthogonality", ortho, 1e-10))
    m0 = PhysParams(m=0.0)
    kerr = 0.0
    lo, hi = rg.branches[-1].lo, rg.branches[-1].hi
    for (x, xo) in ((0.3, 0.9), (0.0, 0.75)):
        val = orthogonality_check(x, xo, qn, qn, rg, m0)
        kerr = max(kerr, abs(val - truncated_plane_kernel(x - xo, lo, hi)))
    results.append(rep.check("truncated_kernel_orthogonality", kerr, 1e-10))

    scale = cfg.scale
    gp_c = make_momentum_grid(0.2 * scale, 8.0 * scale, max(cfg.n, 96), cfg.scheme)
    x_win = 12.0 / scale
    dx = np.pi / (2.0 * 8.0 * scale)
    nx = int(2 * x_win / dx) + 1
    gx = make_position_grid(-x_win, x_win, nx, scheme="uniform")
    dev = completeness_check(gp_c, gx, params)
    results.append(rep.check("completeness_weighted_identity", dev, tol_t))

    gp_t = make_momentum_grid(1.0 * scale, cfg.p_max, 96, cfg.scheme)
    ge_t = energy_image_grid(gp_t, params, 80)
    lhs, rhs = energy_rep_trace_identity(gp_t, ge_t, params)
    results.append(rep.check("trace_identity_measure_change", abs(lhs - rhs) / abs(lhs), tol_c,
                             note=f"lhs={lhs:.9g} rhs={rhs:.9g}"))
    ref = trace_identity_quad_reference(gp_t.branches[-1].lo, gp_t.branches[-1].hi,
                                        cfg.mass, np.hypot(cfg.p_max, cfg.mass) / 3.0)
    results.append(rep.check("trace_identity_vs_adaptive_quadrature", abs(lhs - ref) / abs(ref), tol_c))

    if cfg.mass == 0.0:
        gx0 = make_position_grid(-cfg.p_max / 4.0, cfg.p_max / 4.0, cfg.n, cfg.scheme)
        mc = massless_selfadjoint_check(gx0)
        results.append(rep.check("massless_position_op_hermiticity", mc.hermiticity_defect, 1e-14))
        results.append(rep.check("massless_position_op_real_spectrum", mc.max_imag_eigenvalue, tol_a))
        results.append(rep.check("massless_position_op_spectrum_match",
                                 mc.spectrum_defect / max(1.0, cfg.p_max / 4.0), tol_a))

    if args.dump_operators:
        rep.operator_to_csv(cfg.path("hamiltonian.csv"), suite.h, note=f"m={cfg.mass}")
        rep.operator_to_csv(cfg.path("toa_momentum.csv"), suite.t_dirac, note=f"m={cfg.mass}")

    return _finish(cfg, results, "verify_operators.csv", "operator and eigensystem checks")


# --------------------------------------------------------------------------
# deficiency / limits / duality / wavepacket
# --------------------------------------------------------------------------


def cmd_deficiency(args) -> int:
    cfg = RunConfig(args)
    if cfg.mass <= 0.0:
        raise ValueError("deficiency analysis needs mass > 0 (use verify-operators for m = 0)")
    e_max = args.e_max if args.e_max is not None else 50.0 * cfg.scale
    report = deficiency_indices(cfg.mass, e_max, single_branch=args.single_branch)
    text = report.to_text()
    print(text, end="")
    rep.atomic_write_text(cfg.path("deficiency.txt"), text)

    results = []
    grid_e = make_energy_grid(cfg.mass, 20.0 * cfg.scale, cfg.n, cfg.scheme)
    results.append(rep.check(
        "energy_symmetry_vanishing_bc",
        symmetry_defect_energy(grid_e, "vanish_at_m"), cfg.tols["spectral"],
    ))
    free_defect = symmetry_defect_energy(grid_e, "free")
    results.append(rep.CheckResult(
        "energy_symmetry_boundary_violation", free_defect, 1e-3,
        passed=bool(free_defect > 1e-3),
        note="defect must EXCEED 1e-3 when the boundary condition is dropped",
    ))
    results.append(rep.check(
        "boundary_term_formula", boundary_term_residual(grid_e), cfg.tols["spectral"],
    ))
    expected_equal = not args.single_branch
    results.append(rep.CheckResult(
        "deficiency_indices_equality", float(report.n_plus == report.n_minus), 2.0,
        passed=(report.equal == expected_equal),
        note=f"n+={report.n_plus} n-={report.n_minus} single_branch={args.single_branch}",
    ))
    ok = rep.print_checks(results)
    rep.write_checks_csv(cfg.path("deficiency_checks.csv"), results, "self-adjointness diagnostics")
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_limits(args) -> int:
    cfg = RunConfig(args)
    masses = _parse_masses(args.masses)
    sweep_val = nonrel_eigenvalue_limit(args.x, args.p, masses)
    sweep_fun = nonrel_eigenfunction_limit(args.T, 0.5, masses)
    sweep_keep = nonrel_eigenfunction_limit(args.T, 0.5, masses, remove_rest_phase=False)

    rep.write_csv(
        cfg.path("limit_eigenvalue.csv"),
        f"# arrival-time eigenvalue deviation |x||p|/(E+m) at x={args.x}, p={args.p} (natural units)",
        {"mass": sweep_val.masses, "deviation": sweep_val.deviations},
    )
    rep.write_csv(
        cfg.path("limit_eigenfunction.csv"),
        f"# eigenfunction deviation on p-window {sweep_fun.fixed_p_window}, T={args.T}; "
        "rest-phase removed vs kept (natural units)",
        {
            "mass": sweep_fun.masses,
            "deviation": sweep_fun.deviations,
            "deviation_rest_phase_kept": sweep_keep.deviations,
        },
    )
    print(f"eigenvalue-limit fitted slope vs log m: {sweep_val.fitted_slope_logm:.4f}")
    print(f"eigenfunction-limit fitted slope vs log m: {sweep_fun.fitted_slope_logm:.4f}")
    rep.write_keyvalues(
        cfg.path("limits_summary.txt"),
        "nonrelativistic limit sweep summary (natural units)",
        {
            "eigenvalue_slope_logm": sweep_val.fitted_slope_logm,
            "eigenvalue_fitted_order": sweep_val.fitted_order,
            "eigenfunction_slope_logm": sweep_fun.fitted_slope_logm,
            "eigenfunction_fitted_order": sweep_fun.fitted_order,
            "min_deviation_rest_phase_kept": float(np.min(sweep_keep.deviations)),
            "p_window_lo": sweep_fun.fixed_p_window[0],
            "p_window_hi": sweep_fun.fixed_p_window[1],
        },
    )

    results = [
        rep.check_in_range("eigenvalue_limit_slope", sweep_val.fitted_slope_logm, -1.2, -0.8),
        rep.check_in_range("eigenfunction_limit_slope", sweep_fun.fitted_slope_logm, -1.2, -0.8),
        rep.CheckResult(
            "rest_phase_removal_necessary", float(np.min(sweep_keep.deviations)), 0.5,
            passed=bool(np.min(sweep_keep.deviations) > 0.5),
            note="order-one deviation when e^{imT} is kept",
        ),
        rep.CheckResult(
            "deviations_monotone", 1.0, 2.0, passed=sweep_fun.monotone_decreasing(),
        ),
    ]
    ok = rep.print_checks(results)
    rep.write_checks_csv(cfg.path("limits_checks.csv"), results, "nonrelativistic limit checks")
    if cfg.plots:
        rep.fig_limit_sweep(cfg.path("limit_eigenfunction.png"), sweep_fun.masses,
                            sweep_fun.deviations, sweep_fun.fitted_slope_logm,
                            "eigenfunction limit")
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_duality(args) -> int:
    cfg = RunConfig(args)
    table = duality_table_check(cfg.params)
    results = [
        rep.CheckResult(f"duality_{row.name}", row.defect, row.tolerance,
                        passed=row.passed, note=row.note)
        for row in table.rows
    ]
    m0 = PhysParams(m=0.0)
    g0 = make_momentum_grid(cfg.p_max / 40.0, cfg.p_max / 2.0, max(cfg.n, 96), cfg.scheme)
    x_label = 0.15 * cfg.p_max / 2.0
    eps = default_epsilon_samples(x_label, 0.0)
    dual = dual_equation_report(x_label, 1, 0.5, 0.0, g0, eps, m0)
    results.append(rep.check("dual_equation_exact_route", dual.exact, cfg.tols["spectral"]))
    eps_fine = default_epsilon_samples(x_label, 0.0, 201)
    dual_fine = dual_equation_report(x_label, 1, 0.5, 0.0, g0, eps_fine, m0)
    ratio = (dual.finite_difference - dual.exact) / max(dual_fine.finite_difference - dual_fine.exact, 1e-300)
    results.append(rep.check_in_range("dual_equation_fd_second_order", ratio, 3.5, 4.5,
                                      note="halved step, error ratio ~ 4"))
    flip = dual_equation_report(x_label, -1, 0.5, 0.0, g0, eps, m0)
    results.append(rep.check("dual_equation_b_flip_symmetry",
                             abs(dual.exact - flip.exact) / max(dual.exact, 1e-300), 1e-6))
    ok = rep.print_checks(results)
    rep.write_checks_csv(cfg.path("duality_checks.csv"), results, "duality table and dual equation")
    if cfg.plots:
        rep.fig_defect_bars(cfg.path("duality_checks.png"), results, "duality checks")
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_wavepacket(args) -> int:
    cfg = RunConfig(args)
    if cfg.mass <= 0.0:
        raise ValueError("wavepacket demo needs mass > 0")
    scale = cfg.scale
    p0 = args.p0 if args.p0 is not None else 2.0 * scale
    sigma = args.sigma_p if args.sigma_p is not None else scale / 4.0
    w_plus, w_minus = (float(t) for t in args.mix.split(","))
    w_minus = w_minus * np.exp(1j * np.deg2rad(args.mix_phase_deg))
    grid = make_momentum_grid(cfg.p_min, 8.0 * scale, max(cfg.n, 96), cfg.scheme)
    packet = make_gaussian_packet(p0, sigma, (w_plus, w_minus), 0.5, grid, cfg.params, x0=args.x0)
    packet_pure = make_gaussian_packet(p0, sigma, (1.0, 0.0), 0.5, grid, cfg.params, x0=args.x0)

    if args.x_window:
        lo, hi, count = _parse_window(args.x_window)
    else:
        lo, hi, count = -4.0 / scale, 4.0 / scale, 81
    xs = np.linspace(lo, hi, count)
    xs = xs[xs != 0.0]
    dist = toa_amplitudes(packet, xs)
    dist_pure = toa_amplitudes(packet_pure, xs)

    cols = {"x": dist.x_samples, "T_classical_at_p0": dist.classical_time_at_p0}
    for (b, s), amp in sorted(dist.amplitudes.items()):
        tag = f"b{'p' if b > 0 else 'm'}_s{'p' if s > 0 else 'm'}"
        cols[f"re_{tag}"] = amp.real
        cols[f"im_{tag}"] = amp.imag
    cols["density"] = dist.density
    cols["interference"] = dist.interference
    rep.write_csv(
        cfg.path("toa_distribution.csv"),
        f"# arrival-time distribution, packet p0={p0} sigma_p={sigma} "
        f"mix=({w_plus:.4g},{abs(w_minus):.4g} @ {args.mix_phase_deg}deg) x0={args.x0}; natural units",
        cols,
    )

    interf_ratio = float(np.max(np.abs(dist.interference)) / np.max(dist.density))
    pure_interf = float(np.max(np.abs(dist_pure.interference)))
    rec_full, rec_drop = packet_reconstruction_check(packet)
    dropped_fraction = np.sqrt(sum(
        v for (lam, _), v in packet.channel_norms().items() if lam == -1
    ))
    results = [
        rep.check("packet_norm", abs(packet.total_norm_sq() - 1.0), 1e-10),
        rep.check("packet_reconstruction_full_basis", rec_full, cfg.tols["algebraic"]),
        rep.check("dropped_channel_norm_accounting", abs(rec_drop - dropped_fraction), 1e-10),
        rep.CheckResult(
            "interference_regression", interf_ratio, 0.01,
            passed=bool(interf_ratio > 0.01),
            note="mixed packet must exceed 1% of peak density",
        ),
        rep.check("pure_packet_interference", pure_interf, 1e-12),
    ]
    ok = rep.print_checks(results)
    rep.write_checks_csv(cfg.path("wavepacket_checks.csv"), results, "arrival-time distribution checks")
    if cfg.plots:
        rep.fig_distribution(cfg.path("toa_distribution.png"), dist,
                             f"arrival-time density (m={cfg.mass}, p0={p0})")
    return EXIT_OK if ok else EXIT_TOLERANCE


_COMMANDS = {
    "verify-algebra": cmd_verify_algebra,
    "verify-operators": cmd_verify_operators,
    "deficiency": cmd_deficiency,
    "limits": cmd_limits,
    "duality": cmd_duality,
    "wavepacket": cmd_wavepacket,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0,) else 0
    try:
        _apply_config_file(args)
        os.makedirs(args.out_dir or "toa-out", exist_ok=True)
        return _COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
