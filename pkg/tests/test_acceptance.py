"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
report.  Every tolerance is pinned here; the whole module runs at desk
scale (seconds per criterion on one core).
"""

import numpy as np
import pytest

from dirac_toa import (
    ALPHA1,
    BETA,
    PhysParams,
    QuantumNumbers,
    boundary_term_residual,
    build_suite,
    build_toa_momentum,
    clifford_residual,
    commutator_defect,
    completeness_check,
    deficiency_indices,
    default_epsilon_samples,
    dual_equation_report,
    duality_table_check,
    eigen_residual,
    eigfun_by_x,
    interior_gaussian_states,
    make_energy_grid,
    make_gaussian_packet,
    make_momentum_grid,
    make_position_grid,
    massless_selfadjoint_check,
    nonrel_eigenfunction_limit,
    nonrel_eigenvalue_limit,
    packet_reconstruction_check,
    phi_momentum,
    symmetry_defect_energy,
    toa_amplitudes,
    xi_position,
)

SPINS = (0.5, -0.5)
LAMBDAS = (1, -1)


def report(criterion: str, measured, threshold, passed: bool, detail: str = ""):
    status = "PASS" if passed else "FAIL"
    extra = f" [{detail}]" if detail else ""
    print(f"\nACCEPTANCE {criterion}: {status} measured={measured:.6g} "
          f"threshold={threshold:.6g}{extra}")
    assert passed, f"{criterion}: measured {measured} vs threshold {threshold}"


def test_01_clifford_algebra():
    defect = clifford_residual()
    report("01 clifford-algebra", defect, 1e-12, defect < 1e-12)


def test_02_mass_shell(default_grid):
    worst = 0.0
    for m in (0.0, 1.0, 5.0):
        for p in default_grid.nodes:
            h = ALPHA1 * p + BETA * m
            worst = max(worst, float(np.max(np.abs(h @ h - (p * p + m * m) * np.eye(4)))))
    report("02 mass-shell", worst, 1e-12, worst < 1e-12, "m in {0, 1, 5}, default grid")


def test_03_spinor_suite():
    worst = 0.0
    for m in (0.0, 1.0, 3.0):
        params = PhysParams(m=m)
        for p in (-4.0, -0.6, 0.5, 4.0):
            e = np.hypot(p, m)
            h = ALPHA1 * p + BETA * m
            basis = {
                (lam, s): phi_momentum(QuantumNumbers(lam=lam, s=s), p, params)
                for lam in LAMBDAS
                for s in SPINS
            }
            for (lam, s), v in basis.items():
                worst = max(worst, abs(np.vdot(v, v).real - 1.0))
                # eigenvector residual relative to E_p (threshold 1e-12 * E_p)
                worst = max(worst, float(np.linalg.norm(h @ v - lam * e * v)) / e)
                for key2, v2 in basis.items():
                    if key2 != (lam, s):
                        worst = max(worst, abs(np.vdot(v, v2)))
    # eigenvector residual scaled against 1e-12 * E_p is folded in above;
    # interval/momentum structural duality:
    duality = 0.0
    for b in LAMBDAS:
        for s in SPINS:
            for (x, tau) in ((4.0, 3.0), (0.7, 1.3), (2.0, 0.0), (-1.5, 2.5)):
                xi = xi_position(b, s, x, tau)
                phi = phi_momentum(QuantumNumbers(lam=b, s=s), x, PhysParams(m=tau))
                duality = max(duality, float(np.max(np.abs(xi - phi))))
    worst = max(worst, duality)
    report("03 spinor-suite", worst, 1e-12, worst < 1e-12,
           "normalization, orthogonality, eigenvector, duality")


def test_04_canonical_commutator(params_m1):
    defects = {}
    for n in (32, 64, 128):
        grid = make_momentum_grid(0.01, 20.0, n)
        suite = build_suite(grid, params_m1)
        targets = interior_gaussian_states(grid, 10)
        defects[n] = commutator_defect(suite.t_dirac, suite.h, targets)
    decreasing = defects[32] > defects[64] > defects[128]
    passed = defects[64] < 1e-6 and decreasing
    report("04 canonical-commutator", defects[64], 1e-6, passed,
           f"n=32: {defects[32]:.3g}, n=64: {defects[64]:.3g}, n=128: {defects[128]:.3g}")


def test_05_interval_eigenfunction_residual(params_m1):
    grid = make_momentum_grid(0.5, 10.0, 128)
    op = build_toa_momentum(grid, params_m1)
    worst = 0.0
    for x in (0.5, 1.5, 3.0):
        for lam in LAMBDAS:
            for s in SPINS:
                eig = eigfun_by_x(x, QuantumNumbers(lam=lam, s=s), grid, params_m1)
                worst = max(worst, eigen_residual(op, eig))
    report("05 eigen-residual", worst, 1e-8, worst < 1e-8,
           "3 x 2 x 2 label lattice at n=128")


def test_06_massless_exactness():
    grid = make_position_grid(-5.0, 5.0, 64)
    chk = massless_selfadjoint_check(grid)
    passed = chk.hermiticity_defect < 1e-14 and chk.spectrum_defect < 1e-12
    report("06 massless-exactness", max(chk.hermiticity_defect, chk.spectrum_defect),
           1e-12, passed,
           f"hermiticity {chk.hermiticity_defect:.3g}, spectrum {chk.spectrum_defect:.3g}")


def test_07_energy_representation_symmetry():
    grid = make_energy_grid(1.0, 20.0, 64)
    vanish = symmetry_defect_energy(grid, "vanish_at_m")
    boundary = boundary_term_residual(grid)
    violated = symmetry_defect_energy(grid, "free")
    passed = vanish < 1e-8 and boundary < 1e-8 and violated > 1e-3
    report("07 energy-symmetry", max(vanish, boundary), 1e-8, passed,
           f"vanishing-bc {vanish:.3g}, boundary-term {boundary:.3g}, violated {violated:.3g}")


def test_08_deficiency_indices():
    two = deficiency_indices(1.0, 50.0)
    single = deficiency_indices(1.0, 50.0, single_branch=True)
    passed = (
        two.equal
        and (two.n_plus, two.n_minus) == (1, 1)
        and not single.equal
        and (single.n_plus, single.n_minus) == (1, 0)
    )
    report("08 deficiency-indices", float(two.n_plus), 2.0, passed,
           f"two-branch ({two.n_plus},{two.n_minus}), single-branch "
           f"({single.n_plus},{single.n_minus})")


def test_09_nonrelativistic_limit():
    masses = [10.0, 20.0, 40.0, 80.0, 160.0]
    sweep = nonrel_eigenvalue_limit(1.0, 1.0, masses)
    value_err = 0.0
    for m, dev in zip(sweep.masses, sweep.deviations):
        e = np.hypot(1.0, m)
        naive = abs((-e / 1.0) - (-m / 1.0))
        value_err = max(value_err, abs(naive - dev))
    fun = nonrel_eigenfunction_limit(1.0, 0.5, masses, p_window=(0.5, 2.0))
    kept = nonrel_eigenfunction_limit(1.0, 0.5, masses, p_window=(0.5, 2.0),
                                      remove_rest_phase=False)
    slope_ok = -1.2 <= fun.fitted_slope_logm <= -0.8
    rest_ok = float(np.min(kept.deviations)) > 0.5
    passed = value_err < 1e-12 and slope_ok and rest_ok
    report("09 nonrelativistic-limit", value_err, 1e-12, passed,
           f"slope {fun.fitted_slope_logm:.3f}, min kept-phase deviation "
           f"{np.min(kept.deviations):.3g}")


def test_10_duality(params_m1):
    m0 = PhysParams(m=0.0)
    grid = make_momentum_grid(0.5, 10.0, 128)
    eps = default_epsilon_samples(1.5, 0.0)
    dual = dual_equation_report(1.5, 1, 0.5, 0.0, grid, eps, m0)
    fine = dual_equation_report(1.5, 1, 0.5, 0.0, grid,
                                default_epsilon_samples(1.5, 0.0, 201), m0)
    ratio = (dual.finite_difference - dual.exact) / (fine.finite_difference - fine.exact)
    table = duality_table_check(params_m1)
    passed = dual.exact < 1e-8 and 3.5 < ratio < 4.5 and table.all_passed
    report("10 duality", dual.exact, 1e-8, passed,
           f"fd refinement ratio {ratio:.3f}, table rows "
           f"{'all pass' if table.all_passed else 'FAIL'}")


def test_11_completeness(params_m1):
    gp = make_momentum_grid(0.2, 8.0, 128)
    dx = np.pi / (2.0 * 8.0)  # 2x Nyquist oversampling
    nx = int(2 * 12.0 / dx) + 1
    gx = make_position_grid(-12.0, 12.0, nx, scheme="uniform")
    dev = completeness_check(gp, gx, params_m1)

    grid = make_momentum_grid(0.01, 8.0, 96)
    packet = make_gaussian_packet(2.0, 0.25, (1 / np.sqrt(2), 1 / np.sqrt(2)), 0.5,
                                  grid, params_m1)
    full, dropped = packet_reconstruction_check(packet)
    drop_err = abs(dropped - np.sqrt(0.5))
    passed = dev < 1e-4 and full < 1e-12 and drop_err < 1e-10
    report("11 completeness", dev, 1e-4, passed,
           f"packet reconstruction {full:.3g}, dropped-norm accounting {drop_err:.3g}")


def test_12_interference_regression(params_m1):
    grid = make_momentum_grid(0.01, 8.0, 96)
    mixed = make_gaussian_packet(2.0, 0.25, (1 / np.sqrt(2), 1j / np.sqrt(2)), 0.5,
                                 grid, params_m1)
    pure = make_gaussian_packet(2.0, 0.25, (1.0, 0.0), 0.5, grid, params_m1)
    xs = np.linspace(-4.0, 4.0, 81)
    xs = xs[xs != 0.0]
    dist = toa_amplitudes(mixed, xs)
    dist_pure = toa_amplitudes(pure, xs)
    ratio = float(np.max(np.abs(dist.interference)) / np.max(dist.density))
    pure_term = float(np.max(np.abs(dist_pure.interference)))
    passed = ratio > 0.01 and pure_term < 1e-12
    report("12 interference-regression", ratio, 0.01, passed,
           f"mixed/peak {ratio:.3g} (must exceed), unmixed {pure_term:.3g}")
