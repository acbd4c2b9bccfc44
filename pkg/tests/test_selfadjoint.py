import numpy as np
import pytest
import scipy.integrate

from dirac_toa import (
    boundary_term,
    boundary_term_residual,
    build_toa_energy,
    deficiency_indices,
    make_energy_grid,
    make_position_grid,
    massless_selfadjoint_check,
    spinor_state,
    symmetry_defect_energy,
)
from dirac_toa.grids import gaussian_profile, inner
from dirac_toa.selfadjoint import symmetry_form_defect


@pytest.fixture(scope="module")
def energy_grid():
    return make_energy_grid(1.0, 20.0, 64)


# --- symmetry of -i d/dE -----------------------------------------------------------


def test_symmetry_with_vanishing_boundary(energy_grid):
    assert symmetry_defect_energy(energy_grid, "vanish_at_m") < 1e-8


def test_symmetry_violated_without_boundary_condition(energy_grid):
    assert symmetry_defect_energy(energy_grid, "free") > 1e-3


def test_boundary_term_formula_reproduced(energy_grid):
    assert boundary_term_residual(energy_grid) < 1e-8


def test_boundary_mode_validation(energy_grid):
    with pytest.raises(ValueError):
        symmetry_defect_energy(energy_grid, "periodic")


def test_real_state_diagonal_form_vanishes(energy_grid):
    """<phi | T phi> = -(i/2) [phi^2] = 0 for real phi vanishing at the ends."""
    prof = gaussian_profile(energy_grid, 10.0, 1.2)
    phi = spinor_state(energy_grid, prof, np.array([1, 0, 0, 0], dtype=complex))
    op = build_toa_energy(energy_grid)
    assert abs(inner(phi, op.apply(phi))) < 1e-8


def test_boundary_term_matches_quadrature_defect(energy_grid):
    """The measured asymmetry equals -i [psi* phi] at the branch endpoints."""
    nodes = energy_grid.nodes
    br = energy_grid.branches[1]
    prof_a = np.exp(-((nodes - br.lo) ** 2) / (2.0 * (br.hi - br.lo) ** 2 / 36.0))
    prof_b = np.exp(-((nodes - (br.lo + 3.0)) ** 2) / 8.0)
    psi = spinor_state(energy_grid, prof_a, np.array([1, 0, 0, 0], dtype=complex))
    phi = spinor_state(energy_grid, prof_b, np.array([1, 0, 0, 0], dtype=complex))
    measured = symmetry_form_defect(energy_grid, psi, phi)
    predicted = boundary_term(energy_grid, psi, phi)
    assert abs(measured - predicted) < 1e-8 * psi.norm() * phi.norm()
    assert abs(predicted) > 1e-6  # the pair genuinely violates the condition


# --- deficiency indices -------------------------------------------------------------


def test_deficiency_two_branch_equal_indices():
    report = deficiency_indices(1.0, 50.0)
    assert (report.n_plus, report.n_minus) == (1, 1)
    assert report.equal
    assert report.n_plus_total == report.n_minus_total == 4
    assert report.per_branch["(m, +inf)"] == (True, False)
    assert report.per_branch["(-inf, -m)"] == (False, True)
    assert report.tail_estimate < 1e-10


def test_deficiency_single_branch_obstruction():
    report = deficiency_indices(1.0, 50.0, single_branch=True)
    assert (report.n_plus, report.n_minus) == (1, 0)
    assert not report.equal


def test_deficiency_closed_form_oracle():
    """Quadrature of |e^{-(E-m)}|^2 on (m, E_max] against the closed form."""
    m, e_max = 1.0, 50.0
    val, _ = scipy.integrate.quad(lambda e: np.exp(-2.0 * (e - m)), m, e_max)
    closed = 0.5 * (1.0 - np.exp(-2.0 * (e_max - m)))
    assert abs(val - closed) < 1e-12
    tail = 0.5 * np.exp(-2.0 * (e_max - m))
    assert tail / val < 1e-10  # the normalizability criterion the report uses


def test_deficiency_validation():
    with pytest.raises(ValueError):
        deficiency_indices(0.0, 50.0)
    with pytest.raises(ValueError):
        deficiency_indices(1.0, 0.5)
    with pytest.raises(ValueError):
        deficiency_indices(1.0, 2.0)  # truncation too short for the tail bound


def test_deficiency_report_text():
    text = deficiency_indices(1.0, 50.0).to_text()
    assert "n_plus = n_minus: true" in text
    assert "single_branch_mode = false" in text
    text_single = deficiency_indices(1.0, 50.0, single_branch=True).to_text()
    assert "n_plus = n_minus: false" in text_single


# --- massless operator ---------------------------------------------------------------


def test_massless_operator_hermitian_and_real_spectrum():
    g = make_position_grid(-5.0, 5.0, 48)
    chk = massless_selfadjoint_check(g)
    assert chk.hermiticity_defect < 1e-14
    assert chk.max_imag_eigenvalue < 1e-12
    assert chk.spectrum_defect < 1e-12


def test_massless_spectrum_symmetric_under_negation():
    g = make_position_grid(-3.0, 7.0, 32)
    chk = massless_selfadjoint_check(g)
    eigs = chk.eigenvalues
    assert np.max(np.abs(np.sort(eigs) + np.sort(-eigs)[::-1])) < 1e-12
