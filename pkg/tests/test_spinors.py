import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dirac_toa import (
    ALPHA1,
    BETA,
    SIGMA1,
    KinematicPoint,
    PhysParams,
    QuantumNumbers,
    eta,
    phi_momentum,
    u_w_spinors,
    xi_position,
    zeta_limit,
)

LAMBDAS = (1, -1)
SPINS = (0.5, -0.5)


def h_matrix(p, m):
    return ALPHA1 * p + BETA * m


# --- eta basis -------------------------------------------------------------


def test_eta_basis_vectors():
    assert np.array_equal(eta(0.5), [1, 0])
    assert np.array_equal(eta(-0.5), [0, 1])


def test_eta_orthonormal_and_complete():
    for s in SPINS:
        for s2 in SPINS:
            assert np.vdot(eta(s), eta(s2)) == (1.0 if s == s2 else 0.0)
    comp = sum(np.outer(eta(s), np.conj(eta(s))) for s in SPINS)
    assert np.array_equal(comp, np.eye(2))


def test_eta_invalid_spin_raises():
    with pytest.raises(ValueError):
        eta(0.3)


# --- label/parameter validation ---------------------------------------------


def test_quantum_number_validation():
    QuantumNumbers(lam=1, s=-0.5, b=-1)
    with pytest.raises(ValueError):
        QuantumNumbers(lam=0, s=0.5)
    with pytest.raises(ValueError):
        QuantumNumbers(lam=1, s=0.4)
    with pytest.raises(ValueError):
        QuantumNumbers(lam=1, s=0.5, b=2)


def test_phys_params_validation():
    PhysParams(m=0.0)
    with pytest.raises(ValueError):
        PhysParams(m=-1.0)
    with pytest.raises(ValueError):
        PhysParams(m=float("nan"))


def test_kinematic_point_345():
    kp = KinematicPoint(p=4.0, x=4.0, m=3.0)
    assert kp.e_p == pytest.approx(5.0, abs=1e-14)
    assert kp.tau == pytest.approx(3.0, abs=1e-14)
    assert kp.t_x == pytest.approx(5.0, abs=1e-14)
    with pytest.raises(ValueError):
        KinematicPoint(p=0.0, x=1.0, m=1.0)


@settings(max_examples=200, deadline=None)
@given(
    p=st.floats(min_value=1e-6, max_value=1e6).filter(lambda v: v != 0.0),
    x=st.floats(min_value=-1e6, max_value=1e6),
    m=st.floats(min_value=0.0, max_value=1e6),
)
def test_kinematic_point_invariants(p, x, m):
    kp = KinematicPoint(p=p, x=x, m=m)
    assert abs(kp.e_p**2 - p * p - m * m) <= 1e-12 * kp.e_p**2
    assert kp.e_p >= m
    assert abs(kp.t_x**2 - x * x - kp.tau**2) <= 1e-12 * max(kp.t_x**2, 1e-300)
    assert kp.t_x >= abs(x)


# --- momentum-space eigenspinors ---------------------------------------------


def test_phi_eigenvector_345_triple():
    params = PhysParams(m=3.0)
    h = h_matrix(4.0, 3.0)
    plus = phi_momentum(QuantumNumbers(lam=1, s=0.5), 4.0, params)
    minus = phi_momentum(QuantumNumbers(lam=-1, s=0.5), 4.0, params)
    assert np.vdot(plus, plus).real == pytest.approx(1.0, abs=1e-14)
    assert np.linalg.norm(h @ plus - 5.0 * plus) < 1e-13
    assert np.linalg.norm(h @ minus + 5.0 * minus) < 1e-13


@pytest.mark.parametrize("m", [0.0, 1.0, 3.0])
@pytest.mark.parametrize("p", [-4.0, -0.3, 0.7, 4.0])
def test_phi_orthonormal_eigenbasis(p, m):
    params = PhysParams(m=m)
    e = np.hypot(p, m)
    h = h_matrix(p, m)
    basis = {
        (lam, s): phi_momentum(QuantumNumbers(lam=lam, s=s), p, params)
        for lam in LAMBDAS
        for s in SPINS
    }
    for (lam, s), v in basis.items():
        assert abs(np.vdot(v, v).real - 1.0) < 1e-12
        assert np.linalg.norm(h @ v - lam * e * v) < 1e-12 * e
        # upper block along eta_s, lower block along sigma1 eta_s
        other = eta(-s)
        assert abs(np.vdot(other, v[:2])) < 1e-14
        assert abs(np.vdot(SIGMA1 @ other, v[2:])) < 1e-14
        for (lam2, s2), v2 in basis.items():
            if (lam, s) != (lam2, s2):
                assert abs(np.vdot(v, v2)) < 1e-12
    # pointwise completeness of the four channels
    comp = sum(np.outer(v, np.conj(v)) for v in basis.values())
    assert np.max(np.abs(comp - np.eye(4))) < 1e-12


def test_phi_rejects_zero_momentum():
    with pytest.raises(ValueError):
        phi_momentum(QuantumNumbers(), 0.0, PhysParams(m=1.0))
    with pytest.raises(ValueError):
        phi_momentum(QuantumNumbers(), np.array([1.0, 0.0]), PhysParams(m=1.0))


@pytest.mark.parametrize("p", [2.5, -2.5])
@pytest.mark.parametrize("lam", LAMBDAS)
def test_phi_massless_closed_form(p, lam):
    v = phi_momentum(QuantumNumbers(lam=lam, s=0.5), p, PhysParams(m=0.0))
    expected = np.zeros(4, dtype=complex)
    expected[:2] = eta(0.5)
    expected[2:] = lam * np.sign(p) * (SIGMA1 @ eta(0.5))
    expected /= np.sqrt(2.0)
    assert np.max(np.abs(v - expected)) < 1e-15


def test_phi_vectorized_matches_scalar():
    params = PhysParams(m=2.0)
    ps = np.array([-3.0, -1.0, 0.5, 4.0])
    block = phi_momentum(QuantumNumbers(lam=-1, s=-0.5), ps, params)
    for i, p in enumerate(ps):
        single = phi_momentum(QuantumNumbers(lam=-1, s=-0.5), float(p), params)
        assert np.array_equal(block[i], single)


def test_negative_energy_normalization_stable_form():
    """(E-m) evaluated as p^2/(E+m): finite, positive, and correct for small p."""
    m = 1.0
    for ratio in (1e-2, 1e-4):
        p = ratio * m
        v = phi_momentum(QuantumNumbers(lam=-1, s=0.5), p, PhysParams(m=m))
        e = np.hypot(p, m)
        naive = np.sqrt((e - m) / (2.0 * e))  # cancellation-prone
        stable = abs(v[0])
        tol = 1e-10 if ratio == 1e-2 else 1e-6
        assert abs(stable - naive) < tol * max(stable, 1e-300)
        assert abs(np.vdot(v, v).real - 1.0) < 1e-12
    # where the naive form collapses entirely, the stable one survives
    p = 1e-8 * m
    e = np.hypot(p, m)
    assert np.sqrt(max(e - m, 0.0) / (2.0 * e)) == 0.0  # naive underflows to 0
    v = phi_momentum(QuantumNumbers(lam=-1, s=0.5), p, PhysParams(m=m))
    assert v[0].real > 0.0
    assert np.isfinite(v).all()
    assert abs(np.vdot(v, v).real - 1.0) < 1e-12


# --- interval-space spinors ---------------------------------------------------


def test_xi_345_norm_and_eigenvector():
    xi = xi_position(1, 0.5, 4.0, 3.0)
    assert np.vdot(xi, xi).real == pytest.approx(1.0, abs=1e-14)
    # eigenvector of alpha1 x + beta tau with eigenvalue b T_x = 5
    mat = ALPHA1 * 4.0 + BETA * 3.0
    assert np.linalg.norm(mat @ xi - 5.0 * xi) < 1e-13


def test_xi_negative_branch_stable_form():
    # T_x - tau = x^2/(T_x + tau) = 2 for the (4, 3) pair
    xi = xi_position(-1, 0.5, 4.0, 3.0)
    assert abs(xi[0].real - np.sqrt(2.0 / 10.0)) < 1e-14
    assert np.vdot(xi, xi).real == pytest.approx(1.0, abs=1e-14)
    mat = ALPHA1 * 4.0 + BETA * 3.0
    assert np.linalg.norm(mat @ xi + 5.0 * xi) < 1e-13


def test_xi_zero_proper_time_massless_form():
    xi = xi_position(1, 0.5, 2.0, 0.0)
    expected = np.zeros(4, dtype=complex)
    expected[:2] = eta(0.5)
    expected[2:] = SIGMA1 @ eta(0.5)
    expected /= np.sqrt(2.0)
    assert np.max(np.abs(xi - expected)) < 1e-15


def test_xi_degenerate_inputs_raise():
    with pytest.raises(ValueError):
        xi_position(1, 0.5, 0.0, 0.0)
    with pytest.raises(ValueError):
        xi_position(-1, 0.5, 0.0, 3.0)  # b opposite to sign(tau) at x = 0
    xi = xi_position(1, 0.5, 0.0, 3.0)  # aligned case is fine
    assert np.vdot(xi, xi).real == pytest.approx(1.0, abs=1e-14)


@settings(max_examples=200, deadline=None)
@given(
    b=st.sampled_from(LAMBDAS),
    s=st.sampled_from(SPINS),
    x=st.floats(min_value=0.01, max_value=100.0),
    sign=st.sampled_from([1.0, -1.0]),
    tau=st.floats(min_value=0.0, max_value=100.0),
)
def test_xi_unit_norm_and_eigenvector_any_tau_sign(b, s, x, sign, tau):
    xv = sign * x
    xi = xi_position(b, s, xv, tau)
    t_x = np.hypot(xv, tau)
    assert abs(np.vdot(xi, xi).real - 1.0) < 1e-12
    mat = ALPHA1 * xv + BETA * tau
    assert np.linalg.norm(mat @ xi - b * t_x * xi) < 1e-12 * max(t_x, 1.0)


@settings(max_examples=200, deadline=None)
@given(
    b=st.sampled_from(LAMBDAS),
    s=st.sampled_from(SPINS),
    x=st.floats(min_value=0.01, max_value=100.0),
    tau=st.floats(min_value=0.0, max_value=100.0),
)
def test_interval_momentum_duality_componentwise(b, s, x, tau):
    """xi_{b s}(x, tau) equals phi_{lambda s}(p, m) under the substitution map."""
    xi = xi_position(b, s, x, tau)
    phi = phi_momentum(QuantumNumbers(lam=b, s=s), x, PhysParams(m=tau))
    assert np.max(np.abs(xi - phi)) < 1e-12


# --- u/w forms and limits ------------------------------------------------------


@pytest.mark.parametrize("p", [3.0, -3.0])
def test_u_w_forms(p):
    params = PhysParams(m=1.0)
    u, w = u_w_spinors(0.5, p, params)
    assert abs(np.vdot(u, u).real - 1.0) < 1e-14
    assert abs(np.vdot(w, w).real - 1.0) < 1e-14
    # u is the positive-energy eigenspinor
    assert np.array_equal(u, phi_momentum(QuantumNumbers(lam=1, s=0.5), p, params))
    # w's lower block is eta_s scaled by sqrt((m+E)/2E)
    e = np.hypot(p, 1.0)
    assert np.max(np.abs(w[2:] - np.sqrt((1.0 + e) / (2.0 * e)) * eta(0.5))) < 1e-14
    # w = sigma1 (p/|p|) phi_{-s}(-p), with sigma1 acting blockwise
    phi_neg = phi_momentum(QuantumNumbers(lam=-1, s=0.5), -p, params)
    sigma_block = np.kron(np.eye(2), np.asarray(SIGMA1))
    assert np.max(np.abs(w - np.sign(p) * sigma_block @ phi_neg)) < 1e-14


def test_u_w_reject_zero_momentum():
    with pytest.raises(ValueError):
        u_w_spinors(0.5, 0.0, PhysParams(m=1.0))


def test_zeta_limit_forms():
    assert np.array_equal(zeta_limit(1, 0.5), [1, 0, 0, 0])
    assert np.array_equal(zeta_limit(-1, -0.5), [0, 0, 0, 1])
    for s in SPINS:
        for s2 in SPINS:
            assert np.vdot(zeta_limit(1, s), zeta_limit(-1, s2)) == 0.0
    with pytest.raises(ValueError):
        zeta_limit(0, 0.5)


def test_large_mass_limit_rate_through_u_w():
    """|u - zeta_+| and |w - zeta_-| fall off like p/(2m); exponent within 20%."""
    p = 1.0
    masses = np.array([10.0, 40.0, 160.0, 640.0])
    devs_u, devs_w = [], []
    for m in masses:
        u, w = u_w_spinors(0.5, p, PhysParams(m=m))
        devs_u.append(np.linalg.norm(u - zeta_limit(1, 0.5)))
        devs_w.append(np.linalg.norm(w - zeta_limit(-1, 0.5)))
    for devs in (devs_u, devs_w):
        slope = np.polyfit(np.log(masses), np.log(devs), 1)[0]
        assert -1.2 < slope < -0.8
        assert abs(devs[-1] * 2.0 * masses[-1] / p - 1.0) < 0.01
