import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from hurwitzcohen import nonhol as nh
from hurwitzcohen.nonhol import NumericConfig, STANDARD_TAUS
from hurwitzcohen.qseries import lambda_odd_series


# -- special functions ----------------------------------------------------------

def test_special_values():
    assert nh.beta_fn(0) == 1
    assert nh.E_fn(0) == 0
    with pytest.raises(ValueError):
        nh.beta_fn(-1)


def test_E_fn_is_sign_minus_complementary_beta():
    for t in np.linspace(-3, 3, 61):
        if t == 0:
            continue
        assert abs(nh.E_fn(t) - (math.copysign(1, t) - math.copysign(1, t) * nh.beta_fn(t * t))) < 1e-12


@pytest.mark.parametrize("x", [0.01, 0.3, 1.0, 4.0])
def test_beta_against_quadrature(x):
    val = quad(lambda u: u ** -0.5 * math.exp(-math.pi * u), x, np.inf, epsabs=1e-14)[0]
    assert abs(nh.beta_fn(x) - val) < 1e-10


@pytest.mark.parametrize("x", [0.05, 0.5, 2.0, 12.0, 40.0])
def test_incomplete_gamma_against_mpmath(x):
    ref = float(mpmath.gammainc(-0.5, x))
    assert nh.incomplete_gamma_mhalf(x) == pytest.approx(ref, rel=1e-10, abs=1e-300)
    assert nh.scaled_gamma_mhalf(x) == pytest.approx(float(mpmath.e ** x * mpmath.gammainc(-0.5, x)), rel=1e-10)


def test_scaled_gamma_survives_large_argument():
    assert nh.scaled_gamma_mhalf(5000.0) == pytest.approx(float(mpmath.e ** 5000 * mpmath.gammainc(-0.5, 5000)),
                                                           rel=1e-8)


# -- R --------------------------------------------------------------------------

points = st.tuples(st.floats(-1, 1), st.floats(-0.8, 0.8), st.floats(-0.5, 0.5), st.floats(0.6, 2.0))


@settings(max_examples=30, deadline=None)
@given(points)
def test_r_elliptic_properties(p):
    ur, ui, x, y = p
    tau = complex(x, y)
    u = complex(ur, ui * y)
    R = lambda w: nh.r_fn(w, tau)  # noqa: E731
    scale = 1 + abs(R(u))
    assert abs(R(u + 1) + R(u)) < 1e-10 * scale
    assert abs(R(-u) - R(u)) < 1e-10 * scale
    shifted = R(u) + cmath.exp(-2j * math.pi * u - 1j * math.pi * tau) * R(u + tau)
    assert abs(shifted - 2 * cmath.exp(-1j * math.pi * u - 0.25j * math.pi * tau)) < 1e-9 * scale


def test_r_under_tau_translation():
    u, tau = 0.2 + 0.1j, 0.1 + 0.9j
    assert abs(nh.r_fn(u, tau + 1) - cmath.exp(-0.25j * math.pi) * nh.r_fn(u, tau)) < 1e-12


@pytest.mark.parametrize("tau", STANDARD_TAUS)
def test_r_special_values(tau):
    res = nh.special_value_residuals(tau)
    assert res["R1"] < nh.TOL_R_IDENTITY and res["R2"] < nh.TOL_R_IDENTITY


def test_r_rejects_lower_half_plane():
    with pytest.raises(ValueError):
        nh.r_fn(0.1, -1j)


# -- Theta and Appell-Lerch sums ----------------------------------------------

def test_theta_vanishes_at_origin():
    for tau in STANDARD_TAUS:
        assert abs(nh.theta_jacobi(0, tau)) < 1e-14


def test_odd_appell_part_is_regular_at_origin():
    tau = 2 * (0.3 + 0.7j)
    v = 0.3 + 0.7j + 0.5
    with pytest.raises(nh.PoleProximity):
        nh.appell_a1(0, v, tau)
    at0 = nh.appell_a1_odd(0, v, tau)
    assert abs(nh.appell_a1_odd(1e-7, v, tau) - at0) < 1e-5 * (1 + abs(at0))


def test_completion_is_symmetric_after_dividing_by_theta():
    tau = 0.2 + 1.1j
    u, v = 0.13 + 0.31j, -0.22 + 0.17j
    lhs = nh.a1_completed(u, v, tau) / nh.theta_jacobi(v, tau)
    rhs = nh.a1_completed(v, u, tau) / nh.theta_jacobi(u, tau)
    assert abs(lhs - rhs) < 1e-10 * abs(lhs)


@pytest.mark.parametrize("k", [1, 3, 5])
def test_appell_derivatives_match_lambda_series(k):
    assert nh.appell_residual(k, 1j) < nh.TOL_APPELL
    exact = nh.evaluate_series(lambda_odd_series(k, 40), math.exp(-2 * math.pi))
    assert abs((0.5 * nh.dv_a1_odd(k, 1j)).imag) < 1e-9 * (1 + abs(exact))


def test_dv_a1_odd_domain():
    with pytest.raises(ValueError):
        nh.dv_a1_odd(2, 1j)


# -- the completion term ------------------------------------------------------

@pytest.mark.parametrize("tau", STANDARD_TAUS)
def test_script_r_series_against_quadrature(tau):
    assert abs(nh.script_r(tau) - nh.script_r_quad(tau)) < 1e-10


@pytest.mark.parametrize("n", range(1, 6))
def test_exponential_integral_closed_form(n):
    tau = 0.3 + 0.7j
    closed = nh.exp_integral_closed(n, tau)
    assert abs(nh.exp_integral_quad(n, tau) - closed) < 1e-9 * abs(closed)


def test_script_r_is_real_on_imaginary_axis():
    for y in (0.5, 1.0, 2.0):
        val = nh.script_r(1j * y)
        assert abs(val.imag) < 1e-14 * (1 + abs(val))


# -- D_u R ------------------------------------------------------------------------

@pytest.mark.parametrize("tau", STANDARD_TAUS)
def test_du_r_special_values(tau):
    res = nh.special_value_residuals(tau)
    assert res["DR1"] < nh.TOL_DR_IDENTITY and res["DR2"] < nh.TOL_DR_IDENTITY


def test_sign_convention_at_zero_matters():
    tau = 1j
    good = nh.du_r_at_special(tau, sgn_zero=1)
    bad = nh.du_r_at_special(tau, sgn_zero=-1)
    assert abs(good - bad) > 1e-2
    assert abs(good - nh.r_du_fn(-tau - 0.5, 2 * tau)) < 1e-12


def test_du_r_is_stable_in_truncation():
    for tau in STANDARD_TAUS:
        a = nh.du_r_at_special(tau, NumericConfig(trunc=30))
        b = nh.du_r_at_special(tau, NumericConfig(trunc=40))
        assert abs(a - b) < 1e-12


def test_analytic_du_against_finite_differences():
    tau = 0.3 + 0.7j
    for u in (0.1 + 0.2j, -tau - 0.5 + 0.01, 0.4 - 0.3j):
        fd = nh.richardson(lambda h: nh.wirtinger(lambda w: nh.r_fn(w, tau), u, h), 1e-3)[0]
        assert abs(fd - nh.r_du_fn(u, tau)) < 1e-7


# -- finite-difference checks -------------------------------------------------

@pytest.mark.parametrize("tau", [1j, 0.2 + 1j])
def test_heat_operator_annihilates_r(tau):
    h = nh.check_heat(0.3 + 0.2j, tau)
    assert h.residual < nh.TOL_HEAT
    assert 3.0 < h.ratio < 5.0


def test_wirtinger_of_holomorphic_power():
    z = 0.3 + 0.4j
    d = nh.wirtinger(lambda w: w ** 3, z, 1e-4)
    assert abs(d - 3 * z ** 2 / (2j * math.pi)) < 1e-7


def test_richardson_flags_large_steps():
    with pytest.raises(nh.StepTooLarge):
        nh.richardson(lambda h: math.sin(1 / h), 1e-2)


@pytest.mark.parametrize("r", range(6))
def test_theta_derivatives_at_torsion_points(r):
    a, b = nh.diff_theta_residuals(r, 1j)
    assert a < nh.TOL_DIFF_THETA and b < nh.TOL_DIFF_THETA


def test_diff_theta_report():
    rep = nh.check_diff_theta(5, 1j)
    assert rep.passed and rep.checked == 12
    with pytest.raises(ValueError):
        nh.check_diff_theta(7, 1j)


@pytest.mark.parametrize("tau", STANDARD_TAUS)
def test_eqfin_base_case(tau):
    assert nh.check_eqfin1(0, tau) < nh.TOL_EQFIN[0]


def test_eqfin_first_derivative():
    assert nh.check_eqfin1(1, 1j) < nh.TOL_EQFIN[1]
    with pytest.raises(ValueError):
        nh.check_eqfin1(2, 1j)


def test_eqfin_rhs_sensitive_to_inputs():
    tau = 1j
    du = [nh.r_fn(-tau - 0.5, 2 * tau), nh.du_r_at_special(tau)]
    assert abs(nh.script_r(tau) - nh.eqfin_rhs(0, tau, du)) < 1e-12
    du[1] += 1e-3
    assert abs(nh.script_r(tau) - nh.eqfin_rhs(0, tau, du)) > 1e-6


@pytest.mark.parametrize("kwargs", [dict(trunc=5), dict(fd_step=0.0), dict(fd_step=0.1)])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        NumericConfig(**kwargs)


def test_config_serialises():
    assert NumericConfig().as_dict()["trunc"] == 30
