"""Double-precision evaluation of the non-holomorphic objects around the
Hurwitz series: Zwegers' R function, Jacobi's Theta, level-1 Appell-Lerch
sums and their completion, and the period integral of theta that completes
the Hurwitz generating function. Each ``check_*`` routine compares two
independently computed sides of an identity.

All derivatives D are renormalized, D = (1/2 pi i) d/dz. On real-analytic
functions D means the Wirtinger derivative (1/2 pi i) (d/dx - i d/dy) / 2.

Sums over a lattice index are truncated at |index| <= trunc. Every test
point keeps Im(tau) >= 0.7, so the omitted terms are below the first omitted
term, which is a Gaussian tail and far below double precision.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from math import comb
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy.integrate import quad
from scipy.special import erf, erfc, erfcx

from .qseries import QSeries, d_tau, half_shift, lambda_odd_series, theta_series
from .report import ResidualRecord, VerificationReport

PI = math.pi
SQRT_PI = math.sqrt(math.pi)

# per-check tolerances
TOL_R_IDENTITY = 1e-10
TOL_DR_IDENTITY = 1e-8
TOL_EQFIN = {0: 1e-8, 1: 1e-4}
TOL_HEAT = 1e-4
TOL_APPELL = 1e-9
TOL_DIFF_THETA = 1e-10

STANDARD_TAUS = (1j, 2j, 0.3 + 0.7j)


class PoleProximity(ArithmeticError):
    """An Appell-Lerch denominator 1 - a q^n is numerically zero."""


class StepTooLarge(ArithmeticError):
    """Richardson extrapolation disagrees with the plain finite difference."""


@dataclass(frozen=True)
class NumericConfig:
    trunc: int = 30
    fd_step: float = 1e-3
    tol: float = 1e-8

    def __post_init__(self):
        if self.trunc < 10:
            raise ValueError("trunc must be >= 10")
        if not 0 < self.fd_step <= 1e-2:
            raise ValueError("fd_step must lie in (0, 1e-2]")

    def as_dict(self) -> Dict[str, float]:
        return {"trunc": self.trunc, "fd_step": self.fd_step, "tol": self.tol}


DEFAULT = NumericConfig()


def _check_tau(tau: complex) -> complex:
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError(f"tau must lie in the upper half plane, got {tau}")
    return tau


def q_power(tau: complex, e: float) -> complex:
    """q^e = exp(2 pi i e tau)."""
    return cmath.exp(2j * PI * e * tau)


# -- real special functions ---------------------------------------------------

def beta_fn(x: float) -> float:
    """int_x^oo u^(-1/2) exp(-pi u) du = erfc(sqrt(pi x))."""
    if x < 0:
        raise ValueError("beta_fn needs x >= 0")
    return float(erfc(math.sqrt(PI * x)))


def E_fn(t: float) -> float:
    """2 int_0^t exp(-pi u^2) du."""
    return float(erf(SQRT_PI * t))


def incomplete_gamma_mhalf(x: float) -> float:
    """Gamma(-1/2; x), from Gamma(1/2; x) = sqrt(pi) erfc(sqrt(x)) and the
    recurrence Gamma(a+1; x) = a Gamma(a; x) + x^a e^(-x)."""
    if x <= 0:
        raise ValueError("incomplete_gamma_mhalf needs x > 0")
    return 2 * x ** -0.5 * math.exp(-x) - 2 * SQRT_PI * float(erfc(math.sqrt(x)))


def scaled_gamma_mhalf(x: float) -> float:
    """exp(x) * Gamma(-1/2; x), without overflow."""
    if x <= 0:
        raise ValueError("scaled_gamma_mhalf needs x > 0")
    return 2 * x ** -0.5 - 2 * SQRT_PI * float(erfcx(math.sqrt(x)))


# -- R(u; tau) ------------------------------------------------------------------

def _r_terms(u: complex, tau: complex, T: int):
    y = tau.imag
    a = u.imag / y
    nu = np.arange(-T, T + 1) + 0.5
    t = (nu + a) * math.sqrt(2 * y)
    sn, st = np.sign(nu), np.sign(t)
    # exponent of (-1)^(nu - 1/2) q^(-nu^2/2) e^(-2 pi i nu u)
    hol = 1j * PI * (nu - 0.5) - 1j * PI * tau * nu ** 2 - 2j * PI * nu * u
    # sgn(nu) - E(t) = (sgn(nu) - sgn(t)) + sgn(t) erfc(sqrt(pi)|t|); the first
    # bracket is nonzero only for the few nu between 0 and -a, where exp(hol)
    # is bounded, and the second is paired with its Gaussian before exp()
    jump = np.zeros(nu.shape, dtype=complex)
    m = sn != st
    jump[m] = (sn - st)[m] * np.exp(hol[m])
    gauss = np.exp(-PI * t ** 2 + hol)
    tail = st * erfcx(SQRT_PI * np.abs(t)) * gauss
    return nu, jump + tail, gauss, y


def r_fn(u: complex, tau: complex, cfg: NumericConfig = DEFAULT) -> complex:
    """Zwegers' R(u; tau), summed over nu in 1/2 + Z with |nu| <= trunc + 1/2."""
    tau = _check_tau(tau)
    _, terms, _, _ = _r_terms(complex(u), tau, cfg.trunc)
    return complex(np.sum(terms))


def r_du_fn(u: complex, tau: complex, cfg: NumericConfig = DEFAULT) -> complex:
    """(D_u R)(u; tau), differentiating each term exactly.

    The u-dependence sits in e^(-2 pi i nu u) and in Im(u) inside E, which
    contributes exp(-pi t^2) sqrt(2y) / (2 pi y) per term.
    """
    tau = _check_tau(tau)
    nu, terms, gauss, y = _r_terms(complex(u), tau, cfg.trunc)
    return complex(np.sum(gauss * math.sqrt(2 * y) / (2 * PI * y) - nu * terms))


def du_r_at_special(tau: complex, cfg: NumericConfig = DEFAULT, sgn_zero: int = 1) -> complex:
    """(D_u R)(-tau - 1/2; 2 tau) from its explicit series

        i q^(1/4) sum_n [ exp(-4 pi n^2 y) / (sqrt(4y) pi)
                          - sgn(n) (n + 1/2) beta(4 n^2 y) ] q^(-n^2)

    with sgn(0) = ``sgn_zero`` (1 is the correct convention)."""
    tau = _check_tau(tau)
    x, y = tau.real, tau.imag
    n = np.arange(-cfg.trunc, cfg.trunc + 1)
    sgn = np.where(n == 0, sgn_zero, np.sign(n))
    # both pieces carry exp(-4 pi n^2 y) q^(-n^2) = conj(q)^(n^2)
    decay = np.exp(-2 * PI * n ** 2 * y - 2j * PI * n ** 2 * x)
    beta_scaled = erfcx(2 * np.abs(n) * math.sqrt(PI * y))
    terms = (1 / (math.sqrt(4 * y) * PI) - sgn * (n + 0.5) * beta_scaled) * decay
    return complex(1j * q_power(tau, 0.25) * np.sum(terms))


# -- Theta, Appell-Lerch sums -------------------------------------------------

def theta_jacobi(v: complex, tau: complex, cfg: NumericConfig = DEFAULT, dv: int = 0) -> complex:
    """(D_v^dv Theta)(v; tau) for Theta(v; tau) = sum_{nu in 1/2+Z} q^(nu^2/2) e^(2 pi i nu (v + 1/2))."""
    tau = _check_tau(tau)
    nu = np.arange(-cfg.trunc, cfg.trunc + 1) + 0.5
    terms = nu ** dv * np.exp(1j * PI * tau * nu ** 2 + 2j * PI * nu * (complex(v) + 0.5))
    return complex(np.sum(terms))


def _appell_sum(u: complex, v: complex, tau: complex, cfg: NumericConfig,
                parity: Optional[int] = None, dv: int = 0) -> complex:
    tau = _check_tau(tau)
    u, v = complex(u), complex(v)
    total = 0j
    for n in range(-cfg.trunc, cfg.trunc + 1):
        if parity is not None and n % 2 != parity:
            continue
        num_exp = 1j * PI * n + 1j * PI * tau * n * (n + 1) + 2j * PI * n * v
        L = 2j * PI * (u + n * tau)            # log(a q^n)
        if abs(L.real) < 1 and abs(1 - cmath.exp(L)) < 1e-12:
            raise PoleProximity(f"1 - a q^{n} vanishes at u={u}, tau={tau}")
        if L.real > 0:
            # 1/(1 - w) = -w^-1 / (1 - w^-1) keeps large |q^n| out of exp()
            term = -cmath.exp(num_exp - L) / (1 - cmath.exp(-L))
        else:
            term = cmath.exp(num_exp) / (1 - cmath.exp(L))
        total += n ** dv * term
    return cmath.exp(1j * PI * u) * total


def appell_a1(u: complex, v: complex, tau: complex, cfg: NumericConfig = DEFAULT) -> complex:
    """A_1(u, v; tau) = a^(1/2) sum_n (-1)^n q^(n(n+1)/2) b^n / (1 - a q^n)."""
    return _appell_sum(u, v, tau, cfg)


def appell_a1_odd(u: complex, v: complex, tau: complex, cfg: NumericConfig = DEFAULT) -> complex:
    """The odd-n part of A_1; its pole at u = 0 cancels."""
    return _appell_sum(u, v, tau, cfg, parity=1)


def a1_completed(u: complex, v: complex, tau: complex, cfg: NumericConfig = DEFAULT) -> complex:
    return appell_a1(u, v, tau, cfg) + 0.5j * theta_jacobi(v, tau, cfg) * r_fn(complex(u) - complex(v), tau, cfg)


def dv_a1_odd(k: int, tau: complex, cfg: NumericConfig = DEFAULT) -> complex:
    """(D_v^k A_1^odd)(0, tau + 1/2; 2 tau), term by term (D_v b^n = n b^n)."""
    if k < 1 or k % 2 == 0:
        raise ValueError("dv_a1_odd needs odd k >= 1")
    tau = _check_tau(tau)
    return _appell_sum(0, tau + 0.5, 2 * tau, cfg, parity=1, dv=k)


# -- the completion term of the Hurwitz series -------------------------------

def theta_integral(tau: complex, shift: float = 0.0, cfg: NumericConfig = DEFAULT) -> complex:
    """int_{-conj(tau)}^{i oo} theta(z + shift) / (z + tau)^(3/2) dz via
    incomplete Gamma values.

    On the path z = -conj(tau) + it one has z + tau = i(2y + t), so the
    principal power contributes exp(-3 pi i / 4) and dz = i dt; the n = 0
    term integrates to 2 (2y)^(-1/2), the others to
    exp(4 pi n^2 y) sqrt(2 pi n^2) Gamma(-1/2; 4 pi n^2 y).
    """
    tau = _check_tau(tau)
    x, y = tau.real, tau.imag
    total = 2 * (2 * y) ** -0.5 + 0j
    for n in range(1, cfg.trunc + 1):
        X = 4 * PI * n * n * y
        twist = cmath.exp(2j * PI * n * n * shift)
        total += (2 * twist * cmath.exp(-2j * PI * n * n * x - 2 * PI * n * n * y)
                  * math.sqrt(2 * PI) * n * scaled_gamma_mhalf(X))
    return cmath.exp(-0.25j * PI) * total


def _theta(z: complex, T: int) -> complex:
    n = np.arange(1, T + 1)
    return complex(1 + 2 * np.sum(np.exp(2j * PI * n ** 2 * z)))


def theta_integral_quad(tau: complex, shift: float = 0.0, cfg: NumericConfig = DEFAULT) -> complex:
    """Same integral by adaptive quadrature along z = -conj(tau) + it."""
    tau = _check_tau(tau)
    start = -tau.conjugate()

    def integrand(t):
        z = start + 1j * t
        return _theta(z + shift, cfg.trunc) / (z + tau) ** 1.5 * 1j

    opts = dict(epsabs=1e-14, epsrel=1e-13, limit=500)
    re = quad(lambda t: integrand(t).real, 0, np.inf, **opts)[0]
    im = quad(lambda t: integrand(t).imag, 0, np.inf, **opts)[0]
    return complex(re, im)


def script_r(tau: complex, cfg: NumericConfig = DEFAULT) -> complex:
    """(1 + i)/(16 pi) * int_{-conj(tau)}^{i oo} theta(z) (z + tau)^(-3/2) dz."""
    return (1 + 1j) / (16 * PI) * theta_integral(tau, 0.0, cfg)


def script_r_quad(tau: complex, cfg: NumericConfig = DEFAULT) -> complex:
    return (1 + 1j) / (16 * PI) * theta_integral_quad(tau, 0.0, cfg)


def exp_integral_quad(n: int, tau: complex) -> complex:
    """int_{-conj(tau)}^{i oo} exp(2 pi i n z) (-i(z + tau))^(-3/2) dz by quadrature."""
    tau = _check_tau(tau)
    start = -tau.conjugate()

    def integrand(t):
        z = start + 1j * t
        return cmath.exp(2j * PI * n * z) * (-1j * (z + tau)) ** -1.5 * 1j

    opts = dict(epsabs=0.0, epsrel=1e-12, limit=500)
    re = quad(lambda t: integrand(t).real, 0, np.inf, **opts)[0]
    im = quad(lambda t: integrand(t).imag, 0, np.inf, **opts)[0]
    return complex(re, im)


def exp_integral_closed(n: int, tau: complex) -> complex:
    """i (2 pi n)^(1/2) q^(-n) Gamma(-1/2; 4 pi n y)."""
    tau = _check_tau(tau)
    return 1j * math.sqrt(2 * PI * n) * q_power(tau, -n) * incomplete_gamma_mhalf(4 * PI * n * tau.imag)


# -- finite differences -------------------------------------------------------

def wirtinger(f: Callable[[complex], complex], z: complex, h: float) -> complex:
    """(1/2 pi i) df/dz by central differences in Re z and Im z."""
    dx = (f(z + h) - f(z - h)) / (2 * h)
    dy = (f(z + 1j * h) - f(z - 1j * h)) / (2 * h)
    return (dx - 1j * dy) / 2 / (2j * PI)


def wirtinger_power(f: Callable[[complex], complex], z: complex, h: float, order: int) -> complex:
    """order-fold nested Wirtinger difference."""
    if order == 0:
        return f(z)
    return wirtinger(lambda w: wirtinger_power(f, w, h, order - 1), z, h)


def richardson(estimate: Callable[[float], complex], h: float, step_tol: float = 1e-4):
    """Second-order Richardson extrapolation of estimate(h).

    Returns (extrapolated, coarse, fine); raises StepTooLarge when coarse and
    fine differ by more than step_tol.
    """
    coarse = estimate(h)
    fine = estimate(h / 2)
    if abs(fine - coarse) > step_tol:
        raise StepTooLarge(f"step {h} too large: estimates differ by {abs(fine - coarse):.3g}")
    return (4 * fine - coarse) / 3, coarse, fine


@dataclass
class HeatCheck:
    u: complex
    tau: complex
    residual: float
    residual_h: float
    residual_h2: float

    @property
    def ratio(self) -> float:
        return self.residual_h / self.residual_h2 if self.residual_h2 else math.inf


def check_heat(u: complex, tau: complex, cfg: NumericConfig = DEFAULT) -> HeatCheck:
    """|(2 D_tau + D_u^2) R| at (u, tau) by Wirtinger finite differences.

    ``residual`` is the Richardson-extrapolated value; ``residual_h`` and
    ``residual_h2`` are the plain central-difference values at steps h and
    h/2, whose ratio should be close to 4.
    """
    tau = _check_tau(tau)
    u = complex(u)

    def operator(h):
        d2u = wirtinger_power(lambda w: r_fn(w, tau, cfg), u, h, 2)
        dt = wirtinger(lambda s: r_fn(u, s, cfg), tau, h)
        return 2 * dt + d2u

    value, coarse, fine = richardson(operator, cfg.fd_step)
    return HeatCheck(u, tau, abs(value), abs(coarse), abs(fine))


# -- identity checks ----------------------------------------------------------

def special_value_residuals(tau: complex, cfg: NumericConfig = DEFAULT) -> Dict[str, float]:
    """Residuals of the values of R and D_u R at (-tau - 1/2; 2tau) and (-tau - 1; 2tau)."""
    tau = _check_tau(tau)
    q4 = q_power(tau, 0.25)
    r1 = r_fn(-tau - 0.5, 2 * tau, cfg) - 1j * q4
    r2 = r_fn(-tau - 1, 2 * tau, cfg) + q4
    dr1_rhs = (-1 + 1j) / (4 * PI) * q4 * theta_integral(tau, 0.0, cfg) - 0.5j * q4
    dr1 = du_r_at_special(tau, cfg) - dr1_rhs
    dr2_rhs = -(1 + 1j) / (4 * PI) * q4 * theta_integral(tau, 0.5, cfg) + 0.5 * q4
    dr2 = r_du_fn(-tau - 1, 2 * tau, cfg) - dr2_rhs
    return {"R1": abs(r1), "R2": abs(r2), "DR1": abs(dr1), "DR2": abs(dr2)}


def check_special_values(tau: complex, cfg: NumericConfig = DEFAULT) -> List[ResidualRecord]:
    res = special_value_residuals(tau, cfg)
    tols = {"R1": TOL_R_IDENTITY, "R2": TOL_R_IDENTITY, "DR1": TOL_DR_IDENTITY, "DR2": TOL_DR_IDENTITY}
    return [ResidualRecord(name, complex(tau), res[name], tols[name], cfg.as_dict()) for name in res]


def eqfin_rhs(m: int, tau: complex, du_values: List[complex]) -> complex:
    """-(i/4) q^(-1/4) (-1)^m sum_l [D_u^(2l) R / 2 + (2(m-l)+1)/(2l+1) D_u^(2l+1) R]
    * C(2m+1, 2l) (1/4)^(m-l), given du_values[j] = (D_u^j R)(-tau - 1/2; 2tau)."""
    total = 0j
    for l in range(m + 1):
        bracket = 0.5 * du_values[2 * l] + (2 * (m - l) + 1) / (2 * l + 1) * du_values[2 * l + 1]
        total += bracket * comb(2 * m + 1, 2 * l) * 0.25 ** (m - l)
    return -0.25j * q_power(tau, -0.25) * (-1) ** m * total


def check_eqfin1(m: int, tau: complex, cfg: NumericConfig = DEFAULT) -> float:
    """|D_tau^m script_R(tau) - RHS| for m in {0, 1}.

    m = 0 uses only series (no differencing). For m = 1 the tau-derivative of
    script_R and D_u^2 R, D_u^3 R come from Richardson-extrapolated nested
    Wirtinger differences.
    """
    if m not in (0, 1):
        raise ValueError("check_eqfin1 covers m = 0 and m = 1 only")
    tau = _check_tau(tau)
    u0 = -tau - 0.5
    du = [r_fn(u0, 2 * tau, cfg), du_r_at_special(tau, cfg)]
    if m == 0:
        lhs = script_r(tau, cfg)
    else:
        R = lambda w: r_fn(w, 2 * tau, cfg)  # noqa: E731
        for order in (2, 3):
            du.append(richardson(lambda h: wirtinger_power(R, u0, h, order), cfg.fd_step)[0])
        lhs = richardson(lambda h: wirtinger(lambda s: script_r(s, cfg), tau, h), cfg.fd_step)[0]
    return abs(lhs - eqfin_rhs(m, tau, du))


def evaluate_series(f: QSeries, q: complex) -> complex:
    """sum_n a_n q^n in floating point."""
    total = 0j
    qn = 1 + 0j
    for a in f.coeffs:
        if a:
            total += float(a) * qn
        qn *= q
    return total


def appell_residual(k: int, tau: complex = 1j, cfg: NumericConfig = DEFAULT, prec: int = 40) -> float:
    """|Lambda_{k,odd}(tau) - (1/2) (D_v^k A_1^odd)(0, tau + 1/2; 2tau)|, the left
    side from the exact series through q^prec."""
    exact = evaluate_series(lambda_odd_series(k, prec), q_power(tau, 1))
    return abs(exact - 0.5 * dv_a1_odd(k, tau, cfg))


def diff_theta_residuals(r: int, tau: complex, cfg: NumericConfig = DEFAULT, prec: int = 400):
    """Residuals of both expressions for the v-derivatives of Theta at the
    torsion points (tau + 1/2; 2tau) and (tau + 1; 2tau) in terms of
    tau-derivatives of theta."""
    tau = _check_tau(tau)
    q = q_power(tau, 1)
    qm4 = q_power(tau, -0.25)
    th = theta_series(prec)
    derivs = [th]
    for _ in range(r // 2):
        derivs.append(d_tau(derivs[-1]))
    rhs_a = 0j
    rhs_b = 0j
    for s in range(r // 2 + 1):
        c = comb(r, 2 * s) * (-0.5) ** (r - 2 * s)
        rhs_a += c * evaluate_series(derivs[s], q)
        rhs_b += c * evaluate_series(half_shift(derivs[s]), q)
    lhs_a = theta_jacobi(tau + 0.5, 2 * tau, cfg, dv=r)
    lhs_b = theta_jacobi(tau + 1, 2 * tau, cfg, dv=r)
    return abs(lhs_a + qm4 * rhs_a), abs(lhs_b - 1j * qm4 * rhs_b)


def check_diff_theta(r_max: int, tau: complex, cfg: NumericConfig = DEFAULT) -> VerificationReport:
    if not 0 <= r_max <= 6:
        raise ValueError("r_max must lie in 0..6")
    report = VerificationReport("difftheta", {"tau": [tau.real, tau.imag], "tol": TOL_DIFF_THETA},
                                (0, r_max))
    for r in range(r_max + 1):
        ra, rb = diff_theta_residuals(r, tau, cfg)
        report.checked += 2
        report.rows.append((r, ra, rb))
        worst = max(ra, rb)
        if worst >= TOL_DIFF_THETA and report.first_failure is None:
            report.first_failure = (r, worst, TOL_DIFF_THETA)
    return report
