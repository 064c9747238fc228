"""The X^ell coefficients of Cohen's generating series

    sum over odd n of [ sum_{s^2 <= n} H(n - s^2) / (1 - 2sX + nX^2)
                        + sum_k lambda_{2k+1}(n) X^(2k) ] q^n

built two ways (directly from class numbers, and from Rankin-Cohen brackets
of the Hurwitz series with theta), plus exact checks of the class number
relations they imply.

Certification is coefficient-wise: a series is identified inside the exact
basis model of ``gamma04`` with agreement well past the Sturm bound. The
modular transformation law itself is not checked here.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Callable, Dict, List, Tuple

from . import arith
from .gamma04 import InsufficientPrecision, NotInSpace, identify, sturm_bound
from .qseries import (QSeries, f2_series, half_shift, hurwitz_series, lambda_odd_series,
                      theta_series)
from .rankin import WeightedSeries, c_constant, rankin_cohen
from .report import VerificationReport

RELATIONS = ("eq1", "eq3", "cc1", "cc2", "cc3", "cc4")
ODD_ONLY = {"eq3", "cc1", "cc2", "cc3", "cc4"}

# cc_j: kernel degree ell, lambda index, four-square polynomial, RHS factor
_CLASS_RELATIONS: Dict[str, Tuple[int, int, str, Fraction]] = {
    "cc1": (2, 3, "", Fraction(0)),
    "cc2": (4, 5, "Y4", Fraction(-1, 12)),
    "cc3": (6, 7, "Y6", Fraction(-1, 3)),
    "cc4": (8, 9, "Y8", Fraction(-1, 70)),
}


def _kernel_class_sum12(ell: int, n: int, h12: List[int]) -> int:
    """12 * sum_{s^2 <= n} u_ell(s, n) H(n - s^2)."""
    r = isqrt(n)
    return sum(arith.cohen_kernel_coeff(ell, s, n) * h12[n - s * s] for s in range(-r, r + 1))


def cohen_coeff_direct(ell: int, N: int) -> QSeries:
    """Coefficient of X^ell, summed straight from Hurwitz class numbers."""
    if N < 1:
        raise ValueError("N must be >= 1")
    h12 = arith.hurwitz_table12(N)
    c = [Fraction(0)] * (N + 1)
    for n in range(1, N + 1, 2):
        v = Fraction(_kernel_class_sum12(ell, n, h12), 12)
        if ell % 2 == 0:
            v += arith.lambda_k(ell + 1, n)
        c[n] = v
    return QSeries(c, N, weight=ell + 2)


def cohen_coeff_bracket(k: int, N: int) -> QSeries:
    """Coefficient of X^(2k) as (c_k/2)(B(tau) - B(tau + 1/2)) + Lambda_{2k+1,odd},
    where B = [H, theta]_k taken with weights 3/2 and 1/2."""
    if N < 1:
        raise ValueError("N must be >= 1")
    B = rankin_cohen(WeightedSeries(hurwitz_series(N), Fraction(3, 2)),
                     WeightedSeries(theta_series(N), Fraction(1, 2)), k)
    odd = (B - half_shift(B)) * (c_constant(k) / 2)
    out = odd + lambda_odd_series(2 * k + 1, N)
    out.weight = Fraction(2 * k + 2)
    return out


def _relation_sides(rel: str, n_hi: int) -> Callable[[int], Tuple[Fraction, Fraction]]:
    if rel == "eq1":
        h12 = arith.hurwitz_table12(4 * n_hi)

        def sides(n):
            r = isqrt(4 * n)
            s12 = sum(h12[4 * n - s * s] for s in range(-r, r + 1))
            return Fraction(s12, 12) + 2 * arith.lambda_k(1, n), Fraction(2 * arith.sigma(1, n))
        return sides

    h12 = arith.hurwitz_table12(n_hi)
    if rel == "eq3":
        def sides(n):
            return (Fraction(_kernel_class_sum12(0, n, h12), 12) + arith.lambda_k(1, n),
                    Fraction(arith.sigma(1, n), 3))
        return sides

    ell, lam_index, poly, factor = _CLASS_RELATIONS[rel]
    squares = arith.four_square_series(poly, n_hi) if poly else None

    def sides(n):
        lhs = Fraction(_kernel_class_sum12(ell, n, h12), 12) + arith.lambda_k(lam_index, n)
        rhs = factor * squares[n] if squares is not None else Fraction(0)
        return lhs, rhs
    return sides


def check_relation(rel: str, n_lo: int, n_hi: int, record_rows: bool = False) -> VerificationReport:
    """Evaluate both sides of a class number relation for every n in
    [n_lo, n_hi] (odd n only, except for eq1) and report the smallest failure."""
    if rel not in RELATIONS:
        raise ValueError(f"unknown relation {rel!r}; choose from {', '.join(RELATIONS)}")
    n_lo = max(n_lo, 1)
    report = VerificationReport(rel, {"odd_only": rel in ODD_ONLY}, (n_lo, n_hi))
    if n_hi < n_lo:
        return report
    sides = _relation_sides(rel, n_hi)
    step = 2 if rel in ODD_ONLY else 1
    start = n_lo + (1 - n_lo % 2) if step == 2 else n_lo
    for n in range(start, n_hi + 1, step):
        lhs, rhs = sides(n)
        report.checked += 1
        if record_rows:
            report.rows.append((n, lhs, rhs))
        if lhs != rhs and report.first_failure is None:
            report.first_failure = (n, lhs, rhs)
    return report


def verify_theorem(k_max: int, N: int) -> List[VerificationReport]:
    """For each k <= k_max: route equality for X^(2k), vanishing of X^(2k+1),
    and identification of the X^(2k) coefficient in weight 2k + 2 (as F2/3 for
    k = 0, inside the cusp basis for k >= 1)."""
    required = sturm_bound(2 * k_max + 2) + 10
    if N < required:
        raise InsufficientPrecision(f"--prec must be at least {required} for k_max={k_max}", required)
    reports = []
    for k in range(k_max + 1):
        weight = 2 * k + 2
        rep = VerificationReport(f"theorem-k{k}", {"k": k, "weight": weight}, (0, N))
        direct = cohen_coeff_direct(2 * k, N)
        bracket = cohen_coeff_bracket(k, N)
        rep.checked += 1
        if direct != bracket:
            n = next(i for i in range(N + 1) if direct[i] != bracket[i])
            rep.first_failure = (("route-equality", n), direct[n], bracket[n])
        odd_coeff = cohen_coeff_direct(2 * k + 1, N)
        rep.checked += 1
        rep.details["odd_coefficient_zero"] = odd_coeff.is_zero()
        if not odd_coeff.is_zero() and rep.first_failure is None:
            n = next(i for i in range(N + 1) if odd_coeff[i])
            rep.first_failure = (("odd-vanishing", n), odd_coeff[n], Fraction(0))
        rep.checked += 1
        try:
            dec = identify(direct, weight, use_cusp=k >= 1)
            rep.details["decomposition"] = dec.to_dict()
            if k == 0:
                expected = identify(f2_series(N) * Fraction(1, 3), 2)
                if dec.coefficients != expected.coefficients and rep.first_failure is None:
                    rep.first_failure = (("eichler", 0), str(dec), str(expected))
        except NotInSpace as exc:
            rep.details["decomposition"] = None
            if rep.first_failure is None:
                rep.first_failure = (("identify", exc.index), str(exc), "in space")
        reports.append(rep)
    return reports
