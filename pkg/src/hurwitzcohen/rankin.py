"""Rankin-Cohen brackets on q-expansions and the binomial bookkeeping that
goes with them. All coefficients stay exact rationals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Union

from .qseries import QSeries, d_tau, scale
from .report import VerificationReport

Number = Union[int, Fraction]


@dataclass(frozen=True)
class WeightedSeries:
    series: QSeries
    weight: Fraction

    def __post_init__(self):
        object.__setattr__(self, "weight", Fraction(self.weight))
        if self.weight <= 0:
            raise ValueError("bracket weights must be positive")


def gen_binomial(m: Number, s: int) -> Fraction:
    """binom(m, s) for rational m, as the falling factorial m(m-1)...(m-s+1)/s!."""
    if s < 0:
        raise ValueError("s must be non-negative")
    m = Fraction(m)
    num = Fraction(1)
    for j in range(s):
        num *= m - j
    return num / factorial(s)


def rankin_cohen(f: WeightedSeries, g: WeightedSeries, n: int) -> QSeries:
    """[f, g]_n = sum_{r+s=n} (-1)^r C(k+n-1, s) C(l+n-1, r) D^r f D^s g."""
    if f.series.prec != g.series.prec:
        raise ValueError(f"precision mismatch: {f.series.prec} vs {g.series.prec}")
    if n < 0:
        raise ValueError("bracket index must be non-negative")
    k, l = f.weight, g.weight
    df = [f.series]
    dg = [g.series]
    for _ in range(n):
        df.append(d_tau(df[-1]))
        dg.append(d_tau(dg[-1]))
    total = QSeries.zero(f.series.prec)
    for r in range(n + 1):
        s = n - r
        c = (-1) ** r * gen_binomial(k + n - 1, s) * gen_binomial(l + n - 1, r)
        if c:
            total = total + scale(c, df[r] * dg[s])
    total.weight = k + l + 2 * n
    return total


def c_constant(k: int) -> Fraction:
    """k! sqrt(pi) / Gamma(k + 1/2), which equals 4^k (k!)^2 / (2k)!."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return Fraction(4 ** k * factorial(k) ** 2, factorial(2 * k))


def multinomial_b(k: int, ell: int, m: int) -> int:
    """(2k+1)! / ((2 ell)! (2m)! (2(k-ell-m)+1)!)."""
    if ell < 0 or m < 0 or ell + m > k:
        raise ValueError(f"need ell, m >= 0 and ell + m <= k, got ({k}, {ell}, {m})")
    return factorial(2 * k + 1) // (
        factorial(2 * ell) * factorial(2 * m) * factorial(2 * (k - ell - m) + 1))


def _step_identities(m: int, ell: int):
    """Both coefficient simplifications from the induction step m -> m+1."""
    base = Fraction(comb(2 * m + 1, 2 * ell))
    shrink = Fraction((2 * ell - 1) * (2 * ell), (2 * (m - ell) + 2) * (2 * (m - ell) + 3))
    even_lhs = base * (Fraction(1, 2) + Fraction(2 * (2 * m - ell) + 5, 4 * ell - 2) * shrink)
    even_rhs = Fraction(comb(2 * m + 3, 2 * ell), 2)
    odd_lhs = base * (Fraction(2 * (m + ell) + 3, 2 * ell + 1)
                      + Fraction(2 * (m - ell) + 3, 2 * ell - 1) * shrink)
    odd_rhs = Fraction(2 * (m - ell) + 3, 2 * ell + 1) * comb(2 * m + 3, 2 * ell)
    return (even_lhs, even_rhs), (odd_lhs, odd_rhs)


def _reduction_ratio(k: int, ell: int, m: int):
    lhs = (Fraction(1, 4) ** (k - ell - m) * multinomial_b(k, ell, m)
           / (c_constant(k) * gen_binomial(Fraction(2 * k + 1, 2), m)
              * gen_binomial(Fraction(2 * k - 1, 2), k - m)))
    rhs = comb(2 * (k - m) + 1, 2 * ell) * Fraction(1, 4) ** (k - ell - m)
    return lhs, rhs


def check_cohen_binomial_identities(m_max: int) -> VerificationReport:
    """Check, exactly, the binomial simplifications used in the induction on
    the derivative order and in reducing the bracket coefficients, for every
    index tuple with entries up to m_max."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    report = VerificationReport("binom", {"m_max": m_max}, (0, m_max))
    for m in range(m_max + 1):
        for ell in range(1, m + 1):
            for tag, (lhs, rhs) in zip(("step-even", "step-odd"), _step_identities(m, ell)):
                report.checked += 1
                if lhs != rhs and report.first_failure is None:
                    report.first_failure = ((tag, m, ell), lhs, rhs)
    for k in range(m_max + 1):
        for m in range(k + 1):
            for ell in range(k - m + 1):
                lhs, rhs = _reduction_ratio(k, ell, m)
                report.checked += 1
                if lhs != rhs and report.first_failure is None:
                    report.first_failure = (("reduction", k, ell, m), lhs, rhs)
    return report
