from fractions import Fraction
from math import gcd, isqrt

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from hurwitzcohen import arith
from hurwitzcohen.arith import (DomainError, class_number, cohen_kernel_coeff, four_square_series,
                                four_square_sum, hurwitz, hurwitz_table, lambda_k, sigma)


def class_number_oracle(d):
    """Reduced forms counted with b outermost, then c, then a."""
    count = 0
    bmax = isqrt(d // 3) + 1
    for b in range(-bmax, bmax + 1):
        if (b * b + d) % 4:
            continue
        ac = (b * b + d) // 4
        for c in range(1, ac + 1):
            if ac % c:
                continue
            a = ac // c
            if not abs(b) <= a <= c:
                continue
            if (abs(b) == a or a == c) and b < 0:
                continue
            if gcd(gcd(a, abs(b)), c) == 1:
                count += 1
    return count


@pytest.mark.parametrize("d, h", [(3, 1), (4, 1), (23, 3)])
def test_class_number_examples(d, h):
    assert class_number(d) == h


@pytest.mark.parametrize("d, h", [(7, 1), (8, 1), (15, 2), (20, 2), (47, 5), (56, 4), (71, 7), (163, 1), (199, 9)])
def test_class_number_classical_values(d, h):
    assert class_number(d) == h


def test_class_number_matches_independent_enumerator():
    for d in range(3, 201):
        if d % 4 in (0, 3):
            assert class_number(d) == class_number_oracle(d), d


def test_reduced_forms_for_23():
    forms = sorted(arith.reduced_forms(23))
    assert forms == [(1, 1, 6), (2, -1, 3), (2, 1, 3)]
    assert all(f.discriminant == -23 for f in forms)


@pytest.mark.parametrize("d", [0, -3, 1, 2, 5, 6])
def test_class_number_rejects_non_discriminants(d):
    with pytest.raises(DomainError):
        class_number(d)


@pytest.mark.parametrize("n, value", [(0, Fraction(-1, 12)), (1, 0), (12, Fraction(4, 3)),
                                      (3, Fraction(1, 3)), (4, Fraction(1, 2)), (7, 1), (8, 1)])
def test_hurwitz_examples(n, value):
    assert hurwitz(n) == value


def test_hurwitz_negative():
    with pytest.raises(DomainError):
        hurwitz(-1)


def test_sieve_table_agrees_with_definition():
    table = hurwitz_table(2000)
    assert table == [hurwitz(n) for n in range(2001)]


def test_table_cache_is_invisible():
    big = hurwitz_table(500)
    small = hurwitz_table(20)
    assert small == big[:21]
    small[3] = Fraction(99)
    assert hurwitz_table(20)[3] == Fraction(1, 3)


def test_hurwitz_sign_and_vanishing_pattern():
    for n, h in enumerate(hurwitz_table(3000)[1:], start=1):
        if n % 4 in (1, 2):
            assert h == 0
        else:
            assert h > 0


@pytest.mark.parametrize("k, n, value", [(1, 1, 1), (1, 6, 12), (3, 2, 9)])
def test_sigma_examples(k, n, value):
    assert sigma(k, n) == value


@pytest.mark.parametrize("k, n, value", [(1, 1, Fraction(1, 2)), (1, 9, Fraction(5, 2)), (3, 9, Fraction(29, 2))])
def test_lambda_examples(k, n, value):
    assert lambda_k(k, n) == value


@given(st.integers(1, 3), st.integers(1, 2000))
def test_sigma_and_lambda_against_brute_force(k, n):
    divs = [d for d in range(1, n + 1) if n % d == 0]
    assert sigma(k, n) == sum(d ** k for d in divs)
    assert lambda_k(2 * k - 1, n) == Fraction(sum(min(d, n // d) ** (2 * k - 1) for d in divs), 2)


def test_cohen_kernel_examples():
    assert cohen_kernel_coeff(0, 7, 3) == 1
    for s in range(-5, 6):
        for n in range(1, 10):
            assert cohen_kernel_coeff(2, s, n) == 4 * s * s - n
    assert cohen_kernel_coeff(4, 1, 1) == 5


def test_cohen_kernel_matches_power_series():
    X, s, n = sp.symbols("X s n")
    series = sp.series(1 / (1 - 2 * s * X + n * X ** 2), X, 0, 9).removeO()
    for ell in range(9):
        coeff = sp.expand(series.coeff(X, ell))
        for sv, nv in [(0, 1), (1, 1), (-2, 7), (3, 5)]:
            assert cohen_kernel_coeff(ell, sv, nv) == coeff.subs({s: sv, n: nv})


def test_cohen_kernel_matches_printed_closed_forms():
    g = {
        4: lambda s, n: 16 * s ** 4 - 12 * n * s ** 2 + n ** 2,
        6: lambda s, n: 64 * s ** 6 - 80 * s ** 4 * n + 24 * s ** 2 * n ** 2 - n ** 3,
        8: lambda s, n: 256 * s ** 8 - 448 * s ** 6 * n + 240 * s ** 4 * n ** 2 - 40 * s ** 2 * n ** 3 + n ** 4,
    }
    for ell, closed in g.items():
        for s in range(-20, 21):
            for n in range(1, 51):
                assert cohen_kernel_coeff(ell, s, n) == closed(s, n)


@given(st.integers(0, 12), st.integers(-50, 50), st.integers(-100, 100))
def test_cohen_kernel_parity(ell, s, n):
    assert cohen_kernel_coeff(ell, -s, n) == (-1) ** ell * cohen_kernel_coeff(ell, s, n)


@pytest.mark.parametrize("poly, n, value", [("Y4", 0, 0), ("Y4", 1, 4), ("Y8", 1, 70), ("Y4", 3, -48)])
def test_four_square_examples(poly, n, value):
    assert four_square_sum(poly, n) == value


def _box_oracle(poly, N):
    r = isqrt(N)
    g = np.arange(-r, r + 1, dtype=np.int64)
    x, y, z, t = (a.ravel() for a in np.meshgrid(g, g, g, g, indexing="ij"))
    norm = x * x + y * y + z * z + t * t
    keep = norm <= N
    x, y, z, t, norm = x[keep], y[keep], z[keep], t[keep], norm[keep]
    vals = np.zeros(x.shape, dtype=np.int64)
    for (i, j, k, l), c in arith.HARMONIC_POLYNOMIALS[poly].items():
        vals += c * x ** i * y ** j * z ** k * t ** l
    out = np.zeros(N + 1, dtype=np.int64)
    np.add.at(out, norm, vals)
    return [int(v) for v in out]


@pytest.mark.parametrize("poly", ["Y4", "Y6", "Y8"])
def test_four_square_sums_match_box_enumeration(poly):
    oracle = _box_oracle(poly, 100)
    assert four_square_series(poly, 100) == oracle
    assert [four_square_sum(poly, n) for n in range(101)] == oracle


@pytest.mark.parametrize("poly", ["Y4", "Y6", "Y8"])
def test_polynomials_are_harmonic(poly):
    x, y, z, t = sp.symbols("x y z t")
    expr = sum(c * x ** i * y ** j * z ** k * t ** l
               for (i, j, k, l), c in arith.HARMONIC_POLYNOMIALS[poly].items())
    assert sp.expand(sum(sp.diff(expr, v, 2) for v in (x, y, z, t))) == 0


def test_unknown_polynomial():
    with pytest.raises(DomainError):
        four_square_sum("Y5", 3)


def _eq1_holds(n):
    lhs = sum(hurwitz(4 * n - s * s) for s in range(-isqrt(4 * n), isqrt(4 * n) + 1))
    return lhs + 2 * lambda_k(1, n) == 2 * sigma(1, n)


def test_kronecker_hurwitz_small_range_from_definition():
    assert all(_eq1_holds(n) for n in range(1, 60))


def test_eichler_small_range_from_definition():
    for n in range(1, 120, 2):
        lhs = sum(hurwitz(n - s * s) for s in range(-isqrt(n), isqrt(n) + 1))
        assert lhs + lambda_k(1, n) == Fraction(sigma(1, n), 3)
