"""Exact arithmetic functions: class numbers, Hurwitz class numbers, divisor
sums, the min-divisor sums lambda_k, the Taylor coefficients of the Cohen
kernel 1/(1 - 2sX + nX^2), and harmonic-polynomial sums over four squares.

Every value is an ``int`` or a ``fractions.Fraction``; nothing here rounds.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import gcd, isqrt
from typing import Dict, Iterator, List, NamedTuple, Tuple

import numpy as np


class DomainError(ValueError):
    """Argument outside the domain of an arithmetic function."""


class ReducedForm(NamedTuple):
    """The reduced positive definite form a*x^2 + b*x*y + c*y^2."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c


def _check_discriminant(d: int) -> None:
    if d <= 0 or d % 4 not in (0, 3):
        raise DomainError(f"-{d} is not a negative discriminant (need d > 0, d = 0,3 mod 4)")


def reduced_forms(d: int, primitive: bool = True) -> Iterator[ReducedForm]:
    """Yield the reduced forms of discriminant -d.

    A form is reduced when |b| <= a <= c, with b >= 0 if |b| == a or a == c.
    Every SL2(Z)-class of positive definite forms has exactly one reduced
    representative, so counting these counts classes.
    """
    _check_discriminant(d)
    a = 1
    while 3 * a * a <= d:
        for b in range(-a + 1, a + 1):
            num = b * b + d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if primitive and gcd(gcd(a, abs(b)), c) != 1:
                continue
            yield ReducedForm(a, b, c)
        a += 1


def class_number(d: int) -> int:
    """h(-d): the number of classes of primitive forms of discriminant -d."""
    return sum(1 for _ in reduced_forms(d))


def _class_weight(d: int) -> int:
    return {3: 3, 4: 2}.get(d, 1)


def hurwitz(n: int) -> Fraction:
    """The Hurwitz class number H(n), straight from its definition."""
    if n < 0:
        raise DomainError("hurwitz(n) needs n >= 0")
    if n == 0:
        return Fraction(-1, 12)
    if n % 4 in (1, 2):
        return Fraction(0)
    total = Fraction(0)
    f = 1
    while f * f <= n:
        if n % (f * f) == 0:
            m = n // (f * f)
            # h is undefined for m = 1,2 mod 4; those divisors contribute nothing
            if m % 4 in (0, 3):
                total += Fraction(class_number(m), _class_weight(m))
        f += 1
    return total


_table_lock = threading.Lock()
_table12: List[int] = []


def _sieve_hurwitz12(N: int) -> List[int]:
    # Every reduced form (primitive or not) of discriminant -n contributes
    # 12/w to 12*H(n); the forms k(x^2+y^2) and k(x^2+xy+y^2) carry w = 2, 3.
    acc = np.zeros(N + 1, dtype=np.int64)
    acc[0] = -1
    a = 1
    while 3 * a * a <= N:
        for b in range(-a + 1, a + 1):
            # c runs from a upward; discriminant values step by 4a
            c0 = a if b >= 0 else a + 1
            start = 4 * a * c0 - b * b
            if start > N:
                continue
            acc[start:N + 1:4 * a] += 12
            if c0 == a:
                if b == 0:
                    acc[start] -= 6
                elif b == a:
                    acc[start] -= 8
        a += 1
    return [int(v) for v in acc]


def hurwitz_table12(N: int) -> List[int]:
    """Return [12*H(0), ..., 12*H(N)] as integers.

    Built by sieving over reduced forms and memoized; the cache only grows
    and callers always receive a fresh list.
    """
    global _table12
    if N < 0:
        raise DomainError("table size must be non-negative")
    with _table_lock:
        if len(_table12) <= N:
            _table12 = _sieve_hurwitz12(max(N, 2 * len(_table12)))
        return _table12[:N + 1]


def hurwitz_table(N: int) -> List[Fraction]:
    return [Fraction(v, 12) for v in hurwitz_table12(N)]


def divisors(n: int) -> List[int]:
    if n < 1:
        raise DomainError("divisors need n >= 1")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def sigma(k: int, n: int) -> int:
    """Sum of d**k over the positive divisors d of n."""
    return sum(d ** k for d in divisors(n))


def lambda_k(k: int, n: int) -> Fraction:
    """lambda_k(n) = (1/2) * sum over d | n of min(d, n/d)**k."""
    return Fraction(sum(min(d, n // d) ** k for d in divisors(n)), 2)


def cohen_kernel_coeff(ell: int, s: int, n: int) -> int:
    """Coefficient of X**ell in 1/(1 - 2sX + nX^2)."""
    if ell < 0:
        raise DomainError("ell must be non-negative")
    prev, cur = 1, 2 * s
    if ell == 0:
        return prev
    for _ in range(ell - 1):
        prev, cur = cur, 2 * s * cur - n * prev
    return cur


# Harmonic polynomials in (x, y, z, t): monomial exponents -> coefficient.
Polynomial = Dict[Tuple[int, int, int, int], int]

HARMONIC_POLYNOMIALS: Dict[str, Polynomial] = {
    "Y4": {(4, 0, 0, 0): 1, (2, 2, 0, 0): -6, (0, 4, 0, 0): 1},
    "Y6": {
        (6, 0, 0, 0): 1,
        (4, 2, 0, 0): -5,
        (4, 0, 2, 0): -10,
        (2, 2, 2, 0): 30,
        (2, 0, 4, 0): 5,
        (0, 2, 4, 0): -5,
    },
    "Y8": {
        (8, 0, 0, 0): 13,
        (6, 2, 0, 0): 63,
        (6, 0, 2, 0): -490,
        (6, 0, 0, 2): 63,
        (4, 2, 2, 0): -630,
        (4, 2, 0, 2): -315,
        (4, 0, 4, 0): 1435,
        (4, 0, 2, 2): -630,
        (2, 2, 4, 0): 315,
        (2, 2, 2, 2): 1890,
        (2, 0, 6, 0): -616,
        (2, 0, 4, 2): 315,
        (0, 2, 4, 2): -315,
        (0, 0, 8, 0): 22,
    },
}


def _poly(name: str) -> Polynomial:
    try:
        return HARMONIC_POLYNOMIALS[name]
    except KeyError:
        raise DomainError(f"unknown polynomial {name!r}; choose from {sorted(HARMONIC_POLYNOMIALS)}") from None


def eval_poly(poly: Polynomial, x: int, y: int, z: int, t: int) -> int:
    return sum(c * x ** i * y ** j * z ** k * t ** l for (i, j, k, l), c in poly.items())


def four_square_sum(poly: str, n: int) -> int:
    """Sum of the named harmonic polynomial over all (x, y, z, t) in Z^4
    (all signs and orders, zeros allowed) with x^2 + y^2 + z^2 + t^2 = n."""
    if n < 0:
        raise DomainError("n must be non-negative")
    P = _poly(poly)
    r = isqrt(n)
    total = 0
    for x in range(-r, r + 1):
        rx = n - x * x
        for y in range(-isqrt(rx), isqrt(rx) + 1):
            ry = rx - y * y
            for z in range(-isqrt(ry), isqrt(ry) + 1):
                rz = ry - z * z
                t = isqrt(rz)
                if t * t != rz:
                    continue
                total += eval_poly(P, x, y, z, t)
                if t:
                    total += eval_poly(P, x, y, z, -t)
    return total


def four_square_series(poly: str, N: int) -> List[int]:
    """[four_square_sum(poly, n) for n in 0..N], via products of the
    one-variable moment series sum_x x^e q^(x^2)."""
    P = _poly(poly)
    r = isqrt(N)
    moments: Dict[int, List[int]] = {}

    def moment(e: int) -> List[int]:
        if e not in moments:
            m = [0] * (N + 1)
            for x in range(-r, r + 1):
                m[x * x] += x ** e
            moments[e] = m
        return moments[e]

    def conv(f: List[int], g: List[int]) -> List[int]:
        out = [0] * (N + 1)
        nz = [(i, v) for i, v in enumerate(g) if v]
        for i, fi in enumerate(f):
            if fi:
                for j, gj in nz:
                    if i + j > N:
                        break
                    out[i + j] += fi * gj
        return out

    total = [0] * (N + 1)
    for exps, c in P.items():
        prod = moment(exps[0])
        for e in exps[1:]:
            prod = conv(prod, moment(e))
        for i, v in enumerate(prod):
            total[i] += c * v
    return total
