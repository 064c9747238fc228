"""Truncated q-expansions with exact rational coefficients.

A :class:`QSeries` of precision ``N`` knows a_0, ..., a_N and nothing past
q^N. Binary operations truncate to the smaller precision.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt, lcm
from typing import Iterable, List, Optional, Sequence, Union

from .arith import hurwitz_table12, lambda_k, sigma

Number = Union[int, Fraction]


class QSeries:
    __slots__ = ("prec", "coeffs", "weight")

    def __init__(self, coeffs: Iterable[Number], prec: Optional[int] = None,
                 weight: Optional[Number] = None):
        cs = [Fraction(c) for c in coeffs]
        if prec is None:
            prec = len(cs) - 1
        if prec < 0:
            raise ValueError("precision must be non-negative")
        cs = cs[:prec + 1] + [Fraction(0)] * (prec + 1 - len(cs))
        self.prec = prec
        self.coeffs = tuple(cs)
        self.weight = None if weight is None else Fraction(weight)

    @classmethod
    def zero(cls, prec: int) -> "QSeries":
        return cls([], prec)

    @classmethod
    def one(cls, prec: int) -> "QSeries":
        return cls([1], prec, weight=0)

    def __len__(self) -> int:
        return self.prec + 1

    def __getitem__(self, n: int) -> Fraction:
        if not 0 <= n <= self.prec:
            raise IndexError(f"q^{n} is outside precision {self.prec}")
        return self.coeffs[n]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.prec == other.prec and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.prec, self.coeffs))

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:6])
        tail = ", ..." if self.prec > 5 else ""
        return f"QSeries([{head}{tail}], prec={self.prec})"

    def truncate(self, prec: int) -> "QSeries":
        if prec > self.prec:
            raise ValueError(f"cannot extend precision {self.prec} to {prec}")
        return QSeries(self.coeffs[:prec + 1], prec, self.weight)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "QSeries") -> "QSeries":
        return add(self, other)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return add(self, scale(-1, other))

    def __neg__(self) -> "QSeries":
        return scale(-1, self)

    def __mul__(self, other: Union["QSeries", Number]) -> "QSeries":
        if isinstance(other, QSeries):
            return mul(self, other)
        return scale(other, self)

    def __rmul__(self, other: Number) -> "QSeries":
        return scale(other, self)

    def __pow__(self, e: int) -> "QSeries":
        if e < 0:
            raise ValueError("negative powers are not supported")
        result = QSeries.one(self.prec)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result


def add(f: QSeries, g: QSeries) -> QSeries:
    N = min(f.prec, g.prec)
    w = f.weight if f.weight == g.weight else None
    return QSeries([a + b for a, b in zip(f.coeffs[:N + 1], g.coeffs[:N + 1])], N, w)


def scale(c: Number, f: QSeries) -> QSeries:
    c = Fraction(c)
    return QSeries([c * a for a in f.coeffs], f.prec, f.weight)


def _integral(coeffs: Sequence[Fraction]) -> tuple:
    den = lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    return [c.numerator * (den // c.denominator) for c in coeffs], den


def mul(f: QSeries, g: QSeries) -> QSeries:
    """Cauchy product, truncated at the smaller precision."""
    N = min(f.prec, g.prec)
    a, da = _integral(f.coeffs[:N + 1])
    b, db = _integral(g.coeffs[:N + 1])
    # iterate over the sparser factor's support
    sa = [(i, v) for i, v in enumerate(a) if v]
    sb = [(j, v) for j, v in enumerate(b) if v]
    if len(sa) > len(sb):
        sa, sb = sb, sa
    out = [0] * (N + 1)
    for i, u in sa:
        for j, v in sb:
            if i + j > N:
                break
            out[i + j] += u * v
    w = None if f.weight is None or g.weight is None else f.weight + g.weight
    return QSeries([Fraction(v, da * db) for v in out], N, w)


def d_tau(f: QSeries) -> QSeries:
    """The operator q d/dq, i.e. (1/2 pi i) d/d tau on q-expansions."""
    return QSeries([n * a for n, a in enumerate(f.coeffs)], f.prec)


def half_shift(f: QSeries) -> QSeries:
    """tau -> tau + 1/2, which sends q^n to (-1)^n q^n."""
    return QSeries([-a if n % 2 else a for n, a in enumerate(f.coeffs)], f.prec, f.weight)


def odd_part(f: QSeries) -> QSeries:
    return scale(Fraction(1, 2), f - half_shift(f))


def theta_series(N: int) -> QSeries:
    """sum over n in Z of q^(n^2)."""
    c = [0] * (N + 1)
    for n in range(-isqrt(N), isqrt(N) + 1):
        c[n * n] += 1
    return QSeries(c, N, weight=Fraction(1, 2))


def hurwitz_series(N: int) -> QSeries:
    return QSeries([Fraction(v, 12) for v in hurwitz_table12(N)], N, weight=Fraction(3, 2))


def f2_series(N: int) -> QSeries:
    """sum over odd n of sigma_1(n) q^n (weight 2 on Gamma0(4))."""
    c = [sigma(1, n) if n % 2 else 0 for n in range(1, N + 1)]
    return QSeries([0] + c, N, weight=2)


def lambda_odd_series(ell: int, N: int) -> QSeries:
    """sum over odd n of lambda_ell(n) q^n."""
    if ell % 2 == 0:
        raise ValueError("lambda_odd_series needs odd ell")
    c: List[Fraction] = [Fraction(0)] * (N + 1)
    for n in range(1, N + 1, 2):
        c[n] = lambda_k(ell, n)
    return QSeries(c, N, weight=ell + 1)


def delta4_series(N: int) -> QSeries:
    """eta(2 tau)^12 = q * prod (1 - q^(2n))^12, by repeated squaring."""
    if N == 0:
        return QSeries([0], 0, weight=6)
    M = N - 1
    p = [0] * (M + 1)
    p[0] = 1
    for n in range(1, M // 2 + 1):
        # multiply by (1 - q^(2n)) in place, high degrees first
        for i in range(M, 2 * n - 1, -1):
            p[i] -= p[i - 2 * n]
    e = QSeries(p, M)
    e4 = (e * e) * (e * e)
    e12 = e4 * e4 * e4
    return QSeries([0] + list(e12.coeffs), N, weight=6)


# -- plain-text interchange ------------------------------------------------

def to_text(f: QSeries) -> str:
    """Header ``prec=N`` (plus ``weight=w`` if tagged), then ``n a_n`` lines.
    Integers print bare, other coefficients as ``p/q``."""
    lines = [f"prec={f.prec}"]
    if f.weight is not None:
        lines.append(f"weight={f.weight}")
    lines.extend(f"{n} {a}" for n, a in enumerate(f.coeffs))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> QSeries:
    prec = None
    weight = None
    coeffs = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("prec="):
            prec = int(line[5:])
        elif line.startswith("weight="):
            weight = Fraction(line[7:])
        else:
            try:
                n_str, a_str = line.split()
                coeffs[int(n_str)] = Fraction(a_str)
            except ValueError:
                raise ValueError(f"line {lineno}: expected '<n> <p/q>', got {raw!r}") from None
    if prec is None:
        raise ValueError("missing 'prec=<N>' header")
    bad = [n for n in coeffs if not 0 <= n <= prec]
    if bad:
        raise ValueError(f"coefficient index {bad[0]} outside precision {prec}")
    return QSeries([coeffs.get(n, 0) for n in range(prec + 1)], prec, weight)
