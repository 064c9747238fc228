"""Exact model of M_k(Gamma0(4)) and S_k(Gamma0(4)) for even k.

The graded ring of modular forms on Gamma0(4) is taken to be the polynomial
ring in theta^4 and F2 (both weight 2), so M_k has the monomial basis
theta^(4a) F2^b with 2a + 2b = k and dimension k/2 + 1. Cusp forms are
Delta4 * M_(k-6) with Delta4 = eta(2 tau)^12. The test suite checks the
linear independence of these monomials at every weight used here.

Identification is coefficient-wise: a q-expansion is accepted only if it
agrees with a basis combination on every available coefficient, and that
depth must exceed the Sturm bound k/2 by a safety margin.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import List, Optional, Sequence, Tuple

from .qseries import QSeries, delta4_series, f2_series, theta_series

SAFETY_MARGIN = 10
GAMMA0_4_INDEX = 6


class NotInSpace(Exception):
    """The series is not a combination of the requested basis."""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class InsufficientPrecision(ValueError):
    def __init__(self, message: str, required: int):
        super().__init__(message)
        self.required = required


@dataclass
class BasisDecomposition:
    weight: int
    cusp: bool
    labels: List[str]
    coefficients: List[Fraction]
    verified_through: int
    sturm_bound: int = field(default=0)

    def to_dict(self):
        return {
            "weight": self.weight,
            "cusp": self.cusp,
            "labels": self.labels,
            "coefficients": [str(c) for c in self.coefficients],
            "verified_through": self.verified_through,
            "sturm_bound": self.sturm_bound,
        }

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        return " + ".join(f"{c}*{lab}" for c, lab in zip(self.coefficients, self.labels))


def _check_weight(k: int) -> None:
    if k < 0 or k % 2:
        raise ValueError(f"weight must be even and non-negative, got {k}")


def monomials(k: int) -> List[Tuple[int, int]]:
    """(a, b) with 2a + 2b = k, meaning theta^(4a) * F2^b."""
    _check_weight(k)
    return [(a, k // 2 - a) for a in range(k // 2, -1, -1)]


def _label(a: int, b: int) -> str:
    parts = []
    if a:
        parts.append("theta^4" if a == 1 else f"theta^{4 * a}")
    if b:
        parts.append("F2" if b == 1 else f"F2^{b}")
    return "*".join(parts) or "1"


@lru_cache(maxsize=64)
def _space_basis(k: int, N: int) -> Tuple[QSeries, ...]:
    t4 = theta_series(N) ** 4
    f2 = f2_series(N)
    return tuple((t4 ** a) * (f2 ** b) for a, b in monomials(k))


def space_basis(k: int, N: int) -> List[QSeries]:
    return list(_space_basis(k, N))


def space_labels(k: int) -> List[str]:
    return [_label(a, b) for a, b in monomials(k)]


def cusp_basis(k: int, N: int) -> List[QSeries]:
    _check_weight(k)
    if k < 6:
        return []
    d4 = delta4_series(N)
    return [d4 * g for g in _space_basis(k - 6, N)]


def cusp_labels(k: int) -> List[str]:
    _check_weight(k)
    if k < 6:
        return []
    return ["Delta4" if lab == "1" else f"Delta4*{lab}" for lab in space_labels(k - 6)]


def sturm_bound(k: int) -> int:
    _check_weight(k)
    return k * GAMMA0_4_INDEX // 12


# -- fraction-free linear algebra --------------------------------------------

def bareiss_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    M = [list(r) for r in rows]
    if not M:
        return 0
    nrows, ncols = len(M), len(M[0])
    rank, prev = 0, 1
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if M[i][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        p = M[rank][col]
        for i in range(rank + 1, nrows):
            for j in range(col + 1, ncols):
                M[i][j] = (M[i][j] * p - M[i][col] * M[rank][j]) // prev
            M[i][col] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def bareiss_solve(A: Sequence[Sequence[int]], b: Sequence[int]) -> List[Fraction]:
    """Solve the square nonsingular integer system A x = b exactly."""
    n = len(A)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k]), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        M[k], M[piv] = M[piv], M[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    x: List[Fraction] = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(M[i][n]) - sum(M[i][j] * x[j] for j in range(i + 1, n))
        x[i] = acc / M[i][i]
    return x


def _integer_columns(vectors: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    out = []
    for v in vectors:
        den = lcm(*(c.denominator for c in v))
        out.append([c.numerator * (den // c.denominator) for c in v])
    return out


def identify(f: QSeries, k: int, use_cusp: bool = False) -> BasisDecomposition:
    """Write f in the monomial (or cusp) basis of weight k.

    The coefficient vector is solved from the first independent rows of the
    coefficient matrix, then checked against every coefficient of f.
    """
    _check_weight(k)
    basis = cusp_basis(k, f.prec) if use_cusp else space_basis(k, f.prec)
    labels = cusp_labels(k) if use_cusp else space_labels(k)
    dim = len(basis)
    sb = sturm_bound(k)
    required = max(dim, sb) + SAFETY_MARGIN
    if f.prec < required:
        raise InsufficientPrecision(
            f"weight {k} needs precision >= {required}, series has {f.prec}", required)

    cols = _integer_columns([[g[i] for i in range(f.prec + 1)] for g in basis])
    chosen: List[int] = []
    for i in range(f.prec + 1):
        if len(chosen) == dim:
            break
        trial = [[c[r] for c in cols] for r in chosen + [i]]
        if bareiss_rank(trial) > len(chosen):
            chosen.append(i)
    if len(chosen) < dim:
        raise ValueError(f"weight {k} basis is degenerate at precision {f.prec}")

    if dim:
        target = [f[i] for i in chosen]
        den = lcm(*(c.denominator for c in target))
        A = [[c[r] for c in cols] for r in chosen]
        x = bareiss_solve(A, [t.numerator * (den // t.denominator) for t in target])
        x = [xi / den for xi in x]
    else:
        x = []

    for n in range(f.prec + 1):
        value = sum((xi * g[n] for xi, g in zip(x, basis)), Fraction(0))
        if value != f[n]:
            raise NotInSpace(
                f"coefficient of q^{n} is {f[n]}, basis combination gives {value}", index=n)
    return BasisDecomposition(k, use_cusp, labels, x, f.prec, sb)
