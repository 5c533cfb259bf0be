"""Exact integer linear algebra and integer Laurent polynomials.

Everything here works over Python's arbitrary-precision ``int`` (and
``fractions.Fraction`` for intermediate interpolation steps); there is no
floating point anywhere.

Matrices are plain row-major sequences of integer rows.  A matrix with zero
rows is written ``[]``; when its column count matters it can be passed
explicitly where relevant.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from sympy import isprime

IntMatrix = Sequence[Sequence[int]]


class InterpolationError(ValueError):
    """The data admit no integer Laurent polynomial in the requested window."""


def _copy(m: IntMatrix) -> list[list[int]]:
    rows = [list(map(int, row)) for row in m]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    return rows


# ---------------------------------------------------------------------------
# Finite abelian groups


def _invariant_chain(orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant factors of a direct sum of cyclic groups of the given orders."""
    fs = sorted(abs(int(d)) for d in orders if abs(int(d)) != 1)
    if any(d == 0 for d in fs):
        raise ValueError("cyclic orders must be nonzero; use free_rank for Z summands")
    # pairwise (gcd, lcm) exchange until the list is a divisor chain
    changed = True
    while changed:
        changed = False
        for i in range(len(fs)):
            for j in range(i + 1, len(fs)):
                a, b = fs[i], fs[j]
                if b % a:
                    g = math.gcd(a, b)
                    fs[i], fs[j] = g, a // g * b
                    changed = True
        fs = sorted(d for d in fs if d != 1)
    return tuple(fs)


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group ``Z^free_rank + Z/d1 + ... + Z/dk``.

    ``invariant_factors`` is a divisor chain ``d1 | d2 | ... | dk`` with every
    entry at least 2.
    """

    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        fs = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", fs)
        if self.free_rank < 0:
            raise ValueError("free_rank must be non-negative")
        for i, d in enumerate(fs):
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
            if i + 1 < len(fs) and fs[i + 1] % d:
                raise ValueError(f"{d} does not divide {fs[i + 1]}")

    @classmethod
    def from_cyclic(cls, orders: Iterable[int], free_rank: int = 0) -> "AbelianGroup":
        """Build the group ``Z/o1 + Z/o2 + ...`` from arbitrary cyclic orders."""
        return cls(_invariant_chain(orders), free_rank)

    @property
    def order(self) -> int:
        """Order of the torsion subgroup."""
        return math.prod(self.invariant_factors)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def p_rank(self, p: int) -> int:
        """Dimension of ``G (x) F_p`` over ``F_p``."""
        return self.free_rank + sum(1 for d in self.invariant_factors if d % p == 0)

    def __add__(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup.from_cyclic(
            self.invariant_factors + other.invariant_factors,
            self.free_rank + other.free_rank,
        )

    def __str__(self):
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def smith_normal_form(m: IntMatrix, ncols: int | None = None) -> AbelianGroup:
    """Cokernel of an integer matrix, read off from its Smith normal form.

    Rows index generators and columns index relations, so the result is
    ``Z^rows / (column span)``.  Pivots are chosen as the entry of smallest
    absolute value in the remaining block.
    """
    a = _copy(m)
    rows = len(a)
    cols = len(a[0]) if a else (ncols or 0)
    diag: list[int] = []
    top = 0
    while top < min(rows, cols):
        # smallest nonzero entry in the trailing block
        best = None
        for i in range(top, rows):
            for j in range(top, cols):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        a[top], a[pi] = a[pi], a[top]
        for row in a:
            row[top], row[pj] = row[pj], row[top]

        while True:
            p = a[top][top]
            dirty = False
            for i in range(top + 1, rows):
                if a[i][top]:
                    q = a[i][top] // p
                    if q:
                        ri, rt = a[i], a[top]
                        for j in range(top, cols):
                            ri[j] -= q * rt[j]
                    if a[i][top]:
                        dirty = True
            for j in range(top + 1, cols):
                if a[top][j]:
                    q = a[top][j] // p
                    if q:
                        for i in range(top, rows):
                            a[i][j] -= q * a[i][top]
                    if a[top][j]:
                        dirty = True
            if not dirty:
                # pivot must divide the whole trailing block
                bad = next(
                    (i for i in range(top + 1, rows)
                     for j in range(top + 1, cols) if a[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                rt, rb = a[top], a[bad]
                for j in range(top, cols):
                    rt[j] += rb[j]
                dirty = True
            # re-seat the smallest nonzero of the pivot row/column
            best = (abs(a[top][top]), top, top)
            for i in range(top + 1, rows):
                if a[i][top] and abs(a[i][top]) < best[0]:
                    best = (abs(a[i][top]), i, top)
            for j in range(top + 1, cols):
                if a[top][j] and abs(a[top][j]) < best[0]:
                    best = (abs(a[top][j]), top, j)
            _, pi, pj = best
            if pi != top:
                a[top], a[pi] = a[pi], a[top]
            if pj != top:
                for row in a:
                    row[top], row[pj] = row[pj], row[top]
        diag.append(abs(a[top][top]))
        top += 1

    factors = tuple(d for d in diag if d != 1)
    return AbelianGroup(factors, rows - len(diag))


def rank_mod_p(m: IntMatrix, p: int) -> int:
    """Rank of ``m`` over the field with ``p`` elements."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    a = [[x % p for x in row] for row in _copy(m)]
    rows = len(a)
    cols = len(a[0]) if a else 0
    rank = 0
    for j in range(cols):
        piv = next((i for i in range(rank, rows) if a[i][j]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][j], -1, p)
        pr = a[rank]
        for i in range(rows):
            if i != rank and a[i][j]:
                f = a[i][j] * inv % p
                ri = a[i]
                for k in range(j, cols):
                    ri[k] = (ri[k] - f * pr[k]) % p
        rank += 1
        if rank == rows:
            break
    return rank


def det_bareiss(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = _copy(m)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
            ri[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Laurent polynomials


class LaurentPoly:
    """Integer Laurent polynomial in one variable ``t``.

    Stored as a mapping exponent -> nonzero coefficient.  Instances are
    immutable and hashable.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        c = {}
        for e, v in (coeffs or {}).items():
            if isinstance(v, Fraction):
                if v.denominator != 1:
                    raise ValueError(f"non-integer coefficient {v!r}")
                v = v.numerator
            elif not isinstance(v, numbers.Integral):
                raise TypeError(f"coefficients must be integers, got {v!r}")
            if v:
                c[int(e)] = int(v)
        self._c = dict(sorted(c.items()))
        self._hash = None

    @classmethod
    def monomial(cls, coeff: int = 1, exp: int = 0) -> "LaurentPoly":
        return cls({exp: coeff})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    @property
    def min_exp(self) -> int:
        return min(self._c) if self._c else 0

    @property
    def max_exp(self) -> int:
        return max(self._c) if self._c else 0

    @property
    def span(self) -> int:
        return self.max_exp - self.min_exp

    def __call__(self, t):
        """Evaluate at an integer or ``Fraction``; exact."""
        total = 0
        for e, v in self._c.items():
            total += v * (Fraction(t) ** e if e < 0 else t**e)
        if isinstance(total, Fraction) and total.denominator == 1:
            return total.numerator
        return total

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``t**k``."""
        return LaurentPoly({e + k: v for e, v in self._c.items()})

    def reflect(self) -> "LaurentPoly":
        """Substitute ``t -> 1/t``."""
        return LaurentPoly({-e: v for e, v in self._c.items()})

    def is_symmetric(self) -> bool:
        return self == self.reflect()

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._c.items()))
        return self._hash

    def __neg__(self):
        return LaurentPoly({e: -v for e, v in self._c.items()})

    def __add__(self, other):
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) + v
        return LaurentPoly(c)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        c: dict[int, int] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + v1 * v2
        return LaurentPoly(c)

    __rmul__ = __mul__

    def to_json(self) -> dict[str, int]:
        return {str(e): v for e, v in self._c.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> "LaurentPoly":
        return cls({int(e): int(v) for e, v in data.items()})

    def __repr__(self):
        return f"LaurentPoly({self._c!r})"

    def __str__(self):
        if not self._c:
            return "0"
        out = []
        for e in sorted(self._c, reverse=True):
            v = self._c[e]
            mag = abs(v)
            if e == 0:
                term = str(mag)
            else:
                var = "t" if e == 1 else f"t^{e}"
                term = var if mag == 1 else f"{mag}*{var}"
            if not out:
                out.append(term if v > 0 else f"-{term}")
            else:
                out.append(("+ " if v > 0 else "- ") + term)
        return " ".join(out)


def interpolate(points: Sequence[tuple[int, int]], degree_window: tuple[int, int]) -> LaurentPoly:
    """Recover an integer Laurent polynomial from exact values.

    Finds the unique polynomial supported on exponents ``lo..hi`` through the
    given ``(t, value)`` points.  Extra points beyond ``hi - lo + 1`` are used
    as a consistency check.  Raises ``InterpolationError`` if there are too
    few points, or no integer polynomial in the window fits the data.
    """
    lo, hi = degree_window
    if hi < lo:
        raise ValueError("empty degree window")
    need = hi - lo + 1
    xs = [int(x) for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("abscissae must be distinct")
    if any(x == 0 for x in xs):
        raise ValueError("abscissa 0 is not allowed for Laurent data")
    if len(points) < need:
        raise InterpolationError(f"{len(points)} points cannot determine {need} coefficients")

    # q(t) = t^(-lo) p(t) is an ordinary polynomial of degree <= hi - lo
    ys = [Fraction(y) * Fraction(x) ** (-lo) for x, y in points]
    px, py = xs[:need], ys[:need]
    # Newton divided differences
    dd = list(py)
    for k in range(1, need):
        for i in range(need - 1, k - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (px[i] - px[i - k])
    # expand Newton form into monomial coefficients
    poly = [Fraction(0)] * need
    for k in range(need - 1, -1, -1):
        # poly = poly * (t - px[k]) + dd[k]
        nxt = [Fraction(0)] * need
        for i, c in enumerate(poly):
            if c:
                if i + 1 < need:
                    nxt[i + 1] += c
                nxt[i] -= c * px[k]
        nxt[0] += dd[k]
        poly = nxt
    if any(c.denominator != 1 for c in poly):
        raise InterpolationError("no integer polynomial in the window fits the data")
    result = LaurentPoly({i + lo: int(c) for i, c in enumerate(poly)})
    for x, y in points[need:]:
        if result(x) != y:
            raise InterpolationError(f"data point t={x} disagrees with the window fit")
    return result
