"""Exact integer and rational matrix kernels.

Everything here runs in arbitrary-precision arithmetic: matrices hold Python
ints or :class:`fractions.Fraction` entries and no floating point appears
anywhere. The row-style Hermite normal form computed in this module is the
canonical form underlying subgroup equality throughout the package, so its
convention is pinned deliberately:

* nonzero rows come first, in echelon order (zero rows sink to the bottom),
* every pivot is positive,
* entries above a pivot are reduced into ``[0, pivot)``.
"""

from __future__ import annotations

import math
import operator
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ContainmentError, InternalInvariantViolation

__all__ = [
    "Cardinality",
    "INFINITE",
    "IntMatrix",
    "RatMatrix",
    "xgcd",
    "hermite_form",
    "smith_form",
    "lattice_index",
    "clear_denominators",
    "determinant",
]


class Cardinality:
    """The size of a group or quotient: a positive integer, or infinite.

    >>> Cardinality.finite(8).value
    8
    >>> INFINITE.is_finite
    False
    >>> Cardinality.finite(2) * Cardinality.finite(3)
    Finite(6)
    """

    __slots__ = ("_value",)

    def __init__(self, value: int | None):
        if value is not None:
            value = operator.index(value)
            if value < 1:
                raise ValueError("finite cardinality must be >= 1")
        self._value = value

    @classmethod
    def finite(cls, value: int) -> "Cardinality":
        return cls(value)

    @property
    def is_finite(self) -> bool:
        return self._value is not None

    @property
    def value(self) -> int:
        if self._value is None:
            raise ValueError("infinite cardinality has no integer value")
        return self._value

    def __mul__(self, other: "Cardinality") -> "Cardinality":
        if not isinstance(other, Cardinality):
            return NotImplemented
        if self._value is None or other._value is None:
            return INFINITE
        return Cardinality(self._value * other._value)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Cardinality) and self._value == other._value

    def __hash__(self) -> int:
        return hash(("Cardinality", self._value))

    def __repr__(self) -> str:
        return "Infinite" if self._value is None else f"Finite({self._value})"


INFINITE = Cardinality(None)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns ``(g, x, y)`` with ``g = a*x + b*y`` and ``g >= 0``."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def _coerce_int(e) -> int:
    # operator.index rejects floats; exactness is non-negotiable here
    return operator.index(e)


def _coerce_fraction(e) -> Fraction:
    if isinstance(e, float):
        raise TypeError("floating point entries are not allowed; use Fraction or str")
    return Fraction(e)


class IntMatrix:
    """Immutable dense integer matrix, row-major, arbitrary precision."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        rows = operator.index(rows)
        cols = operator.index(cols)
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        ents = tuple(_coerce_int(e) for e in entries)
        if len(ents) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(ents)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", ents)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "IntMatrix":
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise ValueError("ragged rows")
        return cls(n, m, [e for r in rows for e in r])

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(key)
        return self.entries[i * self.cols + j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[t] * other.entries[t * other.cols + j] for t in range(self.cols)))
        return IntMatrix(self.rows, other.cols, out)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_rows()!r})"


class RatMatrix:
    """Immutable dense matrix over the rationals (``Fraction`` entries)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        rows = operator.index(rows)
        cols = operator.index(cols)
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        ents = tuple(_coerce_fraction(e) for e in entries)
        if len(ents) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(ents)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", ents)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise ValueError("ragged rows")
        return cls(n, m, [e for r in rows for e in r])

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, [Fraction(1) if i == j else Fraction(0) for i in range(n) for j in range(n)])

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(key)
        return self.entries[i * self.cols + j]

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if not isinstance(other, RatMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum((ri[t] * other.entries[t * other.cols + j] for t in range(self.cols)), Fraction(0)))
        return RatMatrix(self.rows, other.cols, out)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RatMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"RatMatrix({[[str(e) for e in r] for r in self.to_rows()]!r})"


def _row_sub(rows: list[list[int]], i: int, j: int, q: int, start: int = 0) -> None:
    """rows[i] -= q * rows[j], from column ``start`` on."""
    ri, rj = rows[i], rows[j]
    for t in range(start, len(ri)):
        ri[t] -= q * rj[t]


def hermite_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(h, u)`` where ``u`` is unimodular and ``h == u @ m``. ``h``
    follows the package convention: echelon row order, positive pivots,
    entries above each pivot reduced into ``[0, pivot)``.
    """
    nrows, ncols = m.rows, m.cols
    work = m.to_rows()
    trans = IntMatrix.identity(nrows).to_rows()
    pivot_row = 0
    for col in range(ncols):
        if pivot_row == nrows:
            break
        while True:
            live = [i for i in range(pivot_row, nrows) if work[i][col]]
            if not live:
                break
            best = min(live, key=lambda i: abs(work[i][col]))
            if best != pivot_row:
                work[pivot_row], work[best] = work[best], work[pivot_row]
                trans[pivot_row], trans[best] = trans[best], trans[pivot_row]
            if work[pivot_row][col] < 0:
                work[pivot_row] = [-e for e in work[pivot_row]]
                trans[pivot_row] = [-e for e in trans[pivot_row]]
            p = work[pivot_row][col]
            clean = True
            for i in range(pivot_row + 1, nrows):
                if work[i][col]:
                    q = work[i][col] // p
                    if q:
                        _row_sub(work, i, pivot_row, q)
                        _row_sub(trans, i, pivot_row, q)
                    if work[i][col]:
                        clean = False
            if clean:
                break
        if work[pivot_row][col] == 0:
            continue
        p = work[pivot_row][col]
        for i in range(pivot_row):
            q = work[i][col] // p
            if q:
                _row_sub(work, i, pivot_row, q)
                _row_sub(trans, i, pivot_row, q)
        pivot_row += 1
    return IntMatrix.from_rows(work) if work else IntMatrix(0, ncols, []), IntMatrix.from_rows(trans) if trans else IntMatrix(0, 0, [])


def _hnf_pivot_data(m: IntMatrix) -> tuple[list[list[int]], list[int]]:
    """Nonzero HNF rows of ``m`` plus their pivot columns."""
    h, _ = hermite_form(m)
    rows: list[list[int]] = []
    pivots: list[int] = []
    for i in range(h.rows):
        row = list(h.row(i))
        lead = next((c for c, e in enumerate(row) if e), None)
        if lead is None:
            break
        rows.append(row)
        pivots.append(lead)
    return rows, pivots


def _reduce_in_span(vec: Sequence[int], rows: list[list[int]], pivots: list[int]) -> bool:
    """True iff ``vec`` lies in the integer row span described by HNF data."""
    v = list(vec)
    by_col = dict(zip(pivots, range(len(pivots))))
    for c in range(len(v)):
        if not v[c]:
            continue
        i = by_col.get(c)
        if i is None:
            return False
        p = rows[i][c]
        if v[c] % p:
            return False
        q = v[c] // p
        row = rows[i]
        for t in range(c, len(v)):
            v[t] -= q * row[t]
    return True


def lattice_index(sub: IntMatrix, sup: IntMatrix) -> Cardinality:
    """Index of the row lattice of ``sub`` inside the row lattice of ``sup``.

    Finite iff the two spans have equal rank. Raises
    :class:`~entropy_lab.errors.ContainmentError` if some row of ``sub`` is
    not in the span of ``sup``.
    """
    if sub.cols != sup.cols:
        raise ValueError("lattices live in different coordinate spaces")
    sup_rows, sup_pivots = _hnf_pivot_data(sup)
    for i in range(sub.rows):
        row = sub.row(i)
        if any(row) and not _reduce_in_span(row, sup_rows, sup_pivots):
            raise ContainmentError(f"row {i} of the sublattice is outside the superlattice")
    sub_rows, sub_pivots = _hnf_pivot_data(sub)
    if len(sub_rows) < len(sup_rows):
        return INFINITE
    if len(sub_rows) > len(sup_rows) or sub_pivots != sup_pivots:
        raise InternalInvariantViolation("containment with mismatched pivot structure")
    num = math.prod(r[c] for r, c in zip(sub_rows, sub_pivots))
    den = math.prod(r[c] for r, c in zip(sup_rows, sup_pivots))
    q, rem = divmod(num, den)
    if rem:
        raise InternalInvariantViolation("lattice index is not an integer")
    return Cardinality.finite(q)


def smith_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: returns ``(s, u, v)`` with ``s == u @ m @ v`` diagonal.

    Diagonal entries are non-negative and satisfy the divisibility chain
    ``d1 | d2 | ... | dr`` with any zero entries at the end.
    """
    nrows, ncols = m.rows, m.cols
    a = m.to_rows()
    u = IntMatrix.identity(nrows).to_rows()
    v = IntMatrix.identity(ncols).to_rows()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def row_op(i, j, q):
        # a[i] -= q * a[j]
        _row_sub(a, i, j, q)
        _row_sub(u, i, j, q)

    def col_op(i, j, q):
        # col i -= q * col j
        for r in a:
            r[i] -= q * r[j]
        for r in v:
            r[i] -= q * r[j]

    t = 0
    size = min(nrows, ncols)
    while t < size:
        pos = None
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                e = a[i][j]
                if e and (best is None or abs(e) < best):
                    best, pos = abs(e), (i, j)
        if pos is None:
            break
        if pos[0] != t:
            swap_rows(pos[0], t)
        if pos[1] != t:
            swap_cols(pos[1], t)
        while True:
            retry = False
            for i in range(t + 1, nrows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    if q:
                        row_op(i, t, q)
                    if a[i][t]:
                        swap_rows(i, t)
                        retry = True
            if retry:
                continue
            for j in range(t + 1, ncols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    if q:
                        col_op(j, t, q)
                    if a[t][j]:
                        swap_cols(j, t)
                        retry = True
            if retry:
                continue
            d = a[t][t]
            bad = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if a[i][j] % d:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # pull a non-divisible row into row t, then re-clear
            _row_sub(a, t, bad, -1)
            _row_sub(u, t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-e for e in a[t]]
            u[t] = [-e for e in u[t]]
        t += 1
    s = IntMatrix.from_rows(a) if a else IntMatrix(0, ncols, [])
    return s, IntMatrix.from_rows(u) if u else IntMatrix(0, 0, []), IntMatrix.from_rows(v) if v else IntMatrix(0, 0, [])


def clear_denominators(m: RatMatrix) -> tuple[IntMatrix, int]:
    """Smallest positive ``d`` with ``d*m`` integral, plus that integer matrix."""
    d = 1
    for e in m.entries:
        d = math.lcm(d, e.denominator)
    ints = [e.numerator * (d // e.denominator) for e in m.entries]
    return IntMatrix(m.rows, m.cols, ints), d


def determinant(m: IntMatrix) -> int:
    """Exact determinant of a square integer matrix (fraction-free Bareiss)."""
    if m.rows != m.cols:
        raise ValueError("determinant requires a square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = m.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]
