"""Ambient Abelian groups, their elements, and finitely generated subgroups.

Two ambient families are supported:

* ``Rational(rank)``: the column group Q^rank,
* ``TorsionSum(modulus)``: the direct sum of countably many copies of
  Z/modulus, with finitely supported coordinates.

A finitely generated subgroup is stored in a canonical form, so structural
equality of :class:`FgSubgroup` values is subgroup equality:

* rational: the Hermite basis of the integer lattice of numerators over a
  minimal common denominator ``den`` (``gcd`` of all basis entries and
  ``den`` is 1),
* torsion: the square Hermite basis of the integer lift (generators joined
  with ``modulus * e_i`` relations) over the support window, trimmed so the
  last window coordinate actually carries a nonzero residue. The window is
  part of the representation, never of equality: trailing untouched
  coordinates are implicitly zero.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import linalg
from .errors import AmbientMismatchError, ContainmentError, InternalInvariantViolation
from .linalg import INFINITE, Cardinality, IntMatrix, xgcd

__all__ = [
    "Ambient",
    "Rational",
    "TorsionSum",
    "Element",
    "FgSubgroup",
    "subgroup",
    "sum",
    "contains",
    "is_subgroup_of",
    "quotient_index",
    "subgroup_order",
]

_builtin_sum = sum


class Ambient:
    """Base class for the two ambient group families."""

    __slots__ = ()

    def element(self, data) -> "Element":
        raise NotImplementedError

    def zero(self) -> "Element":
        raise NotImplementedError


@dataclass(frozen=True, slots=True)
class Rational(Ambient):
    """The rational vector group Q^rank."""

    rank: int

    def __post_init__(self):
        if operator.index(self.rank) < 1:
            raise ValueError("rank must be >= 1")

    def element(self, values: Iterable) -> "Element":
        vec = tuple(_as_fraction(v) for v in values)
        if len(vec) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates, got {len(vec)}")
        return Element(self, vec)

    def zero(self) -> "Element":
        return Element(self, (Fraction(0),) * self.rank)

    def basis_element(self, i: int) -> "Element":
        if not 0 <= i < self.rank:
            raise ValueError(f"coordinate {i} out of range for rank {self.rank}")
        return Element(self, tuple(Fraction(1 if j == i else 0) for j in range(self.rank)))


@dataclass(frozen=True, slots=True)
class TorsionSum(Ambient):
    """The direct sum of countably many copies of Z/modulus."""

    modulus: int

    def __post_init__(self):
        if operator.index(self.modulus) < 2:
            raise ValueError("modulus must be >= 2")

    def element(self, entries) -> "Element":
        if hasattr(entries, "items"):
            items = entries.items()
        else:
            items = entries
        acc: dict[int, int] = {}
        for i, r in items:
            i = operator.index(i)
            if i < 0:
                raise ValueError(f"coordinate index {i} is negative")
            acc[i] = (acc.get(i, 0) + operator.index(r)) % self.modulus
        pairs = tuple(sorted((i, r) for i, r in acc.items() if r))
        return Element(self, pairs)

    def zero(self) -> "Element":
        return Element(self, ())

    def basis_element(self, i: int) -> "Element":
        i = operator.index(i)
        if i < 0:
            raise ValueError("coordinate index must be >= 0")
        return Element(self, ((i, 1),))


def _as_fraction(v) -> Fraction:
    if isinstance(v, float):
        raise TypeError("floating point coordinates are not allowed; use Fraction or str")
    return Fraction(v)


class Element:
    """An element of an ambient group.

    Rational payload: a tuple of ``Fraction`` of length ``rank``. Torsion
    payload: a sorted tuple of ``(index, residue)`` pairs with residues in
    ``[1, modulus)``; absent coordinates are zero.
    """

    __slots__ = ("ambient", "data")

    def __init__(self, ambient: Ambient, data):
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("Element is immutable")

    @property
    def is_zero(self) -> bool:
        if isinstance(self.ambient, TorsionSum):
            return not self.data
        return all(v == 0 for v in self.data)

    def _check_same(self, other: "Element") -> None:
        if self.ambient != other.ambient:
            raise AmbientMismatchError(f"{self.ambient!r} vs {other.ambient!r}")

    def __add__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        self._check_same(other)
        amb = self.ambient
        if isinstance(amb, TorsionSum):
            acc = dict(self.data)
            for i, r in other.data:
                t = (acc.get(i, 0) + r) % amb.modulus
                if t:
                    acc[i] = t
                else:
                    acc.pop(i, None)
            return Element(amb, tuple(sorted(acc.items())))
        return Element(amb, tuple(a + b for a, b in zip(self.data, other.data)))

    def __neg__(self) -> "Element":
        amb = self.ambient
        if isinstance(amb, TorsionSum):
            return Element(amb, tuple((i, amb.modulus - r) for i, r in self.data))
        return Element(amb, tuple(-v for v in self.data))

    def __sub__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def __mul__(self, k) -> "Element":
        k = operator.index(k)
        amb = self.ambient
        if isinstance(amb, TorsionSum):
            pairs = []
            for i, r in self.data:
                t = (r * k) % amb.modulus
                if t:
                    pairs.append((i, t))
            return Element(amb, tuple(pairs))
        return Element(amb, tuple(v * k for v in self.data))

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Element) and self.ambient == other.ambient and self.data == other.data

    def __hash__(self) -> int:
        return hash((self.ambient, self.data))

    def __repr__(self) -> str:
        if isinstance(self.ambient, TorsionSum):
            body = " + ".join(f"{r}*e{i}" if r != 1 else f"e{i}" for i, r in self.data) or "0"
            return f"<{body} mod {self.ambient.modulus}>"
        return f"<({', '.join(str(v) for v in self.data)})>"


class FgSubgroup:
    """A finitely generated subgroup of an ambient group, in canonical form."""

    __slots__ = ("ambient", "basis", "den")

    def __init__(self, ambient: Ambient, basis: tuple[tuple[int, ...], ...], den: int):
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("FgSubgroup is immutable")

    @property
    def support_window(self) -> int:
        """Number of leading coordinates the subgroup touches (torsion only)."""
        if not isinstance(self.ambient, TorsionSum):
            raise ValueError("support_window is defined for torsion ambients only")
        return len(self.basis)

    @property
    def rank(self) -> int:
        """Number of basis rows (torsion: size of the lift basis)."""
        return len(self.basis)

    @property
    def is_zero(self) -> bool:
        if isinstance(self.ambient, TorsionSum):
            return not self.basis
        return not self.basis

    def generators(self) -> list[Element]:
        """Canonical generators as ambient elements (zero rows dropped)."""
        amb = self.ambient
        gens: list[Element] = []
        if isinstance(amb, TorsionSum):
            m = amb.modulus
            for row in self.basis:
                pairs = tuple((i, e % m) for i, e in enumerate(row) if e % m)
                if pairs:
                    gens.append(Element(amb, pairs))
        else:
            for row in self.basis:
                gens.append(Element(amb, tuple(Fraction(e, self.den) for e in row)))
        return gens

    def order(self) -> Cardinality:
        return subgroup_order(self)

    def __contains__(self, x: Element) -> bool:
        return contains(self, x)

    def __add__(self, other: "FgSubgroup") -> "FgSubgroup":
        if not isinstance(other, FgSubgroup):
            return NotImplemented
        return sum(self, other)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FgSubgroup)
            and self.ambient == other.ambient
            and self.basis == other.basis
            and self.den == other.den
        )

    def __hash__(self) -> int:
        return hash((self.ambient, self.basis, self.den))

    def __repr__(self) -> str:
        if isinstance(self.ambient, TorsionSum):
            return f"FgSubgroup({self.ambient!r}, window={len(self.basis)}, basis={self.basis!r})"
        return f"FgSubgroup({self.ambient!r}, den={self.den}, basis={self.basis!r})"


class _TorsionAcc:
    """Growable echelon basis of a torsion subgroup's integer lift.

    ``rows[j]`` always has its pivot at column ``j``; the lattice always
    contains ``modulus * Z^window``, so the basis is square and full-rank.
    """

    __slots__ = ("modulus", "rows")

    def __init__(self, modulus: int):
        self.modulus = modulus
        self.rows: list[list[int]] = []

    @classmethod
    def from_subgroup(cls, h: "FgSubgroup") -> "_TorsionAcc":
        acc = cls(h.ambient.modulus)
        acc.rows = [list(r) for r in h.basis]
        return acc

    def _ensure_window(self, w: int) -> None:
        cur = len(self.rows)
        if w <= cur:
            return
        pad = w - cur
        for row in self.rows:
            row.extend([0] * pad)
        m = self.modulus
        for j in range(cur, w):
            row = [0] * w
            row[j] = m
            self.rows.append(row)

    def absorb(self, x: Element) -> None:
        pairs = x.data
        if not pairs:
            return
        self._ensure_window(pairs[-1][0] + 1)
        vec = [0] * len(self.rows)
        for i, r in pairs:
            vec[i] = r
        self._absorb_vec(vec)

    def _absorb_vec(self, vec: list[int]) -> None:
        rows = self.rows
        w = len(rows)
        for j in range(w):
            b = vec[j]
            if not b:
                continue
            row = rows[j]
            a = row[j]
            if b % a == 0:
                q = b // a
                for t in range(j, w):
                    vec[t] -= q * row[t]
            else:
                g, xc, yc = xgcd(a, b)
                ag, bg = a // g, b // g
                for t in range(j, w):
                    rt, vt = row[t], vec[t]
                    row[t] = xc * rt + yc * vt
                    vec[t] = ag * vt - bg * rt

    def state(self) -> tuple[int, int]:
        """(window, product of pivots); enough to compute relative indices."""
        return len(self.rows), math.prod(r[j] for j, r in enumerate(self.rows))

    def to_subgroup(self, ambient: TorsionSum) -> FgSubgroup:
        w = len(self.rows)
        m = self.modulus
        rows = [r.copy() for r in self.rows]
        for j in range(1, w):
            p = rows[j][j]
            rj = rows[j]
            for i in range(j):
                q = rows[i][j] // p
                if q:
                    ri = rows[i]
                    for t in range(j, w):
                        ri[t] -= q * rj[t]
        live = 0
        for j in range(w):
            if any(rows[i][j] % m for i in range(j + 1)):
                live = j + 1
        basis = tuple(tuple(rows[i][:live]) for i in range(live))
        return FgSubgroup(ambient, basis, 1)


class _RationalAcc:
    """Growable echelon basis of a rational subgroup.

    The subgroup is ``L / den`` for an integer row lattice ``L``; absorbing a
    vector with new denominators rescales ``L`` so ``den`` only ever grows by
    integer factors.
    """

    __slots__ = ("dim", "den", "rows", "pivots")

    def __init__(self, dim: int):
        self.dim = dim
        self.den = 1
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    @classmethod
    def from_subgroup(cls, h: "FgSubgroup") -> "_RationalAcc":
        acc = cls(h.ambient.rank)
        acc.den = h.den
        acc.rows = [list(r) for r in h.basis]
        acc.pivots = [next(c for c, e in enumerate(r) if e) for r in acc.rows]
        return acc

    def absorb(self, x: Element) -> None:
        target = self.den
        for f in x.data:
            target = math.lcm(target, f.denominator)
        if target != self.den:
            factor = target // self.den
            for row in self.rows:
                for t in range(len(row)):
                    row[t] *= factor
            self.den = target
        vec = [f.numerator * (target // f.denominator) for f in x.data]
        self._absorb_vec(vec)

    def _absorb_vec(self, vec: list[int]) -> None:
        n = self.dim
        while True:
            lead = next((c for c in range(n) if vec[c]), None)
            if lead is None:
                return
            pos = 0
            while pos < len(self.pivots) and self.pivots[pos] < lead:
                pos += 1
            if pos < len(self.pivots) and self.pivots[pos] == lead:
                row = self.rows[pos]
                a, b = row[lead], vec[lead]
                if b % a == 0:
                    q = b // a
                    for t in range(lead, n):
                        vec[t] -= q * row[t]
                else:
                    g, xc, yc = xgcd(a, b)
                    ag, bg = a // g, b // g
                    for t in range(lead, n):
                        rt, vt = row[t], vec[t]
                        row[t] = xc * rt + yc * vt
                        vec[t] = ag * vt - bg * rt
            else:
                if vec[lead] < 0:
                    vec = [-t for t in vec]
                self.rows.insert(pos, list(vec))
                self.pivots.insert(pos, lead)
                return

    def state(self) -> tuple[int, int, int]:
        """(den, rank, product of pivots)."""
        return self.den, len(self.rows), math.prod(r[c] for r, c in zip(self.rows, self.pivots))

    def to_subgroup(self, ambient: Rational) -> FgSubgroup:
        rows = [r.copy() for r in self.rows]
        pivots = self.pivots
        for pos in range(1, len(rows)):
            c = pivots[pos]
            p = rows[pos][c]
            rp = rows[pos]
            for i in range(pos):
                q = rows[i][c] // p
                if q:
                    ri = rows[i]
                    for t in range(c, self.dim):
                        ri[t] -= q * rp[t]
        if not rows:
            return FgSubgroup(ambient, (), 1)
        g = self.den
        for row in rows:
            for e in row:
                g = math.gcd(g, e)
        basis = tuple(tuple(e // g for e in row) for row in rows)
        return FgSubgroup(ambient, basis, self.den // g)


def _accumulator(ambient: Ambient):
    if isinstance(ambient, TorsionSum):
        return _TorsionAcc(ambient.modulus)
    return _RationalAcc(ambient.rank)


def _accumulator_from(h: FgSubgroup):
    if isinstance(h.ambient, TorsionSum):
        return _TorsionAcc.from_subgroup(h)
    return _RationalAcc.from_subgroup(h)


def _torsion_rel_index(modulus: int, earlier: tuple[int, int], later: tuple[int, int]) -> Cardinality:
    """Index of the earlier accumulator state inside the later one."""
    (w1, p1), (w2, p2) = earlier, later
    num = modulus ** (w2 - w1) * p1
    q, rem = divmod(num, p2)
    if rem:
        raise InternalInvariantViolation("torsion index is not an integer")
    return Cardinality.finite(q)


def _rational_rel_index(earlier: tuple[int, int, int], later: tuple[int, int, int]) -> Cardinality:
    (d1, r1, p1), (d2, r2, p2) = earlier, later
    if r2 > r1:
        return INFINITE
    scale, rem = divmod(d2, d1)
    if rem:
        raise InternalInvariantViolation("denominator did not grow by an integer factor")
    num = scale**r1 * p1
    q, rem = divmod(num, p2)
    if rem:
        raise InternalInvariantViolation("rational index is not an integer")
    return Cardinality.finite(q)


def _rel_index(ambient: Ambient, earlier, later) -> Cardinality:
    if isinstance(ambient, TorsionSum):
        return _torsion_rel_index(ambient.modulus, earlier, later)
    return _rational_rel_index(earlier, later)


def subgroup(ambient: Ambient, gens: Iterable[Element]) -> FgSubgroup:
    """Canonical subgroup generated by ``gens`` inside ``ambient``."""
    acc = _accumulator(ambient)
    for g in gens:
        if not isinstance(g, Element):
            raise TypeError(f"expected Element, got {type(g).__name__}")
        if g.ambient != ambient:
            raise AmbientMismatchError(f"generator from {g.ambient!r} in {ambient!r}")
        acc.absorb(g)
    return acc.to_subgroup(ambient)


def sum(h: FgSubgroup, k: FgSubgroup) -> FgSubgroup:
    """Smallest subgroup containing both ``h`` and ``k``."""
    if h.ambient != k.ambient:
        raise AmbientMismatchError(f"{h.ambient!r} vs {k.ambient!r}")
    acc = _accumulator_from(h)
    for g in k.generators():
        acc.absorb(g)
    return acc.to_subgroup(h.ambient)


def contains(h: FgSubgroup, x: Element) -> bool:
    """Membership of an ambient element in ``h``."""
    if h.ambient != x.ambient:
        raise AmbientMismatchError(f"{h.ambient!r} vs {x.ambient!r}")
    amb = h.ambient
    if isinstance(amb, TorsionSum):
        w = len(h.basis)
        if any(i >= w for i, _ in x.data):
            return False
        vec = [0] * w
        for i, r in x.data:
            vec[i] = r
        for j in range(w):
            b = vec[j]
            if not b:
                continue
            row = h.basis[j]
            p = row[j]
            if b % p:
                return False
            q = b // p
            for t in range(j, w):
                vec[t] -= q * row[t]
        return True
    # rational: x in L/den iff den*x is an integer vector inside L
    vec = []
    for f in x.data:
        scaled = f * h.den
        if scaled.denominator != 1:
            return False
        vec.append(scaled.numerator)
    pivots = [next(c for c, e in enumerate(r) if e) for r in h.basis]
    by_col = dict(zip(pivots, range(len(pivots))))
    n = len(vec)
    for c in range(n):
        if not vec[c]:
            continue
        i = by_col.get(c)
        if i is None:
            return False
        row = h.basis[i]
        if vec[c] % row[c]:
            return False
        q = vec[c] // row[c]
        for t in range(c, n):
            vec[t] -= q * row[t]
    return True


def is_subgroup_of(h: FgSubgroup, k: FgSubgroup) -> bool:
    """True iff every canonical generator of ``h`` lies in ``k``."""
    if h.ambient != k.ambient:
        raise AmbientMismatchError(f"{h.ambient!r} vs {k.ambient!r}")
    return all(contains(k, g) for g in h.generators())


def subgroup_order(h: FgSubgroup) -> Cardinality:
    """Number of elements of ``h``."""
    amb = h.ambient
    if isinstance(amb, Rational):
        return Cardinality.finite(1) if not h.basis else INFINITE
    w = len(h.basis)
    if w == 0:
        return Cardinality.finite(1)
    m = amb.modulus
    lift = IntMatrix.from_rows(h.basis)
    scaled_identity = IntMatrix(w, w, [m if i == j else 0 for i in range(w) for j in range(w)])
    # |H| = [lift : m Z^w] since H = lift / (m Z^w)
    return linalg.lattice_index(scaled_identity, lift)


def quotient_index(k: FgSubgroup, h: FgSubgroup) -> Cardinality:
    """Index ``|K/H|`` for ``h`` a subgroup of ``k`` (checked)."""
    if k.ambient != h.ambient:
        raise AmbientMismatchError(f"{k.ambient!r} vs {h.ambient!r}")
    if not is_subgroup_of(h, k):
        raise ContainmentError("quotient_index requires h to be a subgroup of k")
    amb = k.ambient
    if isinstance(amb, TorsionSum):
        ko = subgroup_order(k).value
        ho = subgroup_order(h).value
        q, rem = divmod(ko, ho)
        if rem:
            raise InternalInvariantViolation("subgroup order does not divide group order")
        return Cardinality.finite(q)
    if not h.basis:
        return Cardinality.finite(1) if not k.basis else INFINITE
    if len(h.basis) < len(k.basis):
        return INFINITE
    d = math.lcm(h.den, k.den)
    fh, fk = d // h.den, d // k.den
    sub = IntMatrix.from_rows([[e * fh for e in row] for row in h.basis])
    sup = IntMatrix.from_rows([[e * fk for e in row] for row in k.basis])
    return linalg.lattice_index(sub, sup)
