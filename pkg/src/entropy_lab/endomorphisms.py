"""Endomorphisms of the ambient groups and their iterated powers.

Rational ambients take square rational matrices acting on column vectors.
Torsion ambients take shift stencils: a finite list of ``(offset, coeff)``
taps, acting coordinate-wise by ``e_i -> sum_j coeff_j * e_(i + offset_j)``
with any term whose target index would be negative dropped (the boundary rule
for every stencil in this package).

Powers are applied by iterating the base map; stencils are never composed
symbolically, so boundary effects at coordinate zero are always respected.
"""

from __future__ import annotations

import operator
from fractions import Fraction
from typing import Iterable

from .errors import AmbientMismatchError
from .groups import Ambient, Element, FgSubgroup, Rational, TorsionSum, subgroup
from .linalg import RatMatrix

__all__ = [
    "Endo",
    "MatrixEndo",
    "StencilEndo",
    "EndoPower",
    "apply",
    "image",
    "power",
    "right_shift",
    "left_shift",
    "identity_endo",
    "multiplication",
]


class Endo:
    """Base class for endomorphisms of an ambient group."""

    __slots__ = ("ambient",)

    def __init__(self, ambient: Ambient):
        object.__setattr__(self, "ambient", ambient)

    def __setattr__(self, name, value):
        raise AttributeError("endomorphisms are immutable")

    def apply_once(self, x: Element) -> Element:
        raise NotImplementedError


class MatrixEndo(Endo):
    """Left multiplication by a square rational matrix on Q^rank."""

    __slots__ = ("matrix",)

    def __init__(self, ambient: Rational, matrix: RatMatrix):
        if not isinstance(ambient, Rational):
            raise AmbientMismatchError("MatrixEndo requires a rational ambient")
        if matrix.rows != ambient.rank or matrix.cols != ambient.rank:
            raise ValueError(f"matrix must be {ambient.rank}x{ambient.rank}")
        super().__init__(ambient)
        object.__setattr__(self, "matrix", matrix)

    def apply_once(self, x: Element) -> Element:
        if x.ambient != self.ambient:
            raise AmbientMismatchError(f"{x.ambient!r} vs {self.ambient!r}")
        n = self.ambient.rank
        m = self.matrix
        vec = tuple(
            sum((m[i, j] * x.data[j] for j in range(n)), Fraction(0))
            for i in range(n)
        )
        return Element(self.ambient, vec)

    def __repr__(self) -> str:
        return f"MatrixEndo({self.ambient!r}, {self.matrix!r})"


class StencilEndo(Endo):
    """A finite-tap shift stencil on a torsion sum.

    Taps are ``(offset, coeff)`` pairs with distinct offsets and coefficients
    nonzero mod the ambient modulus. Terms that would land at a negative
    coordinate index are dropped.
    """

    __slots__ = ("taps",)

    def __init__(self, ambient: TorsionSum, taps: Iterable[tuple[int, int]]):
        if not isinstance(ambient, TorsionSum):
            raise AmbientMismatchError("StencilEndo requires a torsion ambient")
        m = ambient.modulus
        norm: list[tuple[int, int]] = []
        seen: set[int] = set()
        for off, coeff in taps:
            off = operator.index(off)
            coeff = operator.index(coeff) % m
            if off in seen:
                raise ValueError(f"duplicate stencil offset {off}")
            seen.add(off)
            if coeff == 0:
                raise ValueError(f"stencil coefficient at offset {off} is zero mod {m}")
            norm.append((off, coeff))
        if not norm:
            raise ValueError("a stencil needs at least one tap")
        super().__init__(ambient)
        object.__setattr__(self, "taps", tuple(sorted(norm)))

    def apply_once(self, x: Element) -> Element:
        if x.ambient != self.ambient:
            raise AmbientMismatchError(f"{x.ambient!r} vs {self.ambient!r}")
        m = self.ambient.modulus
        out: dict[int, int] = {}
        for i, r in x.data:
            for off, c in self.taps:
                j = i + off
                if j < 0:
                    continue
                t = (out.get(j, 0) + c * r) % m
                if t:
                    out[j] = t
                else:
                    out.pop(j, None)
        return Element(self.ambient, tuple(sorted(out.items())))

    def __repr__(self) -> str:
        return f"StencilEndo({self.ambient!r}, taps={self.taps!r})"


class EndoPower:
    """A positive iterated power of an endomorphism, applied by iteration."""

    __slots__ = ("base", "exponent")

    def __init__(self, base: Endo, exponent: int):
        exponent = operator.index(exponent)
        if exponent < 1:
            raise ValueError("exponent must be >= 1")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "exponent", exponent)

    def __setattr__(self, name, value):
        raise AttributeError("EndoPower is immutable")

    @property
    def ambient(self) -> Ambient:
        return self.base.ambient

    def apply(self, x: Element) -> Element:
        for _ in range(self.exponent):
            x = self.base.apply_once(x)
        return x

    def image(self, h: FgSubgroup) -> FgSubgroup:
        if h.ambient != self.ambient:
            raise AmbientMismatchError(f"{h.ambient!r} vs {self.ambient!r}")
        return subgroup(self.ambient, [self.apply(g) for g in h.generators()])

    def __repr__(self) -> str:
        return f"EndoPower({self.base!r}, {self.exponent})"


def power(f: Endo | EndoPower, k: int) -> EndoPower:
    """The k-th iterate of ``f`` (k >= 1)."""
    if isinstance(f, EndoPower):
        return EndoPower(f.base, f.exponent * operator.index(k))
    return EndoPower(f, k)


def apply(f: Endo | EndoPower, x: Element) -> Element:
    """Apply ``f`` (or its declared power) to an element."""
    return power(f, 1).apply(x) if isinstance(f, Endo) else f.apply(x)


def image(f: Endo | EndoPower, h: FgSubgroup) -> FgSubgroup:
    """Image of a finitely generated subgroup (generator-wise)."""
    return power(f, 1).image(h) if isinstance(f, Endo) else f.image(h)


def right_shift(ambient: TorsionSum) -> StencilEndo:
    """e_i -> e_(i+1)."""
    return StencilEndo(ambient, [(1, 1)])


def left_shift(ambient: TorsionSum) -> StencilEndo:
    """e_i -> e_(i-1), with e_0 discarded."""
    return StencilEndo(ambient, [(-1, 1)])


def identity_endo(ambient: Ambient) -> Endo:
    if isinstance(ambient, TorsionSum):
        return StencilEndo(ambient, [(0, 1)])
    return MatrixEndo(ambient, RatMatrix.identity(ambient.rank))


def multiplication(ambient: Rational, ratio) -> MatrixEndo:
    """Scalar multiplication by a rational number on Q^rank."""
    if isinstance(ratio, float):
        raise TypeError("use Fraction or str for exact ratios")
    q = Fraction(ratio)
    n = ambient.rank
    return MatrixEndo(ambient, RatMatrix(n, n, [q if i == j else Fraction(0) for i in range(n) for j in range(n)]))
