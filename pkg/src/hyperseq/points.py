"""Point codes.

Every point of every presented space is a small immutable value with
structural equality and a total, decidable equality test.  Exact
arithmetic only: dyadic rationals are `fractions.Fraction`, binary
streams are finite bit tuples denoting the stream padded with zeros.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class FilterPoint:
    """The single non-isolated point of a filter space."""

    def __repr__(self):
        return "<lim>"


FILTER_POINT = FilterPoint()


@dataclass(frozen=True)
class GenPoint:
    """Extra point attached to one generator of an almost-disjoint family."""

    index: int

    def __repr__(self):
        return f"<gen {self.index}>"


@dataclass(frozen=True)
class DupPoint:
    """Point of a two-level duplicate: level 0 is the copied space, level 1 the discrete twin."""

    base: object
    level: int

    def __post_init__(self):
        if self.level not in (0, 1):
            raise ValueError("level must be 0 or 1")

    def __repr__(self):
        return f"({self.base!r},{self.level})"


@dataclass(frozen=True)
class SumPoint:
    side: int
    point: object

    def __repr__(self):
        return f"<{self.side}:{self.point!r}>"


def cantor_point(bits) -> tuple:
    """Normalize a finite 0/1 sequence to the canonical code of bits + 0^omega."""
    bits = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in bits):
        raise ValueError("bits must be 0/1")
    end = len(bits)
    while end > 0 and bits[end - 1] == 0:
        end -= 1
    return bits[:end]


def cantor_bit(point: tuple, i: int) -> int:
    return point[i] if i < len(point) else 0


def cantor_first_difference(x: tuple, y: tuple):
    """Index of the first differing bit of the padded streams, or None if equal."""
    for i in range(max(len(x), len(y))):
        if cantor_bit(x, i) != cantor_bit(y, i):
            return i
    return None


@dataclass(frozen=True)
class SigmaPoint:
    """Finitely-supported point of a product with all-zero base point.

    coords holds (index, bits) pairs for exactly the coordinates whose
    value differs from the base coordinate; bits is a normalized cantor
    point.  The empty support is the base point itself.
    """

    coords: frozenset

    def __post_init__(self):
        for i, bits in self.coords:
            if not isinstance(i, int) or i < 0:
                raise ValueError("coordinate indices are naturals")
            if bits != cantor_point(bits) or bits == ():
                raise ValueError("coordinate values are normalized nonzero bit tuples")
        if len({i for i, _ in self.coords}) != len(self.coords):
            raise ValueError("duplicate coordinate index")

    def coordinate(self, i: int) -> tuple:
        for j, bits in self.coords:
            if j == i:
                return bits
        return ()

    @property
    def support(self) -> frozenset:
        return frozenset(i for i, _ in self.coords)

    def __repr__(self):
        inside = ",".join(
            f"{i}:{''.join(map(str, bits))}" for i, bits in sorted(self.coords)
        )
        return f"<sigma {inside}>"


def sigma_point(mapping) -> SigmaPoint:
    """Build a SigmaPoint from {index: bits}, dropping base-valued coordinates."""
    coords = []
    for i, bits in dict(mapping).items():
        bits = cantor_point(bits)
        if bits != ():
            coords.append((i, bits))
    return SigmaPoint(frozenset(coords))


SIGMA_BASE = SigmaPoint(frozenset())


def dyadic(num: int, level: int) -> Fraction:
    """num / 2^level as an exact fraction."""
    if level < 0:
        raise ValueError("level must be >= 0")
    return Fraction(num, 2**level)


def is_dyadic(q: Fraction) -> bool:
    return isinstance(q, Fraction) and (q.denominator & (q.denominator - 1)) == 0
