"""Crowded zero-dimensional metric presentations: dyadic interval and
the binary sequence space."""
from __future__ import annotations

from fractions import Fraction

from ..errors import PresentationError
from ..points import cantor_bit, cantor_first_difference, cantor_point, is_dyadic
from .base import SpacePresentation


class DyadicSpace(SpacePresentation):
    """Dyadic rationals in [0, 1) with half-open dyadic interval pieces.

    Descriptors are ("dy", k, p) meaning [p/2^k, (p+1)/2^k).  These are
    open-and-not-closed: the closure adds the right endpoint, and the
    closed variant matters for compactness probes, so closure membership
    is the one place the two-sided test appears.
    """

    kind = "dyadic"
    crowded_flag = True

    @property
    def signature(self):
        return ("dyadic",)

    def point_stream(self):
        yield Fraction(0)
        level = 1
        while True:
            for num in range(1, 1 << level, 2):
                yield Fraction(num, 1 << level)
            level += 1

    def contains_point(self, p):
        return isinstance(p, Fraction) and 0 <= p < 1 and is_dyadic(p)

    def isolated(self, p):
        return False

    def basis_stream(self):
        level = 0
        while True:
            for num in range(1 << level):
                yield ("dy", level, num)
            level += 1

    def validate_desc(self, desc):
        tag, level, num = desc
        if tag != "dy" or level < 0 or not (0 <= num < (1 << level)):
            raise PresentationError(f"bad dyadic descriptor {desc!r}")

    def describe_desc(self, desc):
        tag, level, num = desc
        return f"[{Fraction(num, 1 << level)},{Fraction(num + 1, 1 << level)})"

    def desc_member(self, desc, p):
        tag, level, num = desc
        if not isinstance(p, Fraction):
            return False
        scaled = p * (1 << level)
        return num <= scaled < num + 1

    def desc_closure_member(self, desc, p):
        tag, level, num = desc
        if not isinstance(p, Fraction):
            return False
        scaled = p * (1 << level)
        return num <= scaled <= num + 1

    def desc_stream(self, desc):
        tag, level, num = desc
        lo = Fraction(num, 1 << level)
        yield lo
        sub = level + 1
        while True:
            step = Fraction(1, 1 << sub)
            for odd in range(1, 1 << (sub - level), 2):
                yield lo + odd * step
            sub += 1

    def desc_is_singleton(self, desc):
        return False

    def desc_contained(self, child, parent):
        ctag, cl, cn = child
        ptag, pl, pn = parent
        if cl < pl:
            return False
        return (cn >> (cl - pl)) == pn

    def desc_disjoint(self, d1, d2):
        _, l1, n1 = d1
        _, l2, n2 = d2
        if l1 < l2:
            return (n2 >> (l2 - l1)) != n1
        return (n1 >> (l1 - l2)) != n2

    def desc_closed_disjoint(self, d1, d2):
        # closed hulls pick up the right endpoint, so adjacency counts
        _, l1, n1 = d1
        _, l2, n2 = d2
        a1, b1 = Fraction(n1, 1 << l1), Fraction(n1 + 1, 1 << l1)
        a2, b2 = Fraction(n2, 1 << l2), Fraction(n2 + 1, 1 << l2)
        return b1 < a2 or b2 < a1

    def chain_desc(self, p, i):
        return ("dy", i, int(p * (1 << i)))

    def chain_index_inside(self, p, desc):
        # p lies in the piece, and the aligned level-k interval around p
        # is the piece itself
        return desc[1]

    def separation_index(self, p, q):
        level = 0
        while int(p * (1 << level)) == int(q * (1 << level)):
            level += 1
        return level

    def split_desc(self, desc, k):
        tag, level, num = desc
        extra = max(1, (k - 1).bit_length()) if k > 1 else 0
        sub = level + extra
        return [("dy", sub, (num << extra) + j) for j in range(k)]

    def tail_stream(self, limit, desc, exclude=frozenset()):
        level = max(desc[1], limit.denominator.bit_length())
        while True:
            cand = limit + Fraction(1, 1 << (level + 1))
            if cand < 1 and self.desc_member(desc, cand) and cand not in exclude:
                yield cand
            level += 1

    def region_crowded(self, desc):
        return True

    def whole_desc(self):
        return ("dy", 0, 0)

    def closed_hull_member(self, desc, p):
        return self.desc_closure_member(desc, p)


class CantorSpace(SpacePresentation):
    """Infinite binary sequences that are eventually zero, cylinder basis.

    Points are the normalized finite supports (tuples ending in 1, or the
    empty tuple for the zero sequence); they form a countable dense-in-
    itself subset of the full binary product, which is all a desk scale
    presentation ever touches.  Descriptors ("cyl", bits) fix a finite
    prefix; cylinders are clopen.
    """

    kind = "cantor"
    crowded_flag = True

    @property
    def signature(self):
        return ("cantor",)

    def point_stream(self):
        yield ()
        length = 1
        while True:
            for v in range(1 << (length - 1)):
                bits = tuple((v >> i) & 1 for i in range(length - 1)) + (1,)
                yield bits
            length += 1

    def contains_point(self, p):
        return isinstance(p, tuple) and all(b in (0, 1) for b in p) and (
            not p or p[-1] == 1)

    def isolated(self, p):
        return False

    def basis_stream(self):
        length = 0
        while True:
            for v in range(1 << length):
                yield ("cyl", tuple((v >> i) & 1 for i in range(length)))
            length += 1

    def validate_desc(self, desc):
        tag, bits = desc
        if tag != "cyl" or not all(b in (0, 1) for b in bits):
            raise PresentationError(f"bad cylinder descriptor {desc!r}")

    def describe_desc(self, desc):
        return "[" + "".join(str(b) for b in desc[1]) + "*]"

    def desc_member(self, desc, p):
        bits = desc[1]
        return all(cantor_bit(p, i) == bits[i] for i in range(len(bits)))

    def desc_stream(self, desc):
        bits = desc[1]
        seen = set()
        base = cantor_point(bits)
        yield base
        seen.add(base)
        length = 1
        while True:
            for v in range(1 << (length - 1)):
                suffix = tuple((v >> i) & 1 for i in range(length - 1)) + (1,)
                p = bits + suffix
                if p not in seen:
                    seen.add(p)
                    yield p
            length += 1

    def desc_is_singleton(self, desc):
        return False

    def desc_contained(self, child, parent):
        cb, pb = child[1], parent[1]
        return len(cb) >= len(pb) and cb[:len(pb)] == pb

    def desc_disjoint(self, d1, d2):
        b1, b2 = d1[1], d2[1]
        k = min(len(b1), len(b2))
        return b1[:k] != b2[:k]

    def chain_desc(self, p, i):
        return ("cyl", tuple(cantor_bit(p, j) for j in range(i)))

    def chain_index_inside(self, p, desc):
        return len(desc[1])

    def separation_index(self, p, q):
        return cantor_first_difference(p, q) + 1

    def split_desc(self, desc, k):
        bits = desc[1]
        extra = max(1, (k - 1).bit_length()) if k > 1 else 0
        out = []
        for v in range(k):
            suffix = tuple((v >> i) & 1 for i in range(extra))
            out.append(("cyl", bits + suffix))
        return out

    def tail_stream(self, limit, desc, exclude=frozenset()):
        ell = len(desc[1])
        while True:
            flipped = 1 - cantor_bit(limit, ell)
            cand = cantor_point(tuple(cantor_bit(limit, j) for j in range(ell)) + (flipped,))
            if cand != limit and self.desc_member(desc, cand) and cand not in exclude:
                yield cand
            ell += 1

    def region_crowded(self, desc):
        return True

    def whole_desc(self):
        return ("cyl", ())

    def diameter_exponent(self, desc):
        """Pieces have metric diameter at most 2 ** -exponent."""
        return len(desc[1])


def dyadic_space() -> DyadicSpace:
    return DyadicSpace()


def cantor_space() -> CantorSpace:
    return CantorSpace()
