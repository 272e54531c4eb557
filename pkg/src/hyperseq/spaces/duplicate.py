"""Doubling construction: each point of a base space acquires an
isolated twin, and base neighborhoods lift minus finitely many twins."""
from __future__ import annotations

from ..errors import PresentationError
from ..points import DupPoint
from .base import SpacePresentation, interleave


class DuplicateSpace(SpacePresentation):
    """Points (x, 0) keep the base topology, points (x, 1) are isolated.

    Descriptors:
      ("d1", x)             -- singleton {(x, 1)}
      ("hat", U, minus)     -- (U x {0,1}) minus {(m, 1) for m in minus}

    where U is a base-space descriptor and minus a finite frozenset of
    base points.  With a crowded base this space has a dense set of
    isolated points and every (x, 0) is a limit of twins.
    """

    kind = "duplicate"
    crowded_flag = False

    def __init__(self, base: SpacePresentation):
        if not base.crowded_flag:
            raise PresentationError("the doubling construction expects a crowded base")
        self.base = base

    @property
    def signature(self):
        return ("duplicate", self.base.signature)

    def point_stream(self):
        for x in self.base.point_stream():
            yield DupPoint(x, 0)
            yield DupPoint(x, 1)

    def contains_point(self, p):
        return isinstance(p, DupPoint) and self.base.contains_point(p.base)

    def isolated(self, p):
        return p.level == 1

    def basis_stream(self):
        def hats():
            for d in self.base.basis_stream():
                yield ("hat", d, frozenset())

        def singles():
            for x in self.base.point_stream():
                yield ("d1", x)

        return interleave(hats(), singles())

    def validate_desc(self, desc):
        if desc[0] == "d1":
            tag, x = desc
            if not self.base.contains_point(x):
                raise PresentationError(f"bad twin singleton {desc!r}")
        elif desc[0] == "hat":
            tag, inner, minus = desc
            self.base.validate_desc(inner)
            if not isinstance(minus, frozenset):
                raise PresentationError(f"bad lifted descriptor {desc!r}")
        else:
            raise PresentationError(f"unknown duplicate descriptor {desc!r}")

    def describe_desc(self, desc):
        if desc[0] == "d1":
            return f"twin({desc[1]!r})"
        tag, inner, minus = desc
        body = f"lift{self.base.describe_desc(inner)}"
        if minus:
            body += f"-{len(minus)}tw"
        return body

    def desc_member(self, desc, p):
        if not isinstance(p, DupPoint):
            return False
        if desc[0] == "d1":
            return p.level == 1 and p.base == desc[1]
        tag, inner, minus = desc
        if not self.base.desc_member(inner, p.base):
            return False
        return p.level == 0 or p.base not in minus

    def desc_closure_member(self, desc, p):
        if not isinstance(p, DupPoint):
            return False
        if desc[0] == "d1":
            return p.level == 1 and p.base == desc[1]
        tag, inner, minus = desc
        if p.level == 1:
            return self.desc_member(desc, p)
        return self.base.desc_closure_member(inner, p.base)

    def desc_stream(self, desc):
        if desc[0] == "d1":
            yield DupPoint(desc[1], 1)
            return
        tag, inner, minus = desc
        for x in self.base.desc_stream(inner):
            yield DupPoint(x, 0)
            if x not in minus:
                yield DupPoint(x, 1)

    def desc_is_singleton(self, desc):
        return desc[0] == "d1"

    def desc_contained(self, child, parent):
        if parent[0] == "d1":
            return child == parent
        pinner, pminus = parent[1], parent[2]
        if child[0] == "d1":
            x = child[1]
            return x not in pminus and self.base.desc_member(pinner, x)
        cinner, cminus = child[1], child[2]
        if not self.base.desc_contained(cinner, pinner):
            return False
        return all(y in cminus or not self.base.desc_member(cinner, y)
                   for y in pminus)

    def desc_disjoint(self, d1, d2):
        if d1[0] == "hat" and d2[0] == "hat":
            # level-0 pairs survive any finite twin removal
            return self.base.desc_disjoint(d1[1], d2[1])
        return super().desc_disjoint(d1, d2)

    def desc_closed_disjoint(self, d1, d2):
        if d1[0] == "hat" and d2[0] == "hat":
            return self.base.desc_closed_disjoint(d1[1], d2[1])
        return self.desc_disjoint(d1, d2)

    def singleton_desc(self, p):
        if p.level != 1:
            raise PresentationError("only twins are isolated")
        return ("d1", p.base)

    def chain_desc(self, p, i):
        if p.level == 1:
            return ("d1", p.base)
        return ("hat", self.base.chain_desc(p.base, i), frozenset((p.base,)))

    def chain_index_inside(self, p, desc):
        if desc[0] == "d1" or p.level != 0:
            return None
        tag, inner, minus = desc
        ell = self.base.chain_index_inside(p.base, inner)
        if ell is None:
            return None
        for y in minus:
            if y != p.base:
                ell = max(ell, self.base.separation_index(p.base, y))
        return ell

    def separation_index(self, p, q):
        if q.base == p.base:
            if q.level == 1:
                return 0  # the chain always removes the twin over its center
            raise PresentationError("cannot separate a point from itself")
        return self.base.separation_index(p.base, q.base)

    def remove_points(self, desc, pts):
        if any(not (isinstance(x, DupPoint) and x.level == 1) for x in pts):
            return None
        bases = frozenset(x.base for x in pts)
        if desc[0] == "d1":
            return None if desc[1] in bases else desc
        tag, inner, minus = desc
        return ("hat", inner, minus | bases)

    def tail_stream(self, limit, desc, exclude=frozenset()):
        if not (isinstance(limit, DupPoint) and limit.level == 0):
            raise PresentationError("tail streams converge to level-0 points")
        tag, inner, minus = desc
        skip = minus | {q.base for q in exclude
                        if isinstance(q, DupPoint) and q.level == 1}
        skip = skip | {limit.base}
        for y in self.base.tail_stream(limit.base, inner, skip):
            yield DupPoint(y, 1)


def duplicate_space(base: SpacePresentation) -> DuplicateSpace:
    return DuplicateSpace(base)
