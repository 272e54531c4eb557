"""Disjoint sums of presented spaces."""
from __future__ import annotations

from ..errors import PresentationError
from ..points import SumPoint
from .base import SpacePresentation, interleave


class SumSpace(SpacePresentation):
    """Finitely many presented spaces glued side by side.

    Points are tagged (side, inner point); descriptors ("sm", side, d)
    wrap one part's descriptor.  Everything delegates.
    """

    kind = "sum"

    def __init__(self, parts):
        parts = tuple(parts)
        if not parts:
            raise PresentationError("a sum needs at least one part")
        self.parts = parts
        self.crowded_flag = all(s.crowded_flag for s in parts)

    @property
    def signature(self):
        return ("sum",) + tuple(s.signature for s in self.parts)

    def part(self, side):
        if not (0 <= side < len(self.parts)):
            raise PresentationError(f"no part {side}")
        return self.parts[side]

    def point_stream(self):
        streams = []
        for side, sp in enumerate(self.parts):
            streams.append(self._tag_points(side, sp))
        return interleave(*streams)

    @staticmethod
    def _tag_points(side, sp):
        for p in sp.point_stream():
            yield SumPoint(side, p)

    def contains_point(self, p):
        return (isinstance(p, SumPoint) and 0 <= p.side < len(self.parts)
                and self.parts[p.side].contains_point(p.point))

    def isolated(self, p):
        return self.parts[p.side].isolated(p.point)

    def basis_stream(self):
        streams = []
        for side, sp in enumerate(self.parts):
            streams.append(self._tag_descs(side, sp))
        return interleave(*streams)

    @staticmethod
    def _tag_descs(side, sp):
        for d in sp.basis_stream():
            yield ("sm", side, d)

    def validate_desc(self, desc):
        tag, side, inner = desc
        if tag != "sm":
            raise PresentationError(f"unknown sum descriptor {desc!r}")
        self.part(side).validate_desc(inner)

    def describe_desc(self, desc):
        tag, side, inner = desc
        return f"part{side}:{self.parts[side].describe_desc(inner)}"

    def desc_member(self, desc, p):
        tag, side, inner = desc
        return (isinstance(p, SumPoint) and p.side == side
                and self.parts[side].desc_member(inner, p.point))

    def desc_closure_member(self, desc, p):
        tag, side, inner = desc
        return (isinstance(p, SumPoint) and p.side == side
                and self.parts[side].desc_closure_member(inner, p.point))

    def desc_stream(self, desc):
        tag, side, inner = desc
        for q in self.parts[side].desc_stream(inner):
            yield SumPoint(side, q)

    def desc_is_singleton(self, desc):
        tag, side, inner = desc
        return self.parts[side].desc_is_singleton(inner)

    def desc_contained(self, child, parent):
        if child[1] != parent[1]:
            return False
        return self.parts[child[1]].desc_contained(child[2], parent[2])

    def desc_disjoint(self, d1, d2):
        if d1[1] != d2[1]:
            return True
        return self.parts[d1[1]].desc_disjoint(d1[2], d2[2])

    def desc_closed_disjoint(self, d1, d2):
        if d1[1] != d2[1]:
            return True
        return self.parts[d1[1]].desc_closed_disjoint(d1[2], d2[2])

    def singleton_desc(self, p):
        return ("sm", p.side, self.parts[p.side].singleton_desc(p.point))

    def chain_desc(self, p, i):
        return ("sm", p.side, self.parts[p.side].chain_desc(p.point, i))

    def chain_index_inside(self, p, desc):
        tag, side, inner = desc
        if p.side != side:
            return None
        return self.parts[side].chain_index_inside(p.point, inner)

    def separation_index(self, p, q):
        if q.side != p.side:
            return 0
        return self.parts[p.side].separation_index(p.point, q.point)

    def remove_points(self, desc, pts):
        tag, side, inner = desc
        if any(not (isinstance(x, SumPoint) and x.side == side) for x in pts):
            return None
        out = self.parts[side].remove_points(inner, [x.point for x in pts])
        return None if out is None else ("sm", side, out)

    def split_desc(self, desc, k):
        tag, side, inner = desc
        out = self.parts[side].split_desc(inner, k)
        return None if out is None else [("sm", side, d) for d in out]

    def tail_stream(self, limit, desc, exclude=frozenset()):
        tag, side, inner = desc
        if limit.side != side:
            raise PresentationError("limit point lies outside the piece")
        sub_exclude = frozenset(x.point for x in exclude
                                if isinstance(x, SumPoint) and x.side == side)
        for q in self.parts[side].tail_stream(limit.point, inner, sub_exclude):
            yield SumPoint(side, q)

    def region_crowded(self, desc):
        tag, side, inner = desc
        return self.parts[side].region_crowded(inner)


def sum_space(*parts) -> SumSpace:
    return SumSpace(parts)
