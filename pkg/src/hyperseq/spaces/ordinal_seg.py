"""Segments of ordinals below omega^omega with the order topology."""
from __future__ import annotations

from ..errors import PresentationError
from ..ordinals import Ordinal, from_int, iter_below
from .base import SpacePresentation


class OrdinalSegment(SpacePresentation):
    """The ordinals below a fixed bound, with interval descriptors.

    Descriptors are ("iv", lo, hi) meaning the order interval (lo, hi],
    with lo None standing for "from the bottom", so ("iv", None, hi) is
    [0, hi].  Only hi below the bound is allowed, which keeps every
    descriptor a genuinely open set (and also closed: these intervals
    are clopen in a successor-bounded segment).
    """

    kind = "ordinal"
    crowded_flag = False

    def __init__(self, bound: Ordinal):
        if bound.is_zero:
            raise PresentationError("the segment below zero is empty")
        if not bound.has_finite_exponents():
            raise PresentationError("point enumeration needs a bound below w^w")
        self.bound = bound

    @property
    def signature(self):
        return ("ordinal", str(self.bound))

    def point_stream(self):
        return iter_below(self.bound)

    def contains_point(self, p):
        return isinstance(p, Ordinal) and p < self.bound

    def isolated(self, p):
        return not p.is_limit

    def basis_stream(self):
        # singletons of every point first at small depth, then proper intervals
        pts = []
        for p in iter_below(self.bound):
            pts.append(p)
            yield self.singleton_desc(p)
            if p.is_limit:
                for q in pts:
                    if q < p:
                        yield ("iv", q, p)

    def validate_desc(self, desc):
        tag, lo, hi = desc
        if tag != "iv" or not isinstance(hi, Ordinal) or not (hi < self.bound):
            raise PresentationError(f"bad interval descriptor {desc!r}")
        if lo is not None and not (isinstance(lo, Ordinal) and lo < hi):
            raise PresentationError(f"empty interval descriptor {desc!r}")

    def describe_desc(self, desc):
        tag, lo, hi = desc
        left = "[0" if lo is None else f"({lo}"
        return f"{left},{hi}]"

    def desc_member(self, desc, p):
        tag, lo, hi = desc
        if not isinstance(p, Ordinal):
            return False
        return (lo is None or lo < p) and p <= hi

    def desc_stream(self, desc):
        tag, lo, hi = desc
        if hi.has_finite_exponents():
            for p in iter_below(hi.succ()):
                if lo is None or lo < p:
                    yield p
        else:  # pragma: no cover - bounds beyond w^w are rejected upstream
            return

    def desc_is_singleton(self, desc):
        tag, lo, hi = desc
        if lo is None:
            return hi.is_zero
        return hi.is_successor and hi.pred() == lo

    def desc_contained(self, child, parent):
        ctag, clo, chi = child
        ptag, plo, phi = parent
        lo_ok = plo is None or (clo is not None and plo <= clo)
        return lo_ok and chi <= phi

    def desc_disjoint(self, d1, d2):
        _, lo1, hi1 = d1
        _, lo2, hi2 = d2
        if lo2 is not None and hi1 <= lo2:
            return True
        if lo1 is not None and hi2 <= lo1:
            return True
        return False

    def singleton_desc(self, p):
        if p.is_zero:
            return ("iv", None, p)
        if p.is_successor:
            return ("iv", p.pred(), p)
        raise PresentationError("limit ordinals are not isolated")

    def chain_desc(self, p, i):
        if not p.is_limit:
            return self.singleton_desc(p)
        return ("iv", p.fundamental(i), p)

    def chain_index_inside(self, p, desc):
        tag, lo, hi = desc
        if not (p.is_limit and self.desc_member(desc, p)):
            return None
        if lo is None:
            return 0
        for i in range(100000):
            if lo <= p.fundamental(i):
                return i
        return None

    def separation_index(self, p, q):
        if q == p:
            raise PresentationError("cannot separate a point from itself")
        if p < q:
            return 0
        for i in range(100000):
            if q <= p.fundamental(i):
                return i
        raise PresentationError(f"no separation index for {p} vs {q}")

    def tail_stream(self, limit, desc, exclude=frozenset()):
        if not limit.is_limit:
            raise PresentationError("tail streams need a limit ordinal")
        tag, lo, hi = desc
        k = 0
        last = None
        while True:
            step = limit.fundamental(k).succ()
            k += 1
            if step == last:
                continue
            last = step
            if step >= limit:
                continue
            if self.desc_member(desc, step) and step not in exclude:
                yield step

    def whole_desc(self):
        if self.bound.is_successor:
            return ("iv", None, self.bound.pred())
        return None


def ordinal_segment(bound) -> OrdinalSegment:
    if isinstance(bound, int):
        bound = from_int(bound)
    return OrdinalSegment(bound)
