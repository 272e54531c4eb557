"""Spaces built from a filter or an almost disjoint family on the naturals.

Both share one shape: a countable discrete part plus distinguished limit
points whose neighborhoods are decidable subsets of the naturals.
"""
from __future__ import annotations

from ..errors import PresentationError
from ..filters import FilterPresentation, ADFamilyPresentation
from ..points import FILTER_POINT, FilterPoint, GenPoint
from .base import SpacePresentation, interleave


class XiSpace(SpacePresentation):
    """Naturals plus one limit point whose neighborhoods come from a filter.

    Descriptors:
      ("one", n)         -- the singleton {n}
      ("tl", i, minus)   -- {limit} union (stage-i base set minus `minus`)

    The local chain at the limit point removes, at stage i, every base
    element smaller than i; this keeps the chain strictly decreasing in
    the syntactic order even when the base sets repeat.
    """

    kind = "xi"
    crowded_flag = False

    def __init__(self, filt: FilterPresentation):
        self.filter = filt

    @property
    def signature(self):
        return ("xi", self.filter.signature)

    # points

    def point_stream(self):
        yield FILTER_POINT
        n = 0
        while True:
            yield n
            n += 1

    def contains_point(self, p):
        return p is FILTER_POINT or isinstance(p, FilterPoint) or (
            isinstance(p, int) and p >= 0)

    def isolated(self, p):
        return isinstance(p, int)

    # basis

    def basis_stream(self):
        def singles():
            n = 0
            while True:
                yield ("one", n)
                n += 1

        def tails():
            i = 0
            while True:
                yield ("tl", i, frozenset())
                i += 1

        return interleave(singles(), tails())

    def validate_desc(self, desc):
        if desc[0] == "one":
            tag, n = desc
            if not (isinstance(n, int) and n >= 0):
                raise PresentationError(f"bad singleton descriptor {desc!r}")
        elif desc[0] == "tl":
            tag, i, minus = desc
            if not (isinstance(i, int) and i >= 0 and isinstance(minus, frozenset)):
                raise PresentationError(f"bad tail descriptor {desc!r}")
        else:
            raise PresentationError(f"unknown xi descriptor {desc!r}")

    def describe_desc(self, desc):
        if desc[0] == "one":
            return "{%d}" % desc[1]
        tag, i, minus = desc
        body = f"<lim>+B{i}"
        if minus:
            body += "-" + "{" + ",".join(str(m) for m in sorted(minus)) + "}"
        return "(" + body + ")"

    # membership

    def desc_member(self, desc, p):
        if desc[0] == "one":
            return p == desc[1]
        tag, i, minus = desc
        if p is FILTER_POINT or isinstance(p, FilterPoint):
            return True
        return isinstance(p, int) and p not in minus and self.filter.base(i).contains(p)

    def desc_stream(self, desc):
        if desc[0] == "one":
            yield desc[1]
            return
        tag, i, minus = desc
        yield FILTER_POINT
        for m in self.filter.base(i).elements():
            if m not in minus:
                yield m

    def desc_is_singleton(self, desc):
        return desc[0] == "one"

    def desc_contained(self, child, parent):
        if parent[0] == "one":
            return child == parent
        pi, pminus = parent[1], parent[2]
        if child[0] == "one":
            n = child[1]
            return n not in pminus and self.filter.base(pi).contains(n)
        ci, cminus = child[1], child[2]
        if ci < pi:
            return False
        # every point the parent removes must be absent from the child
        return all((not self.filter.base(ci).contains(m)) or m in cminus
                   for m in pminus)

    # chain

    def desc_disjoint(self, d1, d2):
        if d1[0] == "tl" and d2[0] == "tl":
            return False  # both contain the limit point
        return super().desc_disjoint(d1, d2)

    def singleton_desc(self, p):
        if not isinstance(p, int):
            raise PresentationError("only naturals are isolated here")
        return ("one", p)

    def chain_desc(self, p, i):
        if isinstance(p, int):
            return ("one", p)
        base = self.filter.base(i)
        minus = frozenset(m for m in range(i) if base.contains(m))
        return ("tl", i, minus)

    def chain_index_inside(self, p, desc):
        if desc[0] == "one":
            return None
        tag, j, minus = desc
        ell = j
        if minus:
            ell = max(ell, max(minus) + 1)
        return ell

    def separation_index(self, p, q):
        # chain stage q+1 removes every base element below q+1
        if isinstance(q, int):
            return q + 1
        raise PresentationError("cannot separate the limit point from itself")

    def remove_points(self, desc, pts):
        pts = frozenset(pts)
        if any(not isinstance(x, int) for x in pts):
            return None
        if desc[0] == "one":
            return None if desc[1] in pts else desc
        tag, i, minus = desc
        return ("tl", i, minus | pts)

    def tail_stream(self, limit, desc, exclude=frozenset()):
        if not (limit is FILTER_POINT or isinstance(limit, FilterPoint)):
            raise PresentationError("tail streams only converge to the limit point")
        tag, i, minus = desc
        if self.filter.has_countable_base:
            stage = i
            seen = set()
            while True:
                base = self.filter.base(stage)
                for m in base.elements():
                    if m in minus or m in exclude or m in seen:
                        continue
                    seen.add(m)
                    yield m
                    break
                stage += 1
        else:
            # no countable base: walk a single generator of the supporting
            # family, which converges to the limit in this topology only
            # along that generator's leg
            raise PresentationError(
                "no canonical converging tail without a countable base")

    def whole_desc(self):
        # stage 0 of the standard chains covers every natural
        if self.filter.kind in ("frechet", "partition", "fan"):
            return ("tl", 0, frozenset())
        return None


class PsiSpace(SpacePresentation):
    """Isbell style space: naturals plus one point per family generator.

    Descriptors:
      ("one", n)             -- singleton natural
      ("gt", k, minus)       -- {generator point k} union (A_k minus `minus`)
    """

    kind = "psi"
    crowded_flag = False

    def __init__(self, family: ADFamilyPresentation):
        if family.num_generators is None:
            raise PresentationError(
                "psi presentations need a concretely enumerated family; "
                "an infinite family works through its finite stages")
        self.family = family

    @property
    def signature(self):
        return ("psi", self.family.signature)

    def point_stream(self):
        for k in range(self.family.num_generators):
            yield GenPoint(k)
        n = 0
        while True:
            yield n
            n += 1

    def contains_point(self, p):
        if isinstance(p, GenPoint):
            return 0 <= p.index < self.family.num_generators
        return isinstance(p, int) and p >= 0

    def isolated(self, p):
        return isinstance(p, int)

    def basis_stream(self):
        def singles():
            n = 0
            while True:
                yield ("one", n)
                n += 1

        def gens():
            for k in range(self.family.num_generators):
                yield ("gt", k, frozenset())

        return interleave(singles(), gens())

    def validate_desc(self, desc):
        if desc[0] == "one":
            tag, n = desc
            if not (isinstance(n, int) and n >= 0):
                raise PresentationError(f"bad singleton descriptor {desc!r}")
        elif desc[0] == "gt":
            tag, k, minus = desc
            if not (0 <= k < self.family.num_generators
                    and isinstance(minus, frozenset)):
                raise PresentationError(f"bad generator descriptor {desc!r}")
        else:
            raise PresentationError(f"unknown psi descriptor {desc!r}")

    def describe_desc(self, desc):
        if desc[0] == "one":
            return "{%d}" % desc[1]
        tag, k, minus = desc
        body = f"<g{k}>+A{k}"
        if minus:
            body += "-" + "{" + ",".join(str(m) for m in sorted(minus)) + "}"
        return "(" + body + ")"

    def desc_member(self, desc, p):
        if desc[0] == "one":
            return p == desc[1]
        tag, k, minus = desc
        if isinstance(p, GenPoint):
            return p.index == k
        return (isinstance(p, int) and p not in minus
                and self.family.generator(k).contains(p))

    def desc_stream(self, desc):
        if desc[0] == "one":
            yield desc[1]
            return
        tag, k, minus = desc
        yield GenPoint(k)
        for m in self.family.generator(k).elements():
            if m not in minus:
                yield m

    def desc_is_singleton(self, desc):
        return desc[0] == "one"

    def desc_contained(self, child, parent):
        if parent[0] == "one":
            return child == parent
        pk, pminus = parent[1], parent[2]
        if child[0] == "one":
            n = child[1]
            return n not in pminus and self.family.generator(pk).contains(n)
        ck, cminus = child[1], child[2]
        if ck != pk:
            return False
        gen = self.family.generator(pk)
        return all((not gen.contains(m)) or m in cminus for m in pminus)

    def desc_disjoint(self, d1, d2):
        if d1[0] == "gt" and d2[0] == "gt":
            k1, m1 = d1[1], d1[2]
            k2, m2 = d2[1], d2[2]
            if k1 == k2:
                return False
            # almost disjoint generators: the certified finite overlap
            # must be removed from one side or the other
            return all(x in m1 or x in m2
                       for x in self.family.overlap(k1, k2))
        return super().desc_disjoint(d1, d2)

    def singleton_desc(self, p):
        if not isinstance(p, int):
            raise PresentationError("only naturals are isolated here")
        return ("one", p)

    def chain_desc(self, p, i):
        if isinstance(p, int):
            return ("one", p)
        k = p.index
        head = frozenset(self.family.generator(k).first_elements(i))
        return ("gt", k, head)

    def chain_index_inside(self, p, desc):
        if desc[0] == "one" or not isinstance(p, GenPoint):
            return None
        tag, k, minus = desc
        if p.index != k:
            return None
        gen = self.family.generator(k)
        ell = 0
        for m in minus:
            pos = gen.position_of(m)
            if pos is not None:
                ell = max(ell, pos + 1)
        return ell

    def separation_index(self, p, q):
        if isinstance(q, GenPoint):
            if q.index == p.index:
                raise PresentationError("cannot separate a point from itself")
            return 0
        pos = self.family.generator(p.index).position_of(q)
        return 0 if pos is None else pos + 1

    def remove_points(self, desc, pts):
        pts = frozenset(pts)
        if any(not isinstance(x, int) for x in pts):
            return None
        if desc[0] == "one":
            return None if desc[1] in pts else desc
        tag, k, minus = desc
        return ("gt", k, minus | pts)

    def tail_stream(self, limit, desc, exclude=frozenset()):
        if not isinstance(limit, GenPoint):
            raise PresentationError("tail streams only converge to generator points")
        tag, k, minus = desc
        if limit.index != k:
            raise PresentationError("limit point lies outside the piece")
        for m in self.family.generator(k).elements():
            if m not in minus and m not in exclude:
                yield m


def xi_space(filt: FilterPresentation) -> XiSpace:
    return XiSpace(filt)


def psi_space(family: ADFamilyPresentation) -> PsiSpace:
    return PsiSpace(family)
