"""Small-support product of countably many copies of the binary sequence
space, pointed at the all-zero element."""
from __future__ import annotations

from itertools import combinations, count, product

from ..errors import PresentationError
from ..points import SIGMA_BASE, SigmaPoint, cantor_bit, cantor_point, sigma_point
from .base import SpacePresentation


def _nonzero_values(max_len):
    """Normalized nonzero coordinate values with length at most max_len."""
    out = []
    for length in range(1, max_len + 1):
        for v in range(1 << (length - 1)):
            out.append(tuple((v >> i) & 1 for i in range(length - 1)) + (1,))
    return out


class SigmaSpace(SpacePresentation):
    """Points with finite support over binary-sequence coordinates.

    Descriptors ("sg", constraints) fix a finite prefix on finitely many
    coordinates; constraints is a frozenset of (index, bits) pairs with
    at most one entry per index and nonempty bits.  Every descriptor is
    clopen and crowded: infinitely many coordinates always stay free.
    """

    kind = "sigma"
    crowded_flag = True

    @property
    def signature(self):
        return ("sigma",)

    def point_stream(self):
        yield SIGMA_BASE
        seen = {SIGMA_BASE}
        for t in count(1):
            values = _nonzero_values(t)
            indices = list(range(t))
            for size in range(1, t + 1):
                for supp in _sorted_subsets(indices, size):
                    for assignment in product(values, repeat=size):
                        p = SigmaPoint(frozenset(zip(supp, assignment)))
                        if p not in seen:
                            seen.add(p)
                            yield p

    def contains_point(self, p):
        return isinstance(p, SigmaPoint)

    def isolated(self, p):
        return False

    def basis_stream(self):
        yield ("sg", frozenset())
        seen = {frozenset()}
        for t in count(1):
            strings = [tuple((v >> i) & 1 for i in range(length))
                       for length in range(1, t + 1)
                       for v in range(1 << length)]
            indices = list(range(t))
            for size in range(1, t + 1):
                for supp in _sorted_subsets(indices, size):
                    for assignment in product(strings, repeat=size):
                        c = frozenset(zip(supp, assignment))
                        if c not in seen:
                            seen.add(c)
                            yield ("sg", c)

    def validate_desc(self, desc):
        tag, constraints = desc
        if tag != "sg" or not isinstance(constraints, frozenset):
            raise PresentationError(f"bad product descriptor {desc!r}")
        idxs = [i for i, s in constraints]
        if len(idxs) != len(set(idxs)):
            raise PresentationError("one prefix constraint per coordinate")
        for i, s in constraints:
            if i < 0 or len(s) == 0 or not all(b in (0, 1) for b in s):
                raise PresentationError(f"bad constraint {(i, s)!r}")

    def describe_desc(self, desc):
        parts = [f"{i}:{''.join(str(b) for b in s)}"
                 for i, s in sorted(desc[1])]
        return "prod[" + ",".join(parts) + "]" if parts else "prod[all]"

    def desc_member(self, desc, p):
        if not isinstance(p, SigmaPoint):
            return False
        for i, s in desc[1]:
            val = p.coordinate(i)
            if any(cantor_bit(val, j) != s[j] for j in range(len(s))):
                return False
        return True

    def desc_stream(self, desc):
        constraints = sorted(desc[1])
        cidx = [i for i, s in constraints]
        base_coords = {i: cantor_point(s) for i, s in constraints}
        z0 = sigma_point(base_coords)
        yield z0
        seen = {z0}
        for t in count(1):
            suffixes = [()] + _nonzero_values(t)
            free = []
            j = 0
            while len(free) < t:
                if j not in cidx:
                    free.append(j)
                j += 1
            free_values = [None] + _nonzero_values(t)
            for cassign in product(suffixes, repeat=len(constraints)):
                coords = {}
                for (i, s), suf in zip(constraints, cassign):
                    coords[i] = cantor_point(tuple(s) + suf)
                for fassign in product(free_values, repeat=len(free)):
                    full = dict(coords)
                    for i, val in zip(free, fassign):
                        if val is not None:
                            full[i] = val
                    p = sigma_point(full)
                    if p not in seen:
                        seen.add(p)
                        yield p

    def desc_is_singleton(self, desc):
        return False

    def desc_contained(self, child, parent):
        cmap = dict(child[1])
        for i, s in parent[1]:
            cs = cmap.get(i)
            if cs is None or len(cs) < len(s) or tuple(cs[:len(s)]) != tuple(s):
                return False
        return True

    def desc_disjoint(self, d1, d2):
        m1 = dict(d1[1])
        for i, s2 in d2[1]:
            s1 = m1.get(i)
            if s1 is None:
                continue
            k = min(len(s1), len(s2))
            if tuple(s1[:k]) != tuple(s2[:k]):
                return True
        return False

    def chain_desc(self, p, i):
        if i == 0:
            return ("sg", frozenset())
        cons = frozenset(
            (j, tuple(cantor_bit(p.coordinate(j), b) for b in range(i)))
            for j in range(i))
        return ("sg", cons)

    def chain_index_inside(self, p, desc):
        ell = 0
        for i, s in desc[1]:
            ell = max(ell, i + 1, len(s))
        return ell

    def separation_index(self, p, q):
        if p == q:
            raise PresentationError("cannot separate a point from itself")
        for i in sorted(p.support | q.support):
            a, b = p.coordinate(i), q.coordinate(i)
            if a != b:
                d = 0
                while cantor_bit(a, d) == cantor_bit(b, d):
                    d += 1
                return max(i + 1, d + 1)
        raise PresentationError("points share every coordinate")

    def split_desc(self, desc, k):
        if k <= 1:
            return [desc]
        used = {i for i, s in desc[1]}
        fresh = 0
        while fresh in used:
            fresh += 1
        extra = max(1, (k - 1).bit_length())
        out = []
        for v in range(k):
            pattern = tuple((v >> i) & 1 for i in range(extra))
            out.append(("sg", desc[1] | {(fresh, pattern)}))
        return out

    def tail_stream(self, limit, desc, exclude=frozenset()):
        used = {i for i, s in desc[1]} | limit.support
        start = (max(used) + 1) if used else 0
        k = 0
        while True:
            idx = start + k
            coords = {i: limit.coordinate(i) for i in limit.support}
            coords[idx] = (0,) * k + (1,)
            cand = sigma_point(coords)
            if cand not in exclude:
                yield cand
            k += 1

    def region_crowded(self, desc):
        return True

    def whole_desc(self):
        return ("sg", frozenset())


def _sorted_subsets(items, size):
    return combinations(items, size)


def sigma_space() -> SigmaSpace:
    return SigmaSpace()
