"""Framework for computable space presentations.

A presentation is immutable and pure: it enumerates its points and a
countable basis, decides isolation and membership, and provides the
structural operations every other layer leans on — syntactic piece
containment, the decreasing local chain at each point, and exact
"which chain element fits inside this piece" indices.  Descriptors are
small hashable tuples whose first entry tags the shape; BasicOpen is a
thin handle pairing a descriptor with its space.
"""
from __future__ import annotations

from itertools import islice

from ..errors import PresentationError, UndecidedAtDepth


class BasicOpen:
    """Handle for one basis element of a presented space."""

    __slots__ = ("space", "desc")

    def __init__(self, space: "SpacePresentation", desc):
        self.space = space
        self.desc = desc

    @property
    def id(self):
        return self.desc

    def member(self, p) -> bool:
        return self.space.desc_member(self.desc, p)

    def closure_member(self, p) -> bool:
        return self.space.desc_closure_member(self.desc, p)

    def enumerate(self, depth: int) -> list:
        return self.space.desc_enumerate(self.desc, depth)

    @property
    def is_singleton(self) -> bool:
        return self.space.desc_is_singleton(self.desc)

    def __eq__(self, other):
        return (isinstance(other, BasicOpen)
                and self.space.signature == other.space.signature
                and self.desc == other.desc)

    def __hash__(self):
        return hash((self.space.signature, self.desc))

    def __repr__(self):
        return f"Open{self.space.describe_desc(self.desc)}"


class SpacePresentation:
    """Base class; per-kind subclasses implement the descriptor algebra."""

    kind: str = "?"
    crowded_flag: bool = False

    # -- identity ---------------------------------------------------------

    @property
    def signature(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, SpacePresentation) and self.signature == other.signature

    def __hash__(self):
        return hash(self.signature)

    def __repr__(self):
        return f"Space{self.signature!r}"

    # -- points -----------------------------------------------------------

    def iter_points(self, depth: int) -> list:
        """Deterministic finite prefix of the point enumeration; monotone in depth."""
        return list(islice(self.point_stream(), depth))

    def point_stream(self):
        raise NotImplementedError

    def contains_point(self, p) -> bool:
        raise NotImplementedError

    def isolated(self, p) -> bool:
        raise NotImplementedError

    # -- basis ------------------------------------------------------------

    def iter_basis(self, depth: int) -> list:
        return [self.open(d) for d in islice(self.basis_stream(), depth)]

    def basis_stream(self):
        raise NotImplementedError

    def open(self, desc) -> BasicOpen:
        self.validate_desc(desc)
        return BasicOpen(self, desc)

    def validate_desc(self, desc) -> None:
        raise NotImplementedError

    def describe_desc(self, desc) -> str:
        return repr(desc)

    # -- descriptor algebra ----------------------------------------------

    def desc_member(self, desc, p) -> bool:
        raise NotImplementedError

    def desc_closure_member(self, desc, p) -> bool:
        # clopen basis elements are the default; interval-like kinds override
        return self.desc_member(desc, p)

    def desc_enumerate(self, desc, depth: int) -> list:
        return list(islice(self.desc_stream(desc), depth))

    def desc_stream(self, desc):
        raise NotImplementedError

    def desc_is_singleton(self, desc) -> bool:
        raise NotImplementedError

    def desc_contained(self, child, parent) -> bool:
        """Syntactic containment certificate: sufficient, never necessary."""
        raise NotImplementedError

    def desc_nonempty(self, desc) -> bool:
        return bool(self.desc_enumerate(desc, 1))

    def desc_disjoint(self, d1, d2) -> bool:
        """Certified disjointness; singleton pairs always decide."""
        if self.desc_is_singleton(d1):
            pts = self.desc_enumerate(d1, 1)
            return not pts or not self.desc_member(d2, pts[0])
        if self.desc_is_singleton(d2):
            pts = self.desc_enumerate(d2, 1)
            return not pts or not self.desc_member(d1, pts[0])
        raise PresentationError(
            f"{self.kind}: no disjointness certificate for this pair")

    def desc_closed_disjoint(self, d1, d2) -> bool:
        """Disjointness of the closed hulls; equals desc_disjoint for
        clopen kinds, interval kinds must be stricter."""
        return self.desc_disjoint(d1, d2)

    # -- the local chain ---------------------------------------------------

    def singleton_desc(self, p):
        raise PresentationError(f"{self.kind} has no singleton descriptor for {p!r}")

    def chain_desc(self, p, i: int):
        """Descriptor of the i-th element of the decreasing local chain at p."""
        raise NotImplementedError

    def local_base(self, p, i: int) -> BasicOpen:
        if self.isolated(p):
            return self.open(self.singleton_desc(p))
        return self.open(self.chain_desc(p, i))

    def chain_index_inside(self, p, desc):
        """Some i with chain(p, i) contained in desc, or None if not found.

        p must be a non-isolated member of desc.  Subclasses compute the
        index structurally; this fallback scans.
        """
        for i in range(64):
            if self.desc_contained(self.chain_desc(p, i), desc):
                return i
        return None

    def separation_index(self, p, q):
        """Some i with q outside chain(p, i); p non-isolated, q != p."""
        for i in range(512):
            if not self.desc_member(self.chain_desc(p, i), q):
                return i
        raise UndecidedAtDepth(f"could not separate {p!r} from {q!r}")

    # -- constructive helpers ---------------------------------------------

    def pick_point(self, desc, exclude=frozenset(), depth: int = 64):
        for p in self.desc_enumerate(desc, depth):
            if p not in exclude:
                return p
        return None

    def pick_isolated(self, desc, exclude=frozenset(), depth: int = 64):
        for p in self.desc_enumerate(desc, depth):
            if p not in exclude and self.isolated(p):
                return p
        return None

    def pick_nonisolated(self, desc, depth: int = 64):
        for p in self.desc_enumerate(desc, depth):
            if not self.isolated(p):
                return p
        return None

    def shrink_around(self, desc, p, step: int):
        """A sub-descriptor of desc containing p, shrinking as step grows."""
        if self.isolated(p):
            return self.singleton_desc(p)
        i = self.chain_index_inside(p, desc)
        if i is None:
            raise UndecidedAtDepth(f"no chain element at {p!r} inside {desc!r}")
        return self.chain_desc(p, max(i, step))

    def remove_points(self, desc, pts):
        """desc minus finitely many isolated points, when the kind supports it."""
        return None

    def split_desc(self, desc, k: int):
        """k pairwise disjoint sub-descriptors, for crowded kinds."""
        return None

    def tail_stream(self, limit, desc, exclude=frozenset()):
        """Injective stream of isolated (where they exist) points converging
        to limit, eventually inside every chain element, all inside desc."""
        raise NotImplementedError

    def region_crowded(self, desc) -> bool:
        """Certified 'no isolated points inside desc'; False means unknown."""
        return self.crowded_flag

    def whole_desc(self):
        return None


def interleave(*streams):
    """Round-robin merge of finitely many (possibly infinite) iterators."""
    alive = [iter(s) for s in streams]
    while alive:
        nxt = []
        for it in alive:
            try:
                yield next(it)
            except StopIteration:
                continue
            nxt.append(it)
        alive = nxt


def antidiagonal():
    """(i, j) pairs enumerated by total, then by first coordinate."""
    t = 0
    while True:
        for i in range(t + 1):
            yield i, t - i
        t += 1


class Subspace(SpacePresentation):
    """Open subspace sharing its parent's point codes and descriptors.

    Descriptors keep their parent semantics; the subspace filters point
    enumerations through the region predicate.  Containment and
    disjointness certificates inherit soundness because intersecting
    with a fixed region preserves both.
    """

    def __init__(self, parent: SpacePresentation, region_member, name: str,
                 crowded: bool = False):
        self.parent = parent
        self.region_member = region_member
        self.name = name
        self.kind = f"sub[{parent.kind}]"
        self.crowded_flag = crowded

    @property
    def signature(self):
        return ("subspace", self.name, self.parent.signature)

    def point_stream(self):
        return (p for p in self.parent.point_stream() if self.region_member(p))

    def contains_point(self, p):
        return self.parent.contains_point(p) and self.region_member(p)

    def isolated(self, p):
        return self.parent.isolated(p)

    def basis_stream(self):
        return (d for d in self.parent.basis_stream()
                if any(self.region_member(p)
                       for p in self.parent.desc_enumerate(d, 16)))

    def validate_desc(self, desc):
        self.parent.validate_desc(desc)

    def describe_desc(self, desc):
        return self.parent.describe_desc(desc)

    def desc_member(self, desc, p):
        return self.region_member(p) and self.parent.desc_member(desc, p)

    def desc_closure_member(self, desc, p):
        return self.region_member(p) and self.parent.desc_closure_member(desc, p)

    def desc_stream(self, desc):
        return (p for p in self.parent.desc_stream(desc) if self.region_member(p))

    def desc_is_singleton(self, desc):
        return self.parent.desc_is_singleton(desc)

    def desc_contained(self, child, parent_desc):
        return self.parent.desc_contained(child, parent_desc)

    def desc_disjoint(self, d1, d2):
        return self.parent.desc_disjoint(d1, d2)

    def desc_closed_disjoint(self, d1, d2):
        return self.parent.desc_closed_disjoint(d1, d2)

    def singleton_desc(self, p):
        return self.parent.singleton_desc(p)

    def chain_desc(self, p, i):
        return self.parent.chain_desc(p, i)

    def chain_index_inside(self, p, desc):
        return self.parent.chain_index_inside(p, desc)

    def separation_index(self, p, q):
        return self.parent.separation_index(p, q)

    def remove_points(self, desc, pts):
        return self.parent.remove_points(desc, pts)

    def split_desc(self, desc, k):
        return self.parent.split_desc(desc, k)

    def tail_stream(self, limit, desc, exclude=frozenset()):
        return (p for p in self.parent.tail_stream(limit, desc, exclude)
                if self.region_member(p))

    def region_crowded(self, desc):
        return self.parent.region_crowded(desc)
