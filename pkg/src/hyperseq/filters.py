"""Free filters on the naturals, presented computably.

A filter presentation exposes a decreasing chain of decidable subsets
base(0) >= base(1) >= ... For the Fréchet and partition filters the
chain is an honest base (and base(0) = N).  The fan filter over a
partition declares that it has no countable base; its chain is the
partition-tail scaffold used by its point space, and true membership is
only semidecidable through the almost-disjoint test.  Almost-disjoint
families come with their own presentation: per-generator decidable sets
plus a finite containing-generator lookup for each natural.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass

from .errors import CertificateRefusal, PresentationError


# ---------------------------------------------------------------------------
# decidable subsets of N


class NatSet:
    """Decidable subset of N with an increasing enumeration.

    contains() is total; elements() yields members in increasing order.
    Subclasses may override elements() when scanning would be too slow.
    """

    def __init__(self, contains, name: str, elements=None):
        self._contains = contains
        self._elements = elements
        self.name = name
        self._cache: list[int] = []
        self._iter = None
        self._lock = threading.Lock()

    def contains(self, m: int) -> bool:
        return m >= 0 and bool(self._contains(m))

    def elements(self):
        i = 0
        while True:
            yield self.nth(i)
            i += 1

    def _source(self):
        if self._elements is not None:
            return self._elements()
        return (m for m in _count() if self._contains(m))

    def nth(self, i: int) -> int:
        with self._lock:
            if self._iter is None:
                self._iter = self._source()
            while len(self._cache) <= i:
                self._cache.append(next(self._iter))
            return self._cache[i]

    def position_of(self, m: int):
        """Index of m in the increasing enumeration, or None if absent."""
        if not self.contains(m):
            return None
        i = 0
        while True:
            v = self.nth(i)
            if v == m:
                return i
            if v > m:
                return None
            i += 1

    def first_elements(self, k: int) -> list[int]:
        return [self.nth(i) for i in range(k)]

    def __repr__(self):
        return f"NatSet({self.name})"


def _count():
    m = 0
    while True:
        yield m
        m += 1


WHOLE = NatSet(lambda m: True, "N", elements=_count)


def tail_set(n: int) -> NatSet:
    return NatSet(lambda m: m >= n, f"[{n},inf)", elements=lambda: iter(range(n, 1 << 62)))


def default_piece(x: int) -> int:
    """2-adic valuation of x+1; fiber n is the progression 2^n-1 + k*2^(n+1)."""
    v = 0
    y = x + 1
    while y % 2 == 0:
        v += 1
        y //= 2
    return v


def _progression(start: int, step: int):
    def gen():
        v = start
        while True:
            yield v
            v += step

    return gen


def valuation_fiber(n: int) -> NatSet:
    return NatSet(
        lambda m: default_piece(m) == n,
        f"P{n}",
        elements=_progression((1 << n) - 1, 1 << (n + 1)),
    )


def valuation_tail(n: int) -> NatSet:
    if n == 0:
        return WHOLE
    # piece(x) >= n  iff  x = 2^n - 1 (mod 2^n)
    return NatSet(
        lambda m: default_piece(m) >= n,
        f"P>={n}",
        elements=_progression((1 << n) - 1, 1 << n),
    )


def arith_prog(start: int, step: int) -> NatSet:
    return NatSet(
        lambda m: m >= start and (m - start) % step == 0,
        f"{start}+{step}k",
        elements=_progression(start, step),
    )


# ---------------------------------------------------------------------------
# almost-disjoint families


class ADFamilyPresentation:
    """Family of infinite decidable subsets with finite pairwise intersections.

    num_generators is None for an infinite (enumerable) family.  Each
    natural belongs to finitely many generators, and the lookup is total.
    """

    def __init__(self, generator, containing_generators, num_generators,
                 intersection_bound: int, name: str, overlap_scan: int = 2048):
        self._generator = generator
        self._containing = containing_generators
        self.num_generators = num_generators
        self.intersection_bound = intersection_bound
        self.name = name
        self.overlap_scan = overlap_scan
        self._memo: dict[int, NatSet] = {}
        self._overlaps: dict[tuple, frozenset] = {}

    def generator(self, k: int) -> NatSet:
        if k < 0 or (self.num_generators is not None and k >= self.num_generators):
            raise IndexError(f"no generator {k}")
        if k not in self._memo:
            self._memo[k] = self._generator(k)
        return self._memo[k]

    def containing_generators(self, m: int) -> tuple:
        return tuple(self._containing(m))

    def overlap(self, k1: int, k2: int) -> frozenset:
        """The finite intersection of two generators, at presentation scale.

        With intersection_bound zero the generators are genuinely
        disjoint; otherwise the scan window is the vetting window the
        family was built with.
        """
        if k1 == k2:
            raise PresentationError("overlap needs two distinct generators")
        if self.intersection_bound == 0:
            return frozenset()
        key = (min(k1, k2), max(k1, k2))
        if key not in self._overlaps:
            a, b = self.generator(k1), self.generator(k2)
            self._overlaps[key] = frozenset(
                m for m in range(self.overlap_scan)
                if a.contains(m) and b.contains(m))
        return self._overlaps[key]

    def generator_indices(self, bound: int):
        n = self.num_generators if self.num_generators is not None else bound
        return range(n)

    @property
    def signature(self):
        return ("adfamily", self.name)

    def __repr__(self):
        return f"ADFamily({self.name})"


def node_code(bits: tuple) -> int:
    """Bijection between binary tree nodes (nonempty bit strings) and N."""
    v = 1
    for b in bits:
        v = (v << 1) | b
    return v - 1


def node_bits(code: int) -> tuple:
    s = bin(code + 1)[3:]
    return tuple(int(c) for c in s)


def branch_family(depth: int) -> ADFamilyPresentation:
    """Eventually-zero branches through the binary tree of the given depth.

    Generator k follows the depth-bit pattern of k, then zeros; its set
    holds the codes of all initial segments of that branch.
    """
    if depth < 1:
        raise PresentationError("branch family needs depth >= 1")

    def path(k: int):
        stem = tuple((k >> (depth - 1 - i)) & 1 for i in range(depth))

        def bit(i: int) -> int:
            return stem[i] if i < depth else 0

        return bit

    def generator(k: int) -> NatSet:
        bit = path(k)

        def elements():
            prefix: list[int] = []
            while True:
                prefix.append(bit(len(prefix)))
                yield node_code(tuple(prefix))

        def contains(m: int) -> bool:
            bits = node_bits(m)
            return len(bits) >= 1 and all(b == bit(i) for i, b in enumerate(bits))

        return NatSet(contains, f"branch{k}", elements=elements)

    def containing(m: int):
        bits = node_bits(m)
        out = []
        for k in range(1 << depth):
            bit = path(k)
            if all(b == bit(i) for i, b in enumerate(bits)):
                out.append(k)
        return out

    return ADFamilyPresentation(generator, containing, 1 << depth, depth,
                                f"branches[{depth}]")


def partition_fibers(piece=None, name: str = "valuation") -> ADFamilyPresentation:
    """The fibers of a partition of N as an infinite almost-disjoint family."""
    if piece is None:
        return ADFamilyPresentation(valuation_fiber, lambda m: (default_piece(m),),
                                    None, 0, name)
    return ADFamilyPresentation(
        lambda k: NatSet(lambda m, k=k: piece(m) == k, f"P{k}"),
        lambda m: (piece(m),),
        None, 0, name)


def explicit_family(sets: list, scan: int = 2048, bound: int = 64) -> ADFamilyPresentation:
    """Finite family given by explicit NatSets; a.d.-ness checked at desk scale."""
    sets = list(sets)
    if len(sets) < 2:
        raise PresentationError("need at least two generators")
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            trace = sum(1 for m in range(scan) if sets[i].contains(m) and sets[j].contains(m))
            if trace > bound:
                raise PresentationError(
                    f"generators {sets[i].name} and {sets[j].name} share {trace} "
                    f"elements below {scan}: not almost disjoint at desk scale")

    def containing(m: int):
        return [k for k, s in enumerate(sets) if s.contains(m)]

    return ADFamilyPresentation(lambda k: sets[k], containing, len(sets), bound,
                                "explicit(" + ",".join(s.name for s in sets) + ")")


# ---------------------------------------------------------------------------
# filter presentations


class FilterPresentation:
    """Free filter on N given by a decreasing chain of decidable sets."""

    def __init__(self, kind: str, base, has_countable_base: bool, name: str,
                 ad_family: ADFamilyPresentation | None = None):
        self.kind = kind
        self._base = base
        self.has_countable_base = has_countable_base
        self.name = name
        self.ad_family = ad_family
        self._memo: dict[int, NatSet] = {}

    def base(self, n: int) -> NatSet:
        if n < 0:
            raise IndexError("base index must be a natural")
        if n not in self._memo:
            self._memo[n] = self._base(n)
        return self._memo[n]

    @property
    def signature(self):
        return ("filter", self.kind, self.name)

    def __repr__(self):
        return f"Filter({self.name})"


def frechet_filter() -> FilterPresentation:
    return FilterPresentation("frechet", tail_set, True, "frechet")


def partition_filter(piece=None, name: str = "valuation",
                     fiber_check: int = 8, scan: int = 4096) -> FilterPresentation:
    """Filter of unions of almost all fibers of a partition of N.

    The default partition sends x to the 2-adic valuation of x+1.
    Custom piece functions are vetted at desk scale: the first few
    fibers must show at least two elements below the scan bound.
    """
    if piece is None:
        base = valuation_tail
    else:
        for n in range(fiber_check):
            hits = sum(1 for m in range(scan) if piece(m) == n)
            if hits < 2:
                raise PresentationError(
                    f"fiber {n} has {hits} elements below {scan}: "
                    "not an infinite-fiber partition at desk scale")
        base = lambda n: NatSet(lambda m, n=n: piece(m) >= n, f"{name}>={n}")
    return FilterPresentation("partition", base, True, f"partition[{name}]")


def fan_filter(piece=None, name: str = "valuation") -> FilterPresentation:
    """Filter of sets almost containing every fiber of a partition.

    No countable base exists; the declared chain base(m) = union of the
    fibers from m on is the scaffold its point space uses, not a family
    of filter members.  Membership of a set is semidecided against the
    fiber family via ad_semicontains.
    """
    fibers = partition_fibers(piece, name)
    if piece is None:
        base = valuation_tail
    else:
        base = lambda n: NatSet(lambda m, n=n: piece(m) >= n, f"{name}>={n}")
    return FilterPresentation("fan", base, False, f"fan[{name}]", ad_family=fibers)


def ad_filter(family: ADFamilyPresentation) -> FilterPresentation:
    """Filter of sets almost containing every generator of an a.d. family.

    The declared chain trims the first m elements off every generator;
    for finite families these sets are genuine filter members.
    """
    if family.num_generators is None:
        raise PresentationError("infinite families are presented through fan_filter")

    def base(m: int) -> NatSet:
        def contains(x: int) -> bool:
            for k in family.containing_generators(x):
                pos = family.generator(k).position_of(x)
                if pos is not None and pos >= m:
                    return True
            return False

        def elements():
            streams = [family.generator(k).elements() for k in
                       range(family.num_generators)]
            heads = []
            for k, st in enumerate(streams):
                for _ in range(m):
                    next(st)
                heads.append(next(st))
            seen = set()
            while True:
                k = min(range(len(heads)), key=lambda j: heads[j])
                v = heads[k]
                heads[k] = next(streams[k])
                if v not in seen:
                    seen.add(v)
                    yield v

        return NatSet(contains, f"{family.name}-trim{m}", elements=elements)

    return FilterPresentation("ad", base, False, f"ad[{family.name}]",
                              ad_family=family)


# ---------------------------------------------------------------------------
# semidecidable membership for a.d.-generated filters

YES, NO, UNKNOWN = "yes", "no", "unknown-at-depth"


def ad_semicontains(filt: FilterPresentation, candidate: NatSet,
                    depth: int = 20, scan: int = 64, window: int = 16) -> tuple:
    """Three-valued test: does the filter generated by the a.d. family hold candidate?

    Samples generators up to depth; each must be almost contained in the
    candidate.  A generator whose last `window` sampled elements all
    escape is a counterexample; a generator with stragglers near the end
    of the sample leaves the verdict unknown.
    """
    family = filt.ad_family
    if family is None:
        raise PresentationError("filter has no a.d. presentation")
    for k in family.generator_indices(depth):
        gen = family.generator(k)
        sample = gen.first_elements(scan)
        escapes = [x for x in sample if not candidate.contains(x)]
        if not escapes:
            continue
        tail_escapes = [x for x in sample[-window:] if not candidate.contains(x)]
        if len(tail_escapes) == window:
            return (NO, {"generator": k, "escapes": escapes[:window]})
        if tail_escapes:
            return (UNKNOWN, {"generator": k, "straggler": tail_escapes[0]})
    return (YES, {"generators_checked": len(list(family.generator_indices(depth)))})


# ---------------------------------------------------------------------------
# the alpha2 diagonalization


@dataclass
class Alpha2Verdict:
    status: str  # "pass" | "certificate-failure"
    sequence: object = None
    meeting_counts: tuple = ()
    stage: int | None = None
    base_index: int | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def alpha2_diagonalize(filt: FilterPresentation, seqs: list, depth: int,
                       scan: int = 512) -> Alpha2Verdict:
    """Greedy single-sequence diagonalization through finitely many inputs.

    Stage i appends the least unused value of seqs[i mod m] that lies in
    base(i).  If every stage below depth succeeds the sequence continues
    greedily forever and is certified; otherwise the verdict names the
    first failing stage and its base element.
    """
    if not seqs:
        raise PresentationError("need at least one input sequence")
    from .points import FILTER_POINT
    from .sequences import make_seq
    from .spaces import xi_space

    m = len(seqs)
    for s in seqs:
        if s.limit != FILTER_POINT:
            raise PresentationError("inputs must converge to the filter point")

    def pick(stage: int, used: set):
        leg = seqs[stage % m]
        base = filt.base(stage)
        best = None
        for i in range(scan):
            v = leg.term(i)
            if isinstance(v, int) and v not in used and base.contains(v):
                if best is None or v < best:
                    best = v
        return best

    used: set[int] = set()
    chosen: list[int] = []
    counts = [0] * m
    for stage in range(depth):
        v = pick(stage, used)
        if v is None:
            return Alpha2Verdict("certificate-failure", stage=stage,
                                 base_index=stage,
                                 meeting_counts=tuple(counts))
        used.add(v)
        chosen.append(v)
        counts[stage % m] += 1

    def stream():
        yield from chosen
        local_used = set(used)
        stage = depth
        while True:
            v = pick(stage, local_used)
            if v is None:
                raise CertificateRefusal(
                    f"diagonal stalled at stage {stage}", stage=stage)
            local_used.add(v)
            yield v
            stage += 1

    seq = make_seq(xi_space(filt), FILTER_POINT, stream, depth=min(depth, 20))
    return Alpha2Verdict("pass", sequence=seq, meeting_counts=tuple(counts))
