"""Complete metric on filter spaces with a countable base.

The metric grades naturals by the last base stage containing them:
stage-n points sit at height 2**-n, the filter point at height 0.
Distances are exact rationals, Hausdorff distances are two-sided
rational intervals, and Cauchy streams of closed sets get decided
limits with per-point certificates.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import count

from .errors import CertificateRefusal, PresentationError, UndecidedAtDepth
from .points import FILTER_POINT
from .reports import FAIL, PASS, Report
from .sequences import ConvSeq, FiniteSet, amalgam, make_seq
from .spaces import xi_space

_ZERO = Fraction(0)


def _pow2(exp: int) -> Fraction:
    # 2**-exp as an exact rational
    if exp >= 0:
        return Fraction(1, 1 << exp)
    return Fraction(1 << (-exp))


class XiMetric:
    """Metric on a sequential filter space, graded by base stages.

    Each natural belongs to the last base stage containing it; strays
    outside stage 0 are folded into stage 0 so the stages partition
    the naturals.  Distinct same-stage points sit at distance 2**-n,
    everything else at the difference of heights.
    """

    def __init__(self, filt, stage_cap: int = 20000):
        if not filt.has_countable_base:
            raise PresentationError(
                "metric needs a countable base; %r does not present one" % filt)
        self.filter = filt
        self.space = xi_space(filt)
        self.stage_cap = stage_cap
        self._stages = {}

    def __repr__(self):
        return "XiMetric(%s)" % self.filter.name

    def stage_of(self, m: int) -> int:
        """Last base stage containing m (0 for strays outside stage 0)."""
        if m in self._stages:
            return self._stages[m]
        if m < 0:
            raise PresentationError("stage_of wants a natural, got %r" % (m,))
        if not self.filter.base(0).contains(m):
            self._stages[m] = 0
            return 0
        n = 0
        while self.filter.base(n + 1).contains(m):
            n += 1
            if n > self.stage_cap:
                raise UndecidedAtDepth(
                    "point never leaves the base chain within the stage cap",
                    point=m, cap=self.stage_cap)
        self._stages[m] = n
        return n

    def rebased(self, bound: int) -> tuple:
        """Naturals below bound folded into stage 0 from outside the chain."""
        base0 = self.filter.base(0)
        return tuple(m for m in range(bound) if not base0.contains(m))

    def height(self, p) -> Fraction:
        """2**-stage for naturals, 0 for the filter point."""
        if p is FILTER_POINT:
            return _ZERO
        return _pow2(self.stage_of(p))

    def distance(self, x, y) -> Fraction:
        if x == y:
            return _ZERO
        if x is not FILTER_POINT and y is not FILTER_POINT:
            cx, cy = self.stage_of(x), self.stage_of(y)
            if cx == cy:
                return _pow2(cx)
        return abs(self.height(x) - self.height(y))

    def ball_desc(self, p, radius_exp: int):
        """Open ball of radius 2**-radius_exp as a canonical description.

        Around the filter point every radius works (the ball is a tail).
        Around a natural only radii inside its isolation gap give a
        canonical description; wider balls are refused.
        """
        if p is FILTER_POINT:
            return ("tl", radius_exp + 1, frozenset())
        c = self.stage_of(p)
        if radius_exp >= c + 1:
            return ("one", p)
        raise PresentationError(
            "ball around a stage-%d point is canonical only for radius "
            "exponents >= %d, got %d" % (c, c + 1, radius_exp))

    def ball_members(self, p, radius_exp: int, bound: int) -> list:
        """Brute enumeration of the ball among {filter point} + range(bound)."""
        r = _pow2(radius_exp)
        out = []
        if self.distance(p, FILTER_POINT) < r:
            out.append(FILTER_POINT)
        out.extend(m for m in range(bound) if self.distance(p, m) < r)
        return out


_metric_cache: dict = {}


def xi_metric(filt, stage_cap: int = 20000) -> XiMetric:
    key = (filt.signature, stage_cap)
    found = _metric_cache.get(key)
    if found is None:
        found = XiMetric(filt, stage_cap)
        _metric_cache[key] = found
    return found


class MetricTruncation:
    """Finite view of a closed set: listed points plus a tail promise.

    Any unlisted member has height <= 2**-tail_exp (tail_exp None means
    the listing is complete).  tail_known_nonempty records whether the
    source guarantees unlisted members actually exist.
    """

    __slots__ = ("points", "tail_exp", "tail_known_nonempty")

    def __init__(self, points, tail_exp=None, tail_known_nonempty=False):
        naturals = sorted(p for p in points if p is not FILTER_POINT)
        listed = list(naturals)
        if any(p is FILTER_POINT for p in points):
            listed.insert(0, FILTER_POINT)
        self.points = tuple(listed)
        self.tail_exp = tail_exp
        self.tail_known_nonempty = tail_known_nonempty and tail_exp is not None

    def __repr__(self):
        tail = "" if self.tail_exp is None else ", tail<=2^-%d" % self.tail_exp
        return "MetricTruncation(%d points%s)" % (len(self.points), tail)


def truncate(metric: XiMetric, tset, height_exp: int) -> MetricTruncation:
    """Truncate a closed set at height 2**-height_exp.

    Convergent sequences list every member of stage < height_exp (all
    such terms show up before the stage modulus) and promise the rest
    as tail.  Finite sets are listed in full.
    """
    if isinstance(tset, MetricTruncation):
        return tset
    if isinstance(tset, ConvSeq):
        if tset.limit is not FILTER_POINT:
            raise PresentationError(
                "truncation needs a sequence converging to the filter point")
        head = tset.terms(tset.modulus(height_exp))
        listed = [FILTER_POINT]
        listed.extend(t for t in set(head) if metric.stage_of(t) < height_exp)
        return MetricTruncation(listed, height_exp, tail_known_nonempty=True)
    if isinstance(tset, FiniteSet):
        points = tuple(tset.points)
    else:
        points = tuple(tset)
    if not points:
        raise PresentationError("cannot truncate an empty set")
    return MetricTruncation(points)


def _directed(metric: XiMetric, src: MetricTruncation,
              dst: MetricTruncation) -> tuple:
    """Interval bounds for sup over src of the distance to dst."""
    if not dst.points and dst.tail_exp is None:
        raise PresentationError("directed distance to an empty set")
    dst_tail = None if dst.tail_exp is None else _pow2(dst.tail_exp)
    dst_has_fp = dst.points and dst.points[0] is FILTER_POINT
    dst_nat_heights = [metric.height(b) for b in dst.points
                       if b is not FILTER_POINT]

    lo = _ZERO
    hi = _ZERO
    for a in src.points:
        fa = metric.height(a)
        exact = min((metric.distance(a, b) for b in dst.points),
                    default=None)
        if dst_tail is None:
            lo_a = hi_a = exact
        else:
            tail_lo = max(_ZERO, fa - dst_tail)
            lo_a = tail_lo if exact is None else min(exact, tail_lo)
            if dst.tail_known_nonempty:
                tail_hi = max(fa, dst_tail)
                hi_a = tail_hi if exact is None else min(exact, tail_hi)
            else:
                hi_a = exact if exact is not None else max(fa, dst_tail)
        lo = max(lo, lo_a)
        hi = max(hi, hi_a)

    if src.tail_exp is not None:
        src_tail = _pow2(src.tail_exp)
        routes = []
        if dst_has_fp:
            routes.append(src_tail)
        if dst_tail is not None:
            routes.append(max(src_tail, dst_tail))
        if dst_nat_heights:
            routes.append(max(src_tail, min(dst_nat_heights)))
        hi = max(hi, min(routes))
        # the src tail never certifies a positive lower bound
    return lo, hi


def _as_refinable(tset):
    # (refinable?, resolver) where resolver(height_exp) yields a truncation
    if isinstance(tset, ConvSeq):
        return True, tset
    return False, tset


def hausdorff(first, second, precision: int, metric: XiMetric = None) -> tuple:
    """Hausdorff distance as an exact rational interval (lo, hi).

    The interval narrows to width <= 2**-precision by truncating
    convergent arguments deeply enough; already-finite arguments are
    compared exactly.
    """
    if metric is None:
        for cand in (first, second):
            if isinstance(cand, ConvSeq):
                metric = xi_metric(cand.space.filter)
                break
        if metric is None:
            raise PresentationError(
                "hausdorff needs a metric when no convergent argument "
                "carries one")
    if first is second:
        return _ZERO, _ZERO

    width_goal = _pow2(precision)
    last = None
    for height_exp in range(precision + 2, precision + 9):
        ta = truncate(metric, first, height_exp)
        tb = truncate(metric, second, height_exp)
        lo_ab, hi_ab = _directed(metric, ta, tb)
        lo_ba, hi_ba = _directed(metric, tb, ta)
        last = (max(lo_ab, lo_ba), max(hi_ab, hi_ba))
        if last[1] - last[0] <= width_goal:
            return last
        if not (isinstance(first, ConvSeq) or isinstance(second, ConvSeq)):
            break  # nothing left to refine
    raise UndecidedAtDepth(
        "hausdorff interval would not narrow to the requested width",
        precision=precision, interval=tuple(str(q) for q in last))


class CauchyLimit:
    """Decided limit of a Cauchy stream of closed sets.

    Membership of a natural is decided exactly while its stage stays
    below the decision depth; the filter point gets a probe answer.
    """

    def __init__(self, metric: XiMetric, members: tuple,
                 has_limit_point: bool, depth: int):
        self.metric = metric
        self.members = members
        self.has_limit_point = has_limit_point
        self.depth = depth

    def contains(self, p) -> bool:
        if p is FILTER_POINT:
            return self.has_limit_point
        c = self.metric.stage_of(p)
        if c >= self.depth:
            raise UndecidedAtDepth(
                "stage of the queried point reaches the decision depth",
                point=p, stage=c, depth=self.depth)
        return p in self.members

    def truncation(self) -> MetricTruncation:
        listed = ((FILTER_POINT,) if self.has_limit_point else ()) + self.members
        return MetricTruncation(listed, self.depth)

    def __repr__(self):
        fp = "+lp" if self.has_limit_point else ""
        return "CauchyLimit(%d members%s, depth=%d)" % (
            len(self.members), fp, self.depth)


def _stage_members(metric: XiMetric, tset, stage: int) -> set:
    """Members of exact stage `stage`, complete for our set presentations."""
    if isinstance(tset, ConvSeq):
        head = tset.terms(tset.modulus(stage + 1))
        return {t for t in set(head) if metric.stage_of(t) == stage}
    if isinstance(tset, FiniteSet):
        points = tset.points
    else:
        points = tuple(tset)
    return {p for p in points
            if p is not FILTER_POINT and metric.stage_of(p) == stage}


def _probe_limit_point(tset) -> bool:
    if isinstance(tset, ConvSeq):
        return tset.limit is FILTER_POINT
    if isinstance(tset, FiniteSet):
        return any(p is FILTER_POINT for p in tset.points)
    return any(p is FILTER_POINT for p in tuple(tset))


def cauchy_limit(stream, depth: int, metric: XiMetric = None,
                 check: int = None) -> CauchyLimit:
    """Decide the limit of a Cauchy stream of closed sets.

    The stream is a sequence (or callable index -> set) promising
    consecutive Hausdorff distance <= 2**-i; the promise is verified up
    to `check` before anything is decided, and a violation names the
    offending index.  A natural of stage c belongs to the limit exactly
    when it belongs to the (c+2)nd set: past that point the distance
    bound is strictly inside the point's isolation gap, so membership
    freezes.
    """
    if check is None:
        check = depth + 2
    fetch = stream.__getitem__ if isinstance(stream, (list, tuple)) else stream
    cache = {}

    def element(i):
        if i not in cache:
            cache[i] = fetch(i)
        return cache[i]

    if metric is None:
        probe = element(0)
        if isinstance(probe, ConvSeq):
            metric = xi_metric(probe.space.filter)
        else:
            raise PresentationError(
                "cauchy_limit needs a metric when the stream opens with a "
                "finite set")

    for i in range(check):
        lo, hi = hausdorff(element(i), element(i + 1), i + 2, metric=metric)
        if lo > _pow2(i):
            raise CertificateRefusal(
                "stream is not Cauchy at the promised rate",
                index=i, lower_bound=str(lo), allowed=str(_pow2(i)))

    members = []
    for c in range(depth):
        members.extend(sorted(_stage_members(metric, element(c + 2), c)))
    has_lp = _probe_limit_point(element(depth + 2))
    return CauchyLimit(metric, tuple(members), has_lp, depth)


class OBLayer:
    """One escape layer: closed sets leaving base stage `index` finitely."""

    def __init__(self, filt, index: int):
        self.filter = filt
        self.index = index
        self.base = filt.base(index)

    def membership(self, tset) -> tuple:
        """(True, escape witnesses) for a sequence or finite set.

        A convergent sequence leaves any base stage only before its
        stage modulus, so the escape list is complete; a finite set
        escapes at most finitely by counting.
        """
        if isinstance(tset, ConvSeq):
            head = tset.terms(tset.modulus(self.index))
            escapes = tuple(sorted(
                {t for t in head if not self.base.contains(t)}))
            return True, escapes
        if isinstance(tset, FiniteSet):
            points = tset.points
        else:
            points = tuple(tset)
        escapes = tuple(sorted(
            {p for p in points
             if p is not FILTER_POINT and not self.base.contains(p)}))
        return True, escapes

    def escape_count_reaches(self, natset, count: int, scan: int = 4096) -> bool:
        """Scan for `count` escapes of an explicit natural set."""
        found = 0
        for m in natset.first_elements(scan):
            if not self.base.contains(m):
                found += 1
                if found >= count:
                    return True
        return False

    def __repr__(self):
        return "OBLayer(%s, %d)" % (self.filter.name, self.index)


def o_b_layer(filt, index: int) -> OBLayer:
    return OBLayer(filt, index)


def gdelta_profile(filt, depth: int):
    """Report on the escape-layer decomposition of the convergent sets."""
    metric = xi_metric(filt)
    report = Report("gdelta-profile:%s" % filt.name,
                    meta={"depth": depth, "space": filt.name})

    report.add("rebased-strays", PASS,
               {"bound": 64, "strays": list(metric.rebased(64))})

    tail = make_seq(metric.space, FILTER_POINT, name="tail")
    evens, odds = tail.split(2)
    samples = [("tail", tail), ("even-split", evens), ("odd-split", odds),
               ("amalgam", amalgam([evens, odds], name="amalgam"))]
    layer_indices = sorted({0, 1, depth // 2, depth})
    for label, seq in samples:
        counts = {}
        ok = True
        for n in layer_indices:
            inside, escapes = o_b_layer(filt, n).membership(seq)
            ok = ok and inside
            counts[str(n)] = len(escapes)
        report.add("layers/%s" % label, PASS if ok else FAIL,
                   {"escape-counts": counts})

    finite = FiniteSet(metric.space, [FILTER_POINT] + list(range(4)))
    fine = all(o_b_layer(filt, n).membership(finite)[0]
               for n in layer_indices)
    report.add("finite-sets-in-every-layer", PASS if fine else FAIL,
               {"points": 4})

    # decomposition: layers alone admit finite sets; convergence is what
    # membership in every layer buys an infinite closed set
    if filt.kind == "partition":
        piece = filt.base(0)
        stray = _first_difference_set(piece, filt.base(1))
        escapes = o_b_layer(filt, 1).escape_count_reaches(stray, depth + 1)
        report.add("decomposition", PASS if escapes else FAIL,
                   {"witness": "infinite discrete cell escapes layer 1 "
                               "unboundedly",
                    "escapes-at-least": depth + 1})
    else:
        entered = []
        for n in layer_indices:
            base = filt.base(n)
            entered.append(all(
                any(base.contains(m) for m in seq.terms(256)[64:])
                for _, seq in samples))
        report.add("decomposition", PASS if all(entered) else FAIL,
                   {"witness": "every sampled infinite set re-enters each "
                               "sampled layer"})
    return report


def _first_difference_set(wide, narrow):
    from .filters import NatSet

    def contains(m: int) -> bool:
        return wide.contains(m) and not narrow.contains(m)

    return NatSet(contains, "%s\\%s" % (wide.name, narrow.name))


# ---------------------------------------------------------------------------
# the four-part profile


def _sequence_open(seq: ConvSeq, stage: int, force=(), exclude=()):
    """Canonical open around a sequence, built from its own head and chain.

    Points in `force` stay listed as singleton pieces, points in
    `exclude` stay outside every piece; both are pushed out of the chain
    by raising its stage.
    """
    from .vietoris import canonical_open

    space = seq.space
    s = stage
    for q in tuple(force) + tuple(exclude):
        s = max(s, space.separation_index(seq.limit, q))
    chain = space.chain_desc(seq.limit, s)
    shaved = space.remove_points(chain, frozenset(force) | frozenset(exclude))
    if shaved is not None:
        chain = shaved
    heads = []
    for u in seq.terms(seq.modulus(s)):
        if u not in heads and not space.desc_member(chain, u):
            heads.append(u)
    for q in force:
        if q not in heads:
            heads.append(q)
    descs = [space.singleton_desc(u) for u in heads
             if u not in exclude] + [chain]
    return canonical_open(space, descs)


def _separation_reason(seq: ConvSeq, copen):
    """Why the sequence misses the open: a reason tag plus its witness."""
    space = copen.space
    if all(not piece.member(seq.limit) for piece in copen.pieces):
        return "no-limit-piece", None
    home = copen.piece_of(seq.limit)
    ell = space.chain_index_inside(seq.limit, copen.pieces[home].desc)
    head = seq.terms(seq.modulus(ell))
    for t in head:
        if not copen.union_member(t):
            return "escaping-term", t
    for i, piece in enumerate(copen.pieces):
        if i != home and not any(piece.member(t) for t in head):
            return "missed-piece", space.pick_point(piece.desc)
    return None, None


def _separating_open(seq: ConvSeq, copen, reason: str, witness):
    """Canonical open holding seq whose extension avoids copen's trace."""
    from .vietoris import canonical_open

    space = seq.space
    if reason == "no-limit-piece":
        sep = canonical_open(space, [space.whole_desc()])
        certified = all(not piece.member(seq.limit) for piece in copen.pieces)
        return sep, certified
    if reason == "escaping-term":
        sep = _sequence_open(seq, 1, force=(witness,))
        certified = all(not piece.member(witness) for piece in copen.pieces)
        return sep, certified
    sep = _sequence_open(seq, 1, exclude=(witness,))
    certified = all(not piece.member(witness) for piece in sep.pieces)
    return sep, certified


def polish_profile(filt, depth: int) -> Report:
    """Four checks behind complete metrizability of the convergent sets.

    Separability, zero-dimensionality, nowhere local compactness, and
    the metric itself (axioms, balls, Cauchy completeness), each run at
    desk scale over the given filter space.
    """
    from .vietoris import (canonical_open, construct_member,
                           enumerate_canonical_opens, member,
                           noncompact_witness)

    metric = xi_metric(filt)
    space = metric.space
    report = Report("polish-profile:%s" % filt.name,
                    meta={"depth": depth, "space": filt.name})

    # separability: the constructed members indexed by canonical opens
    # reach every inhabited basic set of the hyperspace
    inhabited = 0
    empty_trace = 0
    sep_ok = True
    for copen in enumerate_canonical_opens(space, depth, max_pieces=3):
        if copen.nondiscrete_piece() is None:
            empty_trace += 1
            continue
        inhabited += 1
        if not member(construct_member(copen), copen):
            sep_ok = False
            break
    report.add("separable", PASS if sep_ok and inhabited else FAIL,
               {"inhabited-opens": inhabited, "empty-trace-opens": empty_trace})

    # zero-dimensionality: whenever a sequence misses a basic set, a
    # disjoint basic set around the sequence certifies the separation
    tail = make_seq(space, FILTER_POINT, name="tail")
    evens, odds = tail.split(2)
    t0 = tail.term(0)
    outside_pairs = [
        (tail, [space.singleton_desc(t0),
                space.singleton_desc(tail.term(1))]),
        (tail, [space.remove_points(space.whole_desc(), frozenset([t0]))]),
        (evens, [space.singleton_desc(odds.term(0)),
                 space.remove_points(space.whole_desc(),
                                     frozenset([odds.term(0)]))]),
    ]
    reasons = {}
    zd_ok = True
    for seq, descs in outside_pairs:
        copen = canonical_open(space, descs)
        if member(seq, copen):
            zd_ok = False
            break
        reason, witness = _separation_reason(seq, copen)
        sep, certified = _separating_open(seq, copen, reason, witness)
        if not (certified and member(seq, sep)):
            zd_ok = False
            break
        reasons[reason] = reasons.get(reason, 0) + 1
    report.add("zero-dimensional",
               PASS if zd_ok and len(reasons) == 3 else FAIL,
               {"separations": reasons})

    # nowhere local compactness: inside any basic neighborhood, the
    # witness stages nest, stay inhabited, and expel every single member
    nlc_ok = True
    stages_checked = 0
    for copen in [canonical_open(space, [space.whole_desc()]),
                  _sequence_open(tail, 1)]:
        wit = noncompact_witness(tail, copen, depth)
        for t in range(2):
            inhabitant = wit.stage_witness(t)
            if not wit.stage_member(t, inhabitant):
                nlc_ok = False
                break
            if wit.exclusion_stage(inhabitant, depth + 8) is None:
                nlc_ok = False
                break
            stages_checked += 1
    report.add("nowhere-locally-compact", PASS if nlc_ok else FAIL,
               {"stages-checked": stages_checked})

    # the metric itself: axioms on seeded triples, balls matching their
    # canonical descriptions, Cauchy streams deciding their limits
    import random
    rng = random.Random(0)
    pool = [FILTER_POINT] + [tail.term(i) for i in range(12)]
    axioms_ok = True
    for _ in range(300):
        x, y, z = (rng.choice(pool) for _ in range(3))
        dxy = metric.distance(x, y)
        if dxy < 0 or (dxy == 0) != (x == y):
            axioms_ok = False
        if dxy != metric.distance(y, x):
            axioms_ok = False
        if dxy > metric.distance(x, z) + metric.distance(z, y):
            axioms_ok = False

    balls_ok = True
    for p in pool[:8]:
        floor = 0 if p is FILTER_POINT else metric.stage_of(p) + 1
        for k in (floor, floor + 2):
            desc = metric.ball_desc(p, k)
            listed = metric.ball_members(p, k, 128)
            for cand in [FILTER_POINT] + list(range(128)):
                if space.desc_member(desc, cand) != (cand in listed):
                    balls_ok = False

    cauchy_ok = True

    def drop(i):
        return make_seq(space, FILTER_POINT,
                        (tail.term(i + j) for j in count()),
                        name="drop%d" % i)

    drops = [drop(i) for i in range(depth + 4)]
    decided = cauchy_limit(drops, depth, metric=metric)
    if decided.members or not decided.has_limit_point:
        cauchy_ok = False
    for i in range(3):
        lo, _ = hausdorff(drops[i], decided.truncation(), i + 1,
                          metric=metric)
        if lo > _pow2(i):
            cauchy_ok = False
    constant = cauchy_limit(lambda i: tail, depth, metric=metric)
    for c in range(depth):
        if not constant.contains(tail.term(c)):
            cauchy_ok = False
    report.add("completely-metrizable",
               PASS if axioms_ok and balls_ok and cauchy_ok else FAIL,
               {"triples": 300, "balls": 16,
                "cauchy-members": [str(m) for m in constant.members]})
    return report
