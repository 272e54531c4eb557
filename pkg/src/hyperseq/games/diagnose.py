"""Structural diagnostics for hyperspace category properties.

Three depth-bounded probes: density of isolated points, an infinite
discrete clopen set of isolated points (whose finite-subset families
are pairwise disjoint nonempty opens, killing pseudocompactness), and
local chains at a non-isolated point that no single member survives.
Every cell is three-valued; nothing is guessed past the depth.
"""
from __future__ import annotations

from itertools import islice

from ..errors import CertificateRefusal, PresentationError, UndecidedAtDepth
from ..points import FILTER_POINT, dyadic
from ..reports import FAIL, PASS, UNKNOWN, Report
from ..spaces.checks import isolated_dense_check
from ..vietoris import canonical_open, construct_member, member

_SCAN = 4096


def _discrete_clopen_probe(space, depth):
    """Search for an infinite discrete clopen set N of isolated points.

    Returns (status, witness, family): on success the family is the
    canonical open splitting off the first `depth` points of N as
    singletons, with the remaining pieces disjoint from all of N.
    """
    kind = space.kind
    if space.crowded_flag:
        return FAIL, {"reason": "no isolated points"}, None

    if kind == "xi":
        filt = space.filter
        if not filt.has_countable_base:
            return UNKNOWN, {"reason": "the declared chain is not a "
                             "neighborhood base; separation from the limit "
                             "point is not certified"}, None
        base1 = filt.base(1)
        sample = [m for m in range(_SCAN) if not base1.contains(m)]
        if len(sample) < depth:
            return UNKNOWN, {"reason": f"only {len(sample)} points outside "
                             "stage 1 below the scan bound"}, None
        chosen = sample[:depth]
        family = canonical_open(
            space,
            [("tl", 1, frozenset())]
            + [space.singleton_desc(m) for m in chosen])
        return PASS, {"set": "naturals outside the stage-1 base set",
                      "sample": chosen}, family

    if kind == "psi":
        fam = space.family
        sample = [m for m in range(_SCAN)
                  if fam.containing_generators(m) == ()]
        if len(sample) < depth:
            return UNKNOWN, {"reason": f"only {len(sample)} uncovered "
                             "naturals below the scan bound"}, None
        chosen = sample[:depth]
        # generator pieces made pairwise disjoint by carving the certified
        # overlaps out of the later piece; their union still covers every
        # covered natural through its earliest generator
        blocks = []
        for k in range(fam.num_generators):
            minus = set()
            for j in range(k):
                minus.update(fam.overlap(j, k))
            blocks.append(("gt", k, frozenset(minus)))
        family = canonical_open(
            space, blocks + [space.singleton_desc(m) for m in chosen])
        return PASS, {"set": "naturals covered by no generator",
                      "sample": chosen}, family

    if kind == "ordinal":
        if not space.bound.is_limit:
            return FAIL, {"reason": "successor bound: the segment is "
                          "compact, every infinite set accumulates"}, None
        marks = []
        k = 0
        while len(marks) < depth + 1 and k < 64 * depth:
            f = space.bound.fundamental(k)
            k += 1
            if not f.is_zero and (not marks or marks[-1] < f):
                marks.append(f)
        if len(marks) < depth + 1:
            return UNKNOWN, {"reason": "fundamental sequence stalled"}, None
        chosen = [f.succ() for f in marks[:depth]]
        descs = [("iv", None, marks[0])]
        for i, x in enumerate(chosen):
            descs.append(("iv", marks[i], x))  # the singleton {x}
            hi = marks[i + 1] if i + 1 < len(marks) else None
            if hi is not None and x < hi:
                descs.append(("iv", x, hi))  # the gap after x, clear of N
        family = canonical_open(space, descs)
        return PASS, {"set": "successors of the fundamental marks "
                      "(cofinal, closed since the bound is excluded)",
                      "sample": [str(x) for x in chosen]}, family

    if kind == "duplicate":
        return UNKNOWN, {"reason": "no discrete clopen twin set located; "
                         "over a compact base every infinite one "
                         "accumulates"}, None

    return UNKNOWN, {"reason": f"no probe for kind {kind!r}"}, None


def _closure_nested(space, child, parent):
    # interval and cylinder descriptors are clopen, so containment is
    # closure containment; half-open dyadic intervals need a strict
    # right edge unless it is the missing top point
    if child[0] == "dy" and parent[0] == "dy":
        lo_c, hi_c = dyadic(child[2], child[1]), dyadic(child[2] + 1, child[1])
        lo_p, hi_p = dyadic(parent[2], parent[1]), dyadic(parent[2] + 1, parent[1])
        return lo_c >= lo_p and (hi_c < hi_p or hi_c == hi_p == 1)
    return space.desc_contained(child, parent)


def _gdelta_probe(space, depth):
    """Chains at a non-isolated point that every sampled member escapes."""
    p = None
    for q in islice(space.point_stream(), 256):
        if not space.isolated(q):
            p = q
            break
    if p is None:
        return UNKNOWN, {"reason": "no non-isolated point in the sample"}, None

    chain = [space.chain_desc(p, n) for n in range(depth)]
    for n in range(depth - 1):
        if not _closure_nested(space, chain[n + 1], chain[n]):
            return FAIL, {"point": repr(p),
                          "reason": f"closure nesting breaks at stage {n}"}, chain

    escapes = []
    for k in (0, min(2, depth - 1), min(5, depth - 1)):
        try:
            seq = construct_member(canonical_open(space, [chain[k]]))
        except (PresentationError, UndecidedAtDepth, CertificateRefusal) as err:
            return UNKNOWN, {"point": repr(p), "start": k,
                             "reason": str(err)}, chain
        stage = None
        for n in range(depth):
            try:
                if not member(seq, canonical_open(space, [chain[n]])):
                    stage = n
                    break
            except (UndecidedAtDepth, CertificateRefusal):
                return UNKNOWN, {"point": repr(p), "start": k,
                                 "reason": "membership undecided along "
                                 "the chain"}, chain
        if stage is None:
            return UNKNOWN, {"point": repr(p), "start": k,
                             "reason": f"no escape within depth {depth}"}, chain
        escapes.append({"start": k, "escape_stage": stage})
    return PASS, {"point": repr(p), "escapes": escapes}, chain


def _limit_gdelta_cell(space, depth):
    """For filter spaces: is the limit point itself a countable
    intersection of opens in the base space?"""
    if not space.filter.has_countable_base:
        return UNKNOWN, {"reason": "no countable base declared"}
    stages = []
    for m in range(min(16, depth)):
        hit = None
        for n in range(depth + 1):
            if not space.desc_member(space.chain_desc(FILTER_POINT, n), m):
                hit = n
                break
        if hit is None:
            return UNKNOWN, {"reason": f"natural {m} survives every stage "
                             f"below {depth}"}
        stages.append(hit)
    return PASS, {"evicted_at": stages}


def diagnose(space, depth: int = 20) -> Report:
    """Run all probes; cells are pass / fail / unknown-at-depth."""
    report = Report(title=f"diagnose:{space.kind}")

    iso = isolated_dense_check(space, depth=min(depth, 24))
    report.extend(iso)
    report.add("isolated-dense", iso.meta["verdict"], witness=iso.counts)
    report.meta["isolated_dense"] = iso.meta["verdict"]

    status, witness, family = _discrete_clopen_probe(space, depth)
    if family is not None:
        witness["family"] = [space.describe_desc(p.desc) for p in family.pieces]
        report.meta["objects"] = {"discrete_family": family}
    report.add("discrete-clopen-witness", status, witness=witness)
    report.meta["discrete_clopen"] = status

    status, witness, chain = _gdelta_probe(space, depth)
    report.add("gdelta-chain", status, witness=witness)
    report.meta["gdelta"] = status
    if chain is not None:
        report.meta.setdefault("objects", {})["gdelta_chain"] = tuple(chain)

    if space.kind == "xi":
        status, witness = _limit_gdelta_cell(space, depth)
        report.add("limit-point-gdelta-in-space", status, witness=witness)
        report.meta["limit_gdelta"] = status

    report.meta["depth"] = depth
    return report
