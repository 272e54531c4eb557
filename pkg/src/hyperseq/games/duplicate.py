"""Strategies for doubled spaces, where every base point carries an
isolated twin.

Both strategies ride the same skeleton: keep exactly one lifted piece,
shrink it hard each round, and turn every twin the adversary exposes
into a permanently committed singleton.  The metric variant halves the
lifted piece's diameter per round and keeps closures nested; the
product variant pins a growing block of coordinates instead and commits
two fresh twins per round on untouched coordinates.
"""
from __future__ import annotations

from ..errors import PresentationError, UndecidedAtDepth
from ..points import DupPoint, cantor_point, dyadic, sigma_point
from ..sequences import make_seq
from ..vietoris import canonical_open
from .strategies import Strategy, _certify_or_die, fallback_member


def _diameter_exponent(base, inner):
    if inner[0] == "cyl":
        return len(inner[1])
    if inner[0] == "dy":
        return inner[1]
    raise PresentationError(f"no diameter bound for {inner!r}")


def _shrink_inner(base, inner, target_exp):
    """A sub-descriptor of `inner` with diameter below 2^-target_exp whose
    closure sits inside `inner`."""
    if inner[0] == "cyl":
        bits = inner[1]
        return ("cyl", bits + (0,) * max(0, target_exp - len(bits)))
    if inner[0] == "dy":
        level, num = inner[1], inner[2]
        want = max(target_exp, level + 2)
        return ("dy", want, (num << (want - level)) + 1)
    raise PresentationError(
        "metric shrinking needs a binary-tree or interval base")


def _center(base, inner):
    if inner[0] == "cyl":
        return cantor_point(inner[1])
    if inner[0] == "dy":
        return dyadic(inner[2], inner[1])
    raise PresentationError(f"no canonical center for {inner!r}")


def _closure_nested(base, child, parent):
    if child[0] == "cyl":
        return base.desc_contained(child, parent)
    if child[0] == "dy":
        lo_c, hi_c = dyadic(child[2], child[1]), dyadic(child[2] + 1, child[1])
        lo_p, hi_p = dyadic(parent[2], parent[1]), dyadic(parent[2] + 1, parent[1])
        # the child's closed hull includes hi_c; the parent does not include hi_p
        return lo_c >= lo_p and hi_c < hi_p
    return False


def _absorb(parent, committed):
    """Adversary twin singletons become committed points, in piece order."""
    fresh = []
    for piece in parent.pieces:
        if piece.desc[0] == "d1" and piece.desc[1] not in committed:
            committed.append(piece.desc[1])
            fresh.append(piece.desc[1])
    return fresh


def _hat_indices(parent):
    return [i for i, piece in enumerate(parent.pieces)
            if piece.desc[0] == "hat"]


def _commit_extra_hats(space, parent, hats, committed, fresh):
    for i in hats[1:]:
        piece = parent.pieces[i]
        if any(piece.member(DupPoint(y, 1)) for y in committed):
            continue
        tw = space.pick_isolated(
            piece.desc,
            exclude=frozenset(DupPoint(y, 1) for y in committed), depth=128)
        if tw is None:
            raise UndecidedAtDepth("no twin found in a stray lifted piece")
        committed.append(tw.base)
        fresh.append(tw.base)


class DuplicateMetricStrategy(Strategy):
    """Shrinks the lifted piece below 2^-(round+1) in diameter with nested
    closures, committing one fresh twin inside it per round."""

    def __init__(self, space):
        if not hasattr(space, "base"):
            raise PresentationError("expects a doubled space over a metric base")
        self.space = space

    def respond(self, transcript):
        space = self.space
        base = space.base
        parent = transcript.last_open
        prev = transcript.last_state()
        committed = list(prev["committed"]) if prev else []
        r = transcript.rounds

        hats = _hat_indices(parent)
        if not hats:
            raise UndecidedAtDepth("no lifted piece to continue in")
        home = hats[0]
        fresh = _absorb(parent, committed)
        _commit_extra_hats(space, parent, hats, committed, fresh)

        _tag, inner_p, minus_p = parent.pieces[home].desc
        target = r + 2
        inner_c = _shrink_inner(base, inner_p, target)
        center = _center(base, inner_c)
        avoid = frozenset(committed) | frozenset(minus_p) | {center}
        y = base.pick_point(inner_c, exclude=avoid, depth=256)
        if y is None:
            raise UndecidedAtDepth("no fresh twin in the shrunken piece")
        committed.append(y)
        fresh.append(y)

        minus_c = frozenset(z for z in frozenset(minus_p) | frozenset(committed)
                            if base.desc_member(inner_c, z))
        hat_c = ("hat", inner_c, minus_c)
        descs = [("d1", z) for z in committed] + [hat_c]
        child = canonical_open(space, descs)
        cert = _certify_or_die(child, parent, "duplicate-metric")

        exp_c = _diameter_exponent(base, inner_c)
        nesting = (_closure_nested(base, inner_c, inner_p)
                   and all(z in minus_c or not base.desc_member(inner_c, z)
                           for z in minus_p))
        state = {"committed": tuple(committed), "hat": hat_c,
                 "ledger": {"round": r + 1,
                            "diameter_exponent": exp_c,
                            "delta_ok": exp_c >= r + 2,
                            "nesting_ok": nesting,
                            "fresh_twins": len(fresh)}}
        return child, cert, state

    def extract_limit(self, transcript, depth=24):
        state = transcript.last_state()
        if state is None:
            return fallback_member(transcript, depth=depth)
        space = self.space
        _tag, inner, _minus = state["hat"]
        limit = DupPoint(_center(space.base, inner), 0)
        twins = tuple(DupPoint(y, 1) for y in state["committed"])

        def terms():
            for t in twins:
                yield t
            for t in space.tail_stream(limit, state["hat"],
                                       exclude=frozenset(twins)):
                yield t

        return make_seq(space, limit, terms=terms(),
                        name="duplicate-metric-member")


def duplicate_metric_strategy(space) -> DuplicateMetricStrategy:
    return DuplicateMetricStrategy(space)


def _pair_code(k, j):
    return (k + j) * (k + j + 1) // 2 + j


def _decode_pair(m):
    s = 0
    while (s + 1) * (s + 2) // 2 <= m:
        s += 1
    j = m - s * (s + 1) // 2
    return s - j, j


class SigmaDuplicateStrategy(Strategy):
    """Doubled small-support product responder.

    Round r pins coordinates 0..r, every coordinate the adversary has
    constrained, and the full support of every committed twin, each to a
    zero-padded prefix of length at least r+2.  Two fresh twins go on
    brand-new coordinates every round.  The pinning is deliberately
    wider than the paired support slots the soundness argument needs, so
    the slot-coverage ledger is implied rather than juggled."""

    def __init__(self, space):
        if not hasattr(space, "base") or space.base.kind != "sigma":
            raise PresentationError(
                "expects a doubled space over the small-support product")
        self.space = space

    def respond(self, transcript):
        space = self.space
        base = space.base
        parent = transcript.last_open
        prev = transcript.last_state()
        committed = list(prev["committed"]) if prev else []
        round_supports = [tuple(t) for t in prev["round_supports"]] if prev else []
        r = transcript.rounds

        hats = _hat_indices(parent)
        if not hats:
            raise UndecidedAtDepth("no lifted piece to continue in")
        home = hats[0]
        fresh = _absorb(parent, committed)
        _commit_extra_hats(space, parent, hats, committed, fresh)

        _tag, inner_p, minus_p = parent.pieces[home].desc
        constraints = dict(inner_p[1])
        pinned = set(range(r + 1)) | set(constraints)
        for y in committed:
            pinned |= set(y.support)
        new_constraints = {}
        for i in sorted(pinned):
            bits = tuple(constraints.get(i, ()))
            want = max(r + 2, len(bits))
            new_constraints[i] = bits + (0,) * (want - len(bits))
        inner_c = ("sg", frozenset(new_constraints.items()))

        prefix_coords = {i: cantor_point(b) for i, b in new_constraints.items()}
        top = max(pinned, default=-1) + 1
        added = 0
        idx = top
        while added < 2:
            coords = dict(prefix_coords)
            coords[idx] = (1,)
            y = sigma_point(coords)
            idx += 1
            if y in committed or y in minus_p:
                continue
            committed.append(y)
            fresh.append(y)
            added += 1

        minus_c = frozenset(z for z in frozenset(minus_p) | frozenset(committed)
                            if base.desc_member(inner_c, z))
        hat_c = ("hat", inner_c, minus_c)
        descs = [("d1", z) for z in committed] + [hat_c]
        child = canonical_open(space, descs)
        cert = _certify_or_die(child, parent, "sigma-duplicate")

        round_supports.append(tuple(sorted(
            {i for y in fresh for i in y.support})))
        support = set(new_constraints)
        slots_ok = True
        for m in range(r + 1):
            k, j = _decode_pair(m)
            if k >= len(round_supports):
                continue
            block = round_supports[k]
            if not block:
                continue
            if block[min(j, len(block) - 1)] not in support:
                slots_ok = False
        state = {"committed": tuple(committed),
                 "round_supports": tuple(round_supports),
                 "hat": hat_c,
                 "ledger": {"round": r + 1,
                            "fresh": len(fresh),
                            "support_pins": len(new_constraints),
                            "slots_covered": slots_ok}}
        return child, cert, state

    def extract_limit(self, transcript, depth=24):
        state = transcript.last_state()
        if state is None:
            return fallback_member(transcript, depth=depth)
        space = self.space
        _tag, inner, _minus = state["hat"]
        z = sigma_point({i: cantor_point(b) for i, b in inner[1]})
        limit = DupPoint(z, 0)
        twins = tuple(DupPoint(y, 1) for y in state["committed"])

        def terms():
            for t in twins:
                yield t
            for t in space.tail_stream(limit, state["hat"],
                                       exclude=frozenset(twins)):
                yield t

        return make_seq(space, limit, terms=terms(),
                        name="sigma-duplicate-member")


def sigma_duplicate_strategy(space) -> SigmaDuplicateStrategy:
    return SigmaDuplicateStrategy(space)
