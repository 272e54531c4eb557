"""Responder strategies: policies that keep the hyperspace trace nonempty.

A strategy answers each adversary open with a certified refinement and,
when the play ends, extracts one certified convergent sequence lying in
every open it played.  Strategies here are pure: everything they need
between rounds rides on the transcript as per-move state snapshots, so
a play replays identically from its record.
"""
from __future__ import annotations

from itertools import count

from ..errors import PresentationError, UndecidedAtDepth
from ..sequences import make_seq
from ..spaces import Subspace
from ..vietoris import canonical_open, construct_member, include


class Strategy:
    def respond(self, transcript):
        """-> (CanonicalOpen, InclusionCertificate, state dict)."""
        raise NotImplementedError

    def extract_limit(self, transcript, depth=24):
        raise NotImplementedError


def fallback_member(transcript, depth=24):
    """Any certified member of the last open; used when no state exists."""
    last = transcript.last_open
    if last is None:
        raise PresentationError("cannot extract from an empty transcript")
    return construct_member(last, depth=max(depth, 64))


def _certify_or_die(child, parent, who):
    cert = include(child, parent)
    if cert is None:
        raise PresentationError(
            f"{who}: response failed to certify against the previous open")
    return cert


class CommittedPointsStrategy(Strategy):
    """Keeps one shrinking tail piece around a limit point and a growing
    ledger of committed isolated points, one singleton piece each.

    Every adversary piece that lacks a committed point gets one, and one
    fresh point is committed from the limit's own piece each round, so
    the certificate chain forces the adversary to carry the whole ledger
    forever.  Extraction replays the ledger and then walks a tail stream
    of the final piece.
    """

    def __init__(self, space):
        self.space = space

    def respond(self, transcript):
        space = self.space
        parent = transcript.last_open
        prev = transcript.last_state()
        committed = list(prev["committed"]) if prev else []
        limit = prev["limit"] if prev else None
        prev_stage = prev["stage"] if prev else 0

        home = parent.piece_of(limit) if limit is not None else None
        if home is None:
            # first round, or the adversary shrank our limit away
            home = parent.nondiscrete_piece(depth=64)
            if home is None:
                raise UndecidedAtDepth(
                    "no piece with a visible non-isolated point")
            limit = space.pick_nonisolated(parent.pieces[home].desc, depth=128)
            if limit is None:
                raise UndecidedAtDepth(
                    "non-isolated point vanished between scans")
        home_desc = parent.pieces[home].desc

        entry = space.chain_index_inside(limit, home_desc)
        if entry is None:
            raise UndecidedAtDepth(
                "no local chain element inside the adversary's piece")
        stage = max(transcript.rounds + 1, prev_stage + 1, entry)

        fresh = []
        for i, piece in enumerate(parent.pieces):
            if i == home:
                continue
            if any(piece.member(c) for c in committed):
                continue
            c = space.pick_isolated(piece.desc,
                                    exclude=frozenset(committed), depth=128)
            if c is None:
                raise UndecidedAtDepth(
                    "no isolated point found to commit in a piece",
                    piece=space.describe_desc(piece.desc))
            committed.append(c)
            fresh.append(c)
        extra = space.pick_isolated(home_desc,
                                    exclude=frozenset(committed), depth=128)
        if extra is not None:
            committed.append(extra)
            fresh.append(extra)

        for c in committed:
            stage = max(stage, space.separation_index(limit, c))
        tail = space.chain_desc(limit, stage)
        cleaned = space.remove_points(tail, frozenset(committed))
        if cleaned is not None:
            tail = cleaned

        descs = [space.singleton_desc(c) for c in committed] + [tail]
        child = canonical_open(space, descs)
        cert = _certify_or_die(child, parent, "committed-points")
        state = {"committed": tuple(committed), "limit": limit,
                 "stage": stage, "tail": tail,
                 "ledger": {"round": transcript.rounds + 1,
                            "stage": stage,
                            "committed": len(committed),
                            "fresh": len(fresh)}}
        return child, cert, state

    def extract_limit(self, transcript, depth=24):
        state = transcript.last_state()
        if state is None:
            return fallback_member(transcript, depth=depth)
        space = self.space
        committed = state["committed"]
        limit = state["limit"]
        tail_desc = state["tail"]

        def terms():
            for c in committed:
                yield c
            for t in space.tail_stream(limit, tail_desc,
                                       exclude=frozenset(committed)):
                yield t

        return make_seq(space, limit, terms=terms(),
                        name="committed-points-member")


def baire_strategy_countable_base(filt):
    """Committed-points responder on the sequence space of a filter with a
    countable base; the base drives the tail streams."""
    from ..spaces import xi_space
    if not filt.has_countable_base:
        raise PresentationError(
            "this strategy walks a countable filter base; "
            f"{filt.name} does not present one")
    return CommittedPointsStrategy(xi_space(filt))


class ClopenPart(Subspace):
    """Clopen subpresentation carved out by finitely many basic pieces.

    Chain elements are bumped past the entry index of their point's home
    piece, so every chain descriptor denotes a subset of the region even
    under parent semantics.  That keeps descs built here usable as
    ambient-space pieces.
    """

    def __init__(self, parent, descs, name, crowded=False):
        self.part_descs = tuple(descs)
        for d in self.part_descs:
            parent.validate_desc(d)
        super().__init__(parent, self._in_region, name, crowded=crowded)

    def _in_region(self, p):
        return any(self.parent.desc_member(d, p) for d in self.part_descs)

    def home_piece(self, p):
        for d in self.part_descs:
            if self.parent.desc_member(d, p):
                return d
        return None

    def chain_desc(self, p, i):
        d = self.home_piece(p)
        if d is None:
            raise PresentationError("point lies outside the part region")
        entry = self.parent.chain_index_inside(p, d)
        if entry is None:
            raise UndecidedAtDepth(
                "no chain element inside the part around the point")
        return self.parent.chain_desc(p, max(i, entry))

    def whole_desc(self):
        if len(self.part_descs) == 1:
            return self.part_descs[0]
        return None


def clopen_part(parent, descs, name, crowded=False) -> ClopenPart:
    return ClopenPart(parent, descs, name, crowded=crowded)


class ComposeStrategy(Strategy):
    """Glues per-part responders along a dense set of isolated points.

    Round one picks the first part whose region shows a non-isolated
    point inside an adversary piece; that part's responder plays a
    private sub-game there, while every other adversary piece is frozen
    to a single isolated attachment point.  Later adversary pieces are
    routed by their own certificates: pieces inside frozen singletons
    stay frozen, pieces inside sub-game territory are forwarded to the
    part responder.  The extracted sequence is the sub-game's sequence
    with the frozen attachments spliced in front.
    """

    def __init__(self, space, dense, parts):
        self.space = space
        self.dense = tuple(dense) if dense is not None else None
        self.parts = []
        for part, sub in parts:
            if part.parent is not space:
                raise PresentationError(
                    "every part must present a region of the game space")
            self.parts.append((part, sub))
        if not self.parts:
            raise PresentationError("need at least one part to compose")

    def _attachment(self, desc):
        space = self.space
        if self.dense is not None:
            for p in self.dense:
                if space.desc_member(desc, p) and space.isolated(p):
                    return p
        p = space.pick_isolated(desc, depth=128)
        if p is None:
            raise UndecidedAtDepth(
                "no isolated attachment point found in a piece",
                piece=space.describe_desc(desc))
        return p

    def _open_round(self, transcript):
        from .transcript import Transcript
        parent = transcript.last_open
        chosen = None
        for i, piece in enumerate(parent.pieces):
            for gamma, (part, sub) in enumerate(self.parts):
                if part.pick_nonisolated(piece.desc, depth=128) is not None:
                    chosen = (i, gamma)
                    break
            if chosen:
                break
        if chosen is None:
            raise UndecidedAtDepth(
                "no part region shows a non-isolated point in any piece")
        home, gamma = chosen
        part, sub = self.parts[gamma]
        frozen = []
        for i, piece in enumerate(parent.pieces):
            if i != home:
                frozen.append(self._attachment(piece.desc))

        sub_transcript = Transcript()
        self._feed(sub_transcript, part, [parent.pieces[home].desc])
        return gamma, tuple(frozen), sub_transcript

    def _feed(self, sub_transcript, part, descs):
        # forward the adversary's relevant pieces into the sub-game
        from .transcript import EMPTY, Move
        sub_open = canonical_open(part, descs)
        if not sub_transcript.moves:
            sub_transcript.append(Move(EMPTY, sub_open))
            return
        cert = include(sub_open, sub_transcript.last_open)
        if cert is None:
            raise PresentationError(
                "adversary pieces do not project to a sub-game refinement")
        sub_transcript.append(Move(EMPTY, sub_open, inclusion=cert))

    def _later_round(self, transcript, prev):
        from .transcript import Transcript
        gamma = prev["part"]
        part, sub = self.parts[gamma]
        frozen = list(prev["frozen"])
        n_frozen = len(frozen)
        move = transcript.moves[-1]
        parent = move.open
        routing = move.inclusion.parent_map
        sub_descs = []
        for m, piece in enumerate(parent.pieces):
            if routing[m] >= n_frozen:
                sub_descs.append(piece.desc)
        if not sub_descs:
            raise PresentationError(
                "adversary abandoned the sub-game territory")
        sub_transcript = prev["sub"]
        replay = Transcript()
        for old in sub_transcript.moves:
            replay.append(old)
        self._feed(replay, part, sub_descs)
        return gamma, tuple(frozen), replay

    def respond(self, transcript):
        from .transcript import NONEMPTY, Move
        prev = transcript.last_state()
        if prev is None:
            gamma, frozen, sub_transcript = self._open_round(transcript)
        else:
            gamma, frozen, sub_transcript = self._later_round(transcript, prev)
        part, sub = self.parts[gamma]
        space = self.space

        sub_open, sub_cert, sub_state = sub.respond(sub_transcript)
        sub_transcript.append(Move(NONEMPTY, sub_open, inclusion=sub_cert,
                                   state=sub_state))

        descs = [space.singleton_desc(p) for p in frozen]
        descs.extend(piece.desc for piece in sub_open.pieces)
        child = canonical_open(space, descs)
        cert = _certify_or_die(child, transcript.last_open, "compose")
        state = {"part": gamma, "frozen": frozen, "sub": sub_transcript,
                 "ledger": {"round": transcript.rounds + 1,
                            "part": part.name,
                            "attachments": len(frozen),
                            "sub_pieces": len(sub_open)}}
        return child, cert, state

    def extract_limit(self, transcript, depth=24):
        state = transcript.last_state()
        if state is None:
            return fallback_member(transcript, depth=depth)
        part, sub = self.parts[state["part"]]
        frozen = state["frozen"]
        sub_seq = sub.extract_limit(state["sub"], depth=depth)

        def terms():
            for p in frozen:
                yield p
            for k in count():
                yield sub_seq.term(k)

        return make_seq(self.space, sub_seq.limit, terms=terms(),
                        name="composed-member")


def compose_strategy(space, dense, parts) -> ComposeStrategy:
    """`parts` is a list of (clopen subpresentation, Strategy) pairs whose
    regions cover the non-isolated points the adversary can reach;
    `dense` optionally enumerates isolated points to use as attachments."""
    return ComposeStrategy(space, dense, parts)
