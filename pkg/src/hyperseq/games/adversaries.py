"""Adversaries for the refinement game: the side trying to trap the responder.

Every adversary exposes ``move(transcript) -> (open, certificate)``.
The certificate is None exactly on the opening move.  Adversaries are
deterministic given their construction arguments, so episodes replay
bit for bit from a seed.
"""
from __future__ import annotations

import json
import random
from itertools import islice

from ..errors import CertificateRefusal, PresentationError, UndecidedAtDepth
from ..vietoris import InclusionCertificate, canonical_open, include
from .transcript import IllegalMove

_RETRYABLE = (PresentationError, UndecidedAtDepth, CertificateRefusal)


def opening_open(space, depth=64):
    """A legal first move: the whole space if describable, else the first
    basic piece seen to hold a non-isolated point."""
    whole = space.whole_desc()
    if whole is not None:
        return canonical_open(space, [whole])
    for desc in islice(space.basis_stream(), depth):
        if space.pick_nonisolated(desc, depth=depth) is not None:
            return canonical_open(space, [desc])
    raise PresentationError(
        f"no opening piece with a non-isolated point in {space.kind}")


def identity_refinement(parent):
    """Child equal to parent, certified piece by piece."""
    child = canonical_open(parent.space, [p.desc for p in parent.pieces])
    n = len(parent.pieces)
    idx = tuple(range(n))
    return child, InclusionCertificate(child, parent, idx, idx)


class RandomAdversary:
    """Seeded adversary mixing four refinement templates.

    Per move it samples a template and a target piece: keep everything,
    shrink around a non-isolated point, pull an isolated point out into
    its own singleton piece, or split a crowded piece in two.  Templates
    that do not apply to the sampled target are skipped; after a few dry
    attempts it falls back to the identity refinement, which is always
    legal.
    """

    def __init__(self, space, seed, depth=24):
        self.space = space
        self.rng = random.Random(seed)
        self.depth = depth

    def move(self, transcript):
        if not transcript.moves:
            return opening_open(self.space, depth=max(self.depth, 64)), None
        parent = transcript.last_open
        for _ in range(8):
            try:
                built = self._attempt(parent)
            except _RETRYABLE:
                continue
            if built is None:
                continue
            cert = include(built, parent)
            if cert is not None:
                return built, cert
        return identity_refinement(parent)

    def _attempt(self, parent):
        space = self.space
        descs = [p.desc for p in parent.pieces]
        k = self.rng.randrange(len(descs))
        template = self.rng.randrange(4)
        if template == 0:
            return canonical_open(space, descs)
        if template == 1:
            p = space.pick_nonisolated(descs[k], depth=self.depth)
            if p is None:
                return None
            step = 1 + self.rng.randrange(4)
            descs[k] = space.shrink_around(descs[k], p, step)
            return canonical_open(space, descs)
        if template == 2:
            if space.desc_is_singleton(descs[k]):
                return None
            q = space.pick_isolated(descs[k], depth=self.depth)
            if q is None:
                return None
            rest = space.remove_points(descs[k], frozenset({q}))
            if rest is None:
                return None
            descs[k] = rest
            descs.append(space.singleton_desc(q))
            return canonical_open(space, descs)
        parts = space.split_desc(descs[k], 2)
        if parts is None:
            return None
        descs[k:k + 1] = list(parts)
        return canonical_open(space, descs)


class SigmaAdversary:
    """Adversary for duplicate-over-product spaces with a bounded appetite:
    each move touches at most `fresh_cap` coordinate indices that the
    previous open left unconstrained.

    Templates: keep, deepen one existing coordinate constraint by a
    sampled bit, constrain up to `fresh_cap` brand new indices, or pull a
    twin point out into a singleton.
    """

    def __init__(self, space, seed, fresh_cap=5, depth=24):
        self.space = space
        self.rng = random.Random(seed)
        self.fresh_cap = max(1, fresh_cap)
        self.depth = depth

    def move(self, transcript):
        if not transcript.moves:
            return opening_open(self.space, depth=max(self.depth, 64)), None
        parent = transcript.last_open
        for _ in range(8):
            try:
                built = self._attempt(parent)
            except _RETRYABLE:
                continue
            if built is None:
                continue
            cert = include(built, parent)
            if cert is not None:
                return built, cert
        return identity_refinement(parent)

    def _hat_index(self, descs):
        for i, d in enumerate(descs):
            if d[0] == "hat":
                return i
        return None

    def _attempt(self, parent):
        space = self.space
        base = space.base
        descs = [p.desc for p in parent.pieces]
        h = self._hat_index(descs)
        if h is None:
            return canonical_open(space, descs)
        _tag, inner, minus = descs[h]
        constraints = dict(inner[1])
        template = self.rng.randrange(4)
        if template == 1 and constraints:
            idx = self.rng.choice(sorted(constraints))
            bit = self.rng.randrange(2)
            constraints[idx] = constraints[idx] + (bit,)
        elif template == 2:
            top = max(constraints, default=-1) + 1
            for j in range(1 + self.rng.randrange(self.fresh_cap)):
                constraints[top + j] = (1,) if self.rng.randrange(2) else (0, 1)
        elif template == 3:
            q = space.pick_isolated(descs[h], depth=self.depth)
            if q is None:
                return None
            rest = space.remove_points(descs[h], frozenset({q}))
            if rest is None:
                return None
            descs[h] = rest
            descs.append(space.singleton_desc(q))
            return canonical_open(space, descs)
        else:
            return canonical_open(space, descs)
        new_inner = ("sg", frozenset(constraints.items()))
        kept = frozenset(y for y in minus if base.desc_member(new_inner, y))
        descs[h] = ("hat", new_inner, kept)
        return canonical_open(space, descs)


class ScriptedAdversary:
    """Plays a fixed list of desc lists, one per move, certificates computed
    on the spot.  Running past the script, or scripting an illegal open,
    faults the adversary, which is exactly what scripted tests probe."""

    def __init__(self, space, scripts):
        self.space = space
        self.scripts = [list(s) for s in scripts]

    def move(self, transcript):
        turn = len(transcript.moves) // 2
        if turn >= len(self.scripts):
            raise IllegalMove("script exhausted", turn=turn)
        copen = canonical_open(self.space, self.scripts[turn])
        if not transcript.moves:
            return copen, None
        cert = include(copen, transcript.last_open)
        if cert is None:
            raise IllegalMove("scripted move is not a certified refinement",
                              turn=turn)
        return copen, cert


class InteractiveAdversary:
    """Reads one JSON desc list per move from `reader`, echoes legality
    feedback to `writer`.  A rejected line can be retried; end of input
    faults."""

    def __init__(self, space, reader, writer, from_json=None):
        self.space = space
        self.reader = reader
        self.writer = writer
        self.from_json = from_json or (lambda obj: obj)

    def _say(self, text):
        self.writer.write(text + "\n")
        self.writer.flush()

    def move(self, transcript):
        turn = len(transcript.moves) // 2
        self._say(f"# move {turn}: enter a JSON list of piece descriptors")
        for line in self.reader:
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
                descs = [self.from_json(d) for d in raw]
                copen = canonical_open(self.space, descs)
            except (ValueError, PresentationError) as err:
                self._say(f"# rejected: {err}")
                continue
            if not transcript.moves:
                self._say("# accepted")
                return copen, None
            cert = include(copen, transcript.last_open)
            if cert is None:
                self._say("# rejected: not a certified refinement of the "
                          "previous open")
                continue
            self._say("# accepted")
            return copen, cert
        raise IllegalMove("input ended before a legal move", turn=turn)
