"""Canonical basic sets of the hyperspace of convergent sequences.

A canonical open is a finite family of pairwise disjoint basic pieces;
its hyperspace extension holds the closed sets covered by the union and
meeting every piece.  Membership for a certified sequence is decided
exactly: beyond its convergence modulus the tail lives inside the piece
around the limit, so only a computable head needs inspection.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, count, islice

from .errors import CertificateRefusal, PresentationError, UndecidedAtDepth
from .sequences import ConvSeq, make_seq
from .spaces.base import BasicOpen, SpacePresentation

DISJOINT_DEPTH = 50


class CanonicalOpen:
    """Finite disjoint family of basic pieces, as a hyperspace open set."""

    __slots__ = ("space", "pieces")

    def __init__(self, space: SpacePresentation, pieces):
        self.space = space
        self.pieces = tuple(pieces)
        if not self.pieces:
            raise PresentationError("a canonical open needs at least one piece")
        for a, b in combinations(self.pieces, 2):
            if not space.desc_disjoint(a.desc, b.desc):
                raise PresentationError(
                    f"pieces overlap: {space.describe_desc(a.desc)} vs "
                    f"{space.describe_desc(b.desc)}")

    def union_member(self, p) -> bool:
        return any(piece.member(p) for piece in self.pieces)

    def piece_of(self, p):
        for i, piece in enumerate(self.pieces):
            if piece.member(p):
                return i
        return None

    def nondiscrete_piece(self, depth: int = 32):
        """Index of a piece holding a non-isolated point, scanned to depth."""
        for i, piece in enumerate(self.pieces):
            if self.space.pick_nonisolated(piece.desc, depth=depth) is not None:
                return i
        return None

    def __len__(self):
        return len(self.pieces)

    def __eq__(self, other):
        return (isinstance(other, CanonicalOpen)
                and self.space.signature == other.space.signature
                and tuple(p.desc for p in self.pieces)
                == tuple(p.desc for p in other.pieces))

    def __hash__(self):
        return hash((self.space.signature, tuple(p.desc for p in self.pieces)))

    def __repr__(self):
        inner = ",".join(self.space.describe_desc(p.desc) for p in self.pieces)
        return f"<{inner}>"


def canonical_open(space: SpacePresentation, descs) -> CanonicalOpen:
    return CanonicalOpen(space, [space.open(d) for d in descs])


# ---------------------------------------------------------------------------
# membership


def member(seq: ConvSeq, copen: CanonicalOpen) -> bool:
    """Exact hyperspace membership of a certified sequence.

    Raises UndecidedAtDepth when no local chain element fits inside the
    piece around the limit; raises CertificateRefusal when the sequence
    cannot certify a modulus for that chain element.
    """
    space = copen.space
    if seq.space.signature != space.signature:
        raise PresentationError("sequence and open live in different spaces")
    home = copen.piece_of(seq.limit)
    if home is None:
        return False
    home_desc = copen.pieces[home].desc
    ell = space.chain_index_inside(seq.limit, home_desc)
    if ell is None:
        raise UndecidedAtDepth(
            "no local chain element found inside the limit piece",
            piece=space.describe_desc(home_desc))
    n = seq.modulus(ell)
    head = seq.terms(n)
    for t in head:
        if not copen.union_member(t):
            return False
    for i, piece in enumerate(copen.pieces):
        if i == home:
            continue
        if not any(piece.member(t) for t in head):
            return False
    return True


# ---------------------------------------------------------------------------
# inclusion certificates


@dataclass(frozen=True)
class InclusionCertificate:
    """Syntactic witness that the child extension sits inside the parent's.

    parent_map sends each child piece to a parent piece containing it;
    onto picks, for each parent piece, a child piece inside it.
    """

    child: CanonicalOpen
    parent: CanonicalOpen
    parent_map: tuple
    onto: tuple

    def verify(self) -> bool:
        space = self.parent.space
        if self.child.space.signature != space.signature:
            return False
        if len(self.parent_map) != len(self.child.pieces):
            return False
        if len(self.onto) != len(self.parent.pieces):
            return False
        for ci, pi in enumerate(self.parent_map):
            if not space.desc_contained(self.child.pieces[ci].desc,
                                        self.parent.pieces[pi].desc):
                return False
        for pi, ci in enumerate(self.onto):
            if self.parent_map[ci] != pi:
                return False
        return True


def include(child: CanonicalOpen, parent: CanonicalOpen):
    """Certificate that child's extension is inside parent's, else None."""
    if child.space.signature != parent.space.signature:
        return None
    space = parent.space
    parent_map = []
    for cp in child.pieces:
        home = None
        for pi, pp in enumerate(parent.pieces):
            if space.desc_contained(cp.desc, pp.desc):
                home = pi
                break
        if home is None:
            return None
        parent_map.append(home)
    onto = []
    for pi in range(len(parent.pieces)):
        try:
            onto.append(parent_map.index(pi))
        except ValueError:
            return None
    return InclusionCertificate(child, parent, tuple(parent_map), tuple(onto))


def enumerate_canonical_opens(space: SpacePresentation, depth: int,
                              max_pieces: int = 3):
    """All canonical opens buildable from the first `depth` basis pieces.

    Pairs without a disjointness certificate are skipped, so the stream
    under-approximates; that is the right direction for every consumer.
    """
    descs = [b.desc for b in space.iter_basis(depth)]
    for size in range(1, max_pieces + 1):
        for combo in combinations(descs, size):
            ok = True
            for a, b in combinations(combo, 2):
                try:
                    if not space.desc_disjoint(a, b):
                        ok = False
                except PresentationError:
                    ok = False
                if not ok:
                    break
            if ok:
                yield canonical_open(space, combo)


def construct_member(copen: CanonicalOpen, depth: int = 64) -> ConvSeq:
    """A certified sequence inside the canonical open, built from its data.

    Possible exactly when some piece holds a non-isolated point: the
    limit goes there, every other piece contributes one attachment, and
    the tail walks the local chain inside the home piece.
    """
    space = copen.space
    home = copen.nondiscrete_piece(depth=depth)
    if home is None:
        raise PresentationError(
            "no piece holds a non-isolated point, so the extension misses "
            "every convergent sequence")
    home_desc = copen.pieces[home].desc
    limit = space.pick_nonisolated(home_desc, depth=depth)
    attachments = []
    for i, piece in enumerate(copen.pieces):
        if i == home:
            continue
        p = space.pick_point(piece.desc, depth=depth)
        if p is None:
            raise UndecidedAtDepth(
                "a piece revealed no point to attach",
                piece=space.describe_desc(piece.desc))
        attachments.append(p)
    ell = space.chain_index_inside(limit, home_desc)
    if ell is None:
        raise UndecidedAtDepth(
            "no local chain element inside the home piece",
            piece=space.describe_desc(home_desc))
    chain = space.chain_desc(limit, ell)

    def terms():
        for p in attachments:
            yield p
        for p in space.tail_stream(limit, chain,
                                   exclude=frozenset(attachments)):
            yield p

    return make_seq(space, limit, terms(), name="constructed-member")


# ---------------------------------------------------------------------------
# the doubled-space pi-base


def pi_base_enum(dup_space, depth: int):
    """Stream the pi-base of a doubled space's hyperspace.

    Every emitted set is one lifted piece around non-isolated points plus
    finitely many twin singletons; the pools for both come from the first
    `depth` entries of the underlying enumerations.
    """
    if dup_space.kind != "duplicate":
        raise PresentationError("the pi-base enumeration expects a doubled space")
    base = dup_space.base
    hats = list(islice(base.basis_stream(), depth))
    twins = list(islice(base.point_stream(), depth))
    seen = set()
    for t in range(depth + 1):
        for inner in hats[:t + 1]:
            for size in range(0, t + 1):
                for combo in combinations(twins[:t], size):
                    minus = frozenset(x for x in combo
                                      if base.desc_member(inner, x))
                    descs = (("hat", inner, minus),) + tuple(
                        ("d1", x) for x in combo)
                    if descs in seen:
                        continue
                    seen.add(descs)
                    yield canonical_open(dup_space, descs)


def pi_base_refine(dup_space, copen: CanonicalOpen):
    """Run the pi-base lemma's refinement on one canonical open.

    Returns (refined, certificate): the refined set keeps one shrunken
    lifted piece and replaces every other piece by a twin singleton
    inside it.
    """
    if dup_space.kind != "duplicate":
        raise PresentationError("refinement expects a doubled space")
    base = dup_space.base
    hat_idx = None
    for i, piece in enumerate(copen.pieces):
        if piece.desc[0] == "hat":
            hat_idx = i
            break
    if hat_idx is None:
        raise PresentationError("no lifted piece to anchor the refinement")

    new_descs = [None] * len(copen.pieces)
    for i, piece in enumerate(copen.pieces):
        if i == hat_idx:
            continue
        d = piece.desc
        if d[0] == "d1":
            new_descs[i] = d
        else:
            tag, inner, minus = d
            y = base.pick_point(inner, exclude=minus, depth=64)
            if y is None:
                raise UndecidedAtDepth("no twin available inside a piece")
            new_descs[i] = ("d1", y)

    tag, inner, minus = copen.pieces[hat_idx].desc
    x0 = base.pick_point(inner, depth=4)
    if x0 is None:
        raise UndecidedAtDepth("empty lifted piece")
    s = base.chain_index_inside(x0, inner)
    if s is None:
        raise UndecidedAtDepth("no chain element inside the lifted piece")
    shrunk = base.chain_desc(x0, s)
    new_minus = frozenset(y for y in minus if base.desc_member(shrunk, y))
    new_descs[hat_idx] = ("hat", shrunk, new_minus)

    refined = canonical_open(dup_space, new_descs)
    cert = InclusionCertificate(refined, copen,
                                tuple(range(len(copen.pieces))),
                                tuple(range(len(copen.pieces))))
    if not cert.verify():
        raise PresentationError("refinement produced an uncertified inclusion")
    return refined, cert


# ---------------------------------------------------------------------------
# term pieces: small opens isolating one term from the rest of a sequence


def _term_piece(seq: ConvSeq, j: int, coindex: int, horizon: int):
    """A piece around term j containing no other point of the sequence.

    horizon bounds the term indices that must be explicitly separated;
    terms at or beyond it are assumed inside the limit chain at stage
    >= coindex, which the piece is kept disjoint from.
    """
    space = seq.space
    t = seq.term(j)
    if space.isolated(t):
        return space.singleton_desc(t)
    s = max(space.separation_index(t, seq.limit), coindex)
    for i in range(horizon):
        if i != j:
            s = max(s, space.separation_index(t, seq.term(i)))
    return space.chain_desc(t, s)


def _exclusion_stage(seq: ConvSeq, upto: int) -> int:
    """Chain stage at the limit avoiding terms 0..upto-1."""
    space = seq.space
    ell = 0
    for i in range(upto):
        ell = max(ell, space.separation_index(seq.limit, seq.term(i)))
    return ell


# ---------------------------------------------------------------------------
# discrete closed families


@dataclass(frozen=True)
class SeparatedFamily:
    members: tuple
    separators: tuple

    def pairs(self):
        return list(zip(self.members, self.separators))


def discrete_closed_family(seq: ConvSeq, depth: int) -> SeparatedFamily:
    """Tails of one sequence, each with a canonical open isolating it.

    Member k is the sequence minus its first k terms; its separator is a
    canonical open containing member k and no other member, which makes
    the family discrete (and, being infinite in the limit, witnesses the
    failure of countable compactness at desk scale).
    """
    space = seq.space
    members = []
    separators = []
    for k in range(depth):
        tail_seq = make_seq(space, seq.limit,
                            (seq.term(k + j) for j in count()),
                            name=f"{seq.name or 'seq'}-drop{k}")
        members.append(tail_seq)

        ell = _exclusion_stage(seq, k + 1)
        n = seq.modulus(ell)
        chain = space.chain_desc(seq.limit, ell)
        descs = [_term_piece(seq, k, ell, max(n, k + 1))]
        for j in range(k + 1, n):
            if not space.desc_member(chain, seq.term(j)):
                descs.append(_term_piece(seq, j, ell, n))
        descs.append(chain)
        separators.append(canonical_open(space, descs))
    return SeparatedFamily(tuple(members), tuple(separators))


# ---------------------------------------------------------------------------
# non-compactness witnesses


@dataclass(frozen=True)
class ClosedConstraint:
    """One closed slot of a witness stage.

    mode "cl" is the closed hull of `outer`; mode "cl-meet" is the
    closed hull of `outer` intersected with the open set `inner`.
    """

    space: SpacePresentation
    mode: str
    outer: tuple
    inner: tuple = None

    def member(self, p) -> bool:
        if self.mode == "cl":
            return self.space.desc_closure_member(self.outer, p)
        return (self.space.desc_closure_member(self.outer, p)
                and self.space.desc_member(self.inner, p))

    def open_part(self):
        return self.inner if self.mode == "cl-meet" else self.outer

    def __repr__(self):
        if self.mode == "cl":
            return f"cl{self.space.describe_desc(self.outer)}"
        return (f"cl{self.space.describe_desc(self.outer)}&"
                f"{self.space.describe_desc(self.inner)}")


class NoncompactWitness:
    """The decreasing closed stages refuting local compactness at a point.

    Stage t shrinks the piece around each anchor x_i to its stage-(s_i+t)
    chain element (taken closed) and cuts the limit piece with the
    stage-(ell0+t) chain at the limit.  Every stage holds a sequence, yet
    any single member of the hyperspace escapes some stage.
    """

    def __init__(self, seq: ConvSeq, refined: CanonicalOpen, anchors,
                 anchor_stages, ell0: int):
        self.seq = seq
        self.space = refined.space
        self.refined = refined
        self.anchors = tuple(anchors)
        self.anchor_stages = tuple(anchor_stages)
        self.ell0 = ell0

    def stage(self, t: int):
        space = self.space
        out = []
        for x, s in zip(self.anchors, self.anchor_stages):
            out.append(ClosedConstraint(space, "cl", space.chain_desc(x, s + t)))
        limit_piece = self.refined.pieces[-1].desc
        out.append(ClosedConstraint(space, "cl-meet", limit_piece,
                                    space.chain_desc(self.seq.limit,
                                                     self.ell0 + t)))
        return out

    def stages(self, depth: int):
        return [self.stage(t) for t in range(depth)]

    def stage_member(self, t: int, other: ConvSeq) -> bool:
        """Closed-Vietoris membership of a certified sequence in stage t."""
        space = self.space
        constraints = self.stage(t)
        homes = [i for i, c in enumerate(constraints) if c.member(other.limit)]
        if not homes:
            return False
        home = homes[0]
        ell = space.chain_index_inside(other.limit,
                                       constraints[home].open_part())
        if ell is None:
            raise UndecidedAtDepth("no chain element inside the home constraint")
        n = other.modulus(ell)
        head = other.terms(n)
        for p in head:
            if not any(c.member(p) for c in constraints):
                return False
        for i, c in enumerate(constraints):
            if i == home:
                continue
            if not any(c.member(p) for p in head):
                return False
        return True

    def stage_witness(self, t: int) -> ConvSeq:
        """A sequence living inside stage t, built constructively."""
        space = self.space
        anchors = self.anchors

        def terms():
            for x in anchors:
                yield x
            inner = space.chain_desc(self.seq.limit, self.ell0 + t)
            for p in space.tail_stream(self.seq.limit, inner,
                                       exclude=frozenset(anchors)):
                yield p

        return make_seq(space, self.seq.limit, terms(),
                        name=f"stage{t}-witness")

    def exclusion_stage(self, other: ConvSeq, bound: int):
        """First stage excluding the given sequence, or None below bound."""
        for t in range(bound):
            try:
                if not self.stage_member(t, other):
                    return t
            except (CertificateRefusal, UndecidedAtDepth):
                return t
        return None


def noncompact_witness(seq: ConvSeq, copen: CanonicalOpen,
                       depth: int) -> NoncompactWitness:
    """Build the stage family refuting compactness of any neighborhood.

    Requires seq in copen.  The canonical open is refined so each
    non-limit piece meets the sequence in exactly one anchor point and
    the closed hulls stay pairwise disjoint.
    """
    space = copen.space
    if not member(seq, copen):
        raise PresentationError("the sequence must lie in the canonical open")
    home = copen.piece_of(seq.limit)
    home_desc = copen.pieces[home].desc
    ell = space.chain_index_inside(seq.limit, home_desc)
    n = seq.modulus(ell)
    head = seq.terms(n)

    anchors = []
    anchor_descs = []
    anchor_stages = []
    for i, piece in enumerate(copen.pieces):
        if i == home:
            continue
        x = next(t for t in head if piece.member(t))
        d = _term_piece(seq, head.index(x), ell, n)
        # keep the shrunken piece inside the original one
        if not space.desc_contained(d, piece.desc):
            sub = space.chain_index_inside(x, piece.desc)
            if sub is None:
                raise UndecidedAtDepth("cannot shrink a piece around its anchor")
            if space.isolated(x):
                d = space.singleton_desc(x)
            else:
                bump = max(sub, _chain_stage_of(space, x, d))
                d = space.chain_desc(x, bump)
        anchors.append(x)
        anchor_descs.append(d)

    ell0 = max(ell, _exclusion_stage(seq, 0))
    for attempt in range(12):
        limit_desc = space.chain_desc(seq.limit, ell0)
        stages = []
        ok = True
        for x, d in zip(anchors, anchor_descs):
            s = _chain_stage_of(space, x, d)
            while not space.desc_closed_disjoint(space.chain_desc(x, s),
                                                 limit_desc):
                s += 1
                if s > ell0 + 64:
                    raise UndecidedAtDepth("cannot separate an anchor closure")
            stages.append(s)
        for (x1, s1), (x2, s2) in combinations(
                list(zip(anchors, stages)), 2):
            if not space.desc_closed_disjoint(space.chain_desc(x1, s1),
                                              space.chain_desc(x2, s2)):
                ok = False
                break
        if ok:
            refined = canonical_open(
                space,
                [space.chain_desc(x, s) for x, s in zip(anchors, stages)]
                + [limit_desc])
            return NoncompactWitness(seq, refined, anchors, stages, ell0)
        ell0 += 1
    raise UndecidedAtDepth("closed separation did not stabilize", depth=depth)


def _chain_stage_of(space, x, desc) -> int:
    """Stage index of a chain descriptor at x, recovered structurally."""
    if space.isolated(x):
        return 0
    idx = space.chain_index_inside(x, desc)
    return 0 if idx is None else idx
