"""Meagerness machinery for hyperspaces over crowded bases.

A canonical open with at least two pieces splits into countably many
slabs: fix one piece and an exact count of sequence points falling
outside it.  Each slab is avoidable inside any refinement by splitting
off enough fresh sub-pieces, which is the whole meagerness argument in
executable form.
"""
from __future__ import annotations

from itertools import count

from ..errors import PresentationError, UndecidedAtDepth
from ..points import FILTER_POINT
from ..sequences import make_seq
from ..vietoris import CanonicalOpen, canonical_open, construct_member, include, member


class NwdPiece:
    """One slab N(U, n): members of the ambient open whose limit lies in
    the distinguished piece U and that have exactly n points elsewhere."""

    __slots__ = ("copen", "piece_index", "n")

    def __init__(self, copen: CanonicalOpen, piece_index: int, n: int):
        if not 0 <= piece_index < len(copen):
            raise PresentationError(f"no piece {piece_index} in the open")
        if n < 1:
            raise PresentationError("the escape count of a member is positive")
        self.copen = copen
        self.piece_index = piece_index
        self.n = n

    @property
    def piece(self):
        return self.copen.pieces[self.piece_index]

    def member(self, seq) -> bool:
        if not member(seq, self.copen):
            return False
        home, escapes = _escape_profile(seq, self.copen)
        return home == self.piece_index and len(escapes) == self.n

    def __repr__(self):
        return f"NwdPiece(piece={self.piece_index},n={self.n})"


def _escape_profile(seq, copen):
    """(home index, set of sequence points outside the home piece).

    Exact for members: past the modulus every term lives in a chain
    element inside the home piece, so escapes are confined to the head.
    """
    space = copen.space
    home = copen.piece_of(seq.limit)
    if home is None:
        raise PresentationError("the limit lies outside every piece")
    home_desc = copen.pieces[home].desc
    ell = space.chain_index_inside(seq.limit, home_desc)
    if ell is None:
        raise UndecidedAtDepth("no chain element inside the limit's piece")
    head = seq.terms(seq.modulus(ell))
    escapes = {t for t in head if not copen.pieces[home].member(t)}
    return home, escapes


def nwd_classify(seq, copen: CanonicalOpen) -> NwdPiece:
    """The unique slab of the decomposition containing the member."""
    if not member(seq, copen):
        raise PresentationError("sequence is not a member of the ambient open")
    home, escapes = _escape_profile(seq, copen)
    return NwdPiece(copen, home, len(escapes))


def nwd_decompose(copen: CanonicalOpen):
    """Enumerate every slab (piece, count >= 1) of the ambient open."""
    if len(copen) < 2:
        raise PresentationError("the decomposition needs at least two pieces")
    if not copen.space.crowded_flag:
        raise PresentationError("the decomposition argument needs a crowded space")

    def slabs():
        for n in count(1):
            for i in range(len(copen)):
                yield NwdPiece(copen, i, n)

    return slabs()


def nwd_avoid(refinement: CanonicalOpen, piece: NwdPiece) -> CanonicalOpen:
    """A refinement of `refinement` whose members all have more than
    piece.n points outside the avoided piece, so the slab is dodged.

    Finds a piece of the refinement nested with an ambient piece other
    than the avoided one and splits their intersection into n+1 fresh
    pieces that every member must visit.
    """
    ambient = piece.copen
    space = ambient.space
    if refinement.space.signature != space.signature:
        raise PresentationError("refinement and ambient open live in different spaces")

    found = None
    for vi, vp in enumerate(refinement.pieces):
        for ui, up in enumerate(ambient.pieces):
            if ui == piece.piece_index:
                continue
            if space.desc_contained(vp.desc, up.desc):
                found = (vi, vp.desc)
            elif space.desc_contained(up.desc, vp.desc):
                found = (vi, up.desc)
            if found:
                break
        if found:
            break
    if found is None:
        raise PresentationError(
            "no piece of the refinement meets an ambient piece other than "
            "the avoided one")

    vi, inter = found
    shards = space.split_desc(inter, piece.n + 1)
    if shards is None:
        raise PresentationError("the space cannot split pieces; avoidance needs it")
    descs = [p.desc for i, p in enumerate(refinement.pieces) if i != vi]
    descs.extend(shards)
    out = canonical_open(space, descs)
    if include(out, refinement) is None:
        raise PresentationError("avoidance refinement failed to certify")
    construct_member(out)  # nonemptiness witness; raises when absent
    return out


class DenseOpenOracle:
    """The dense open set of members dodging one slab, as a refiner.

    refine() certifies its output into its input and is idempotent in
    membership: once an open has n+1 pieces inside ambient pieces other
    than the avoided one, every member already escapes often enough and
    the open is returned unchanged.
    """

    def __init__(self, piece: NwdPiece):
        self.piece = piece

    def _already_avoids(self, copen: CanonicalOpen) -> bool:
        ambient = self.piece.copen
        space = ambient.space
        hits = 0
        for vp in copen.pieces:
            for ui, up in enumerate(ambient.pieces):
                if ui == self.piece.piece_index:
                    continue
                if space.desc_contained(vp.desc, up.desc):
                    hits += 1
                    break
        return hits >= self.piece.n + 1

    def refine(self, copen: CanonicalOpen):
        if self._already_avoids(copen):
            n = len(copen.pieces)
            idx = tuple(range(n))
            from ..vietoris import InclusionCertificate
            return copen, InclusionCertificate(copen, copen, idx, idx)
        out = nwd_avoid(copen, self.piece)
        cert = include(out, copen)
        if cert is None:
            raise PresentationError("oracle output failed to certify")
        return out, cert


def dense_hit(seq, n: int, copen: CanonicalOpen):
    """A member of `copen` sharing at least n points with `seq`, plus the
    canonical open witnessing that such members fill a neighborhood.

    `copen` must be finitely many singletons around one tail piece of a
    filter-sequence space, and `seq` must converge to the filter point.
    """
    space = copen.space
    if space.kind != "xi":
        raise PresentationError("dense hitting runs on filter-sequence spaces")
    if seq.space.signature != space.signature:
        raise PresentationError("sequence and open live in different spaces")
    if seq.limit != FILTER_POINT:
        raise PresentationError("the sequence must converge to the filter point")

    tail_desc = None
    single_points = []
    for p in copen.pieces:
        if p.desc[0] == "tl":
            if tail_desc is not None:
                raise PresentationError("expected exactly one tail piece")
            tail_desc = p.desc
        else:
            single_points.append(p.desc[1])
    if tail_desc is None:
        raise PresentationError("expected exactly one tail piece")

    if n == 0:
        witness = canonical_open(space, [space.whole_desc()])
        return construct_member(copen), witness

    singles = frozenset(single_points)
    hits = []
    k = 0
    while len(hits) < n:
        if k >= 4096:
            raise UndecidedAtDepth(
                "could not collect enough shared points inside the tail piece",
                needed=n, found=len(hits))
        t = seq.term(k)
        k += 1
        if t not in singles and space.desc_member(tail_desc, t):
            hits.append(t)

    def terms():
        for x in single_points:
            yield x
        for i in count():
            t = seq.term(i)
            if t not in singles and space.desc_member(tail_desc, t):
                yield t

    out = make_seq(space, seq.limit, terms=terms(), name="dense-hit-member")
    witness = canonical_open(
        space,
        [space.singleton_desc(h) for h in hits] + [("tl", 0, frozenset(hits))])
    return out, witness
