"""Certificate-carrying convergent sequences.

A ConvSeq packages an injective stream of terms together with its limit
and lazily computed convergence moduli.  A modulus for chain stage i is
the index after the last observed escape from the stage-i neighborhood,
certified by a clean run of in-neighborhood terms; when no clean run
shows up below the scan cap the certificate is refused rather than
guessed.
"""
from __future__ import annotations

import threading
from itertools import islice

from .errors import CertificateRefusal, PresentationError
from .spaces.base import SpacePresentation

DEFAULT_WINDOW = 32
DEFAULT_SCAN_CAP = 4096
AD_CERT_SCAN = 96
AD_GENERATOR_CAP = 16


class _MemoStream:
    """Thread-safe memoized view of a (possibly infinite) term source."""

    def __init__(self, source):
        self._it = iter(source)
        self._known = []
        self._lock = threading.Lock()

    def get(self, i):
        with self._lock:
            while len(self._known) <= i:
                try:
                    self._known.append(next(self._it))
                except StopIteration:
                    raise CertificateRefusal(
                        "term stream exhausted", index=len(self._known)) from None
            return self._known[i]


class FiniteSet:
    """Finite closed set of points; a convenience for bookkeeping layers."""

    def __init__(self, space: SpacePresentation, points):
        pts = tuple(points)
        seen = set()
        for p in pts:
            if p in seen:
                raise PresentationError(f"repeated point {p!r}")
            seen.add(p)
            if not space.contains_point(p):
                raise PresentationError(f"{p!r} is not a point of the space")
        self.space = space
        self.points = pts

    def member(self, p) -> bool:
        return p in self.points

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __repr__(self):
        return f"FiniteSet({list(self.points)!r})"


class ConvSeq:
    """A nontrivial convergent sequence as a closed set: terms plus limit.

    Construct through make_seq, which runs the certification pass.
    """

    def __init__(self, space, limit, stream, name="", window=DEFAULT_WINDOW,
                 scan_cap=DEFAULT_SCAN_CAP, ad_generators=None):
        self.space = space
        self.limit = limit
        self.name = name
        self._stream = stream
        self._window = window
        self._scan_cap = scan_cap
        self._moduli = {}
        self.ad_generators = ad_generators  # stable generator cover, AD mode only

    # -- terms ------------------------------------------------------------

    def term(self, i: int):
        return self._stream.get(i)

    def terms(self, n: int) -> list:
        return [self.term(i) for i in range(n)]

    def enumerate(self, depth: int) -> list:
        """Prefix of the closed set: the limit first, then terms."""
        if depth <= 0:
            return []
        return [self.limit] + self.terms(depth - 1)

    # -- certificates -----------------------------------------------------

    def modulus(self, i: int, window: int | None = None) -> int:
        """Index from which all scanned terms stay in chain stage i."""
        w = self._window if window is None else window
        key = (i, w)
        if key in self._moduli:
            return self._moduli[key]
        desc = self.space.chain_desc(self.limit, i)
        last_escape = -1
        run = 0
        for j in range(self._scan_cap):
            if self.space.desc_member(desc, self.term(j)):
                run += 1
                if run >= w:
                    out = last_escape + 1
                    self._moduli[key] = out
                    return out
            else:
                last_escape = j
                run = 0
        raise CertificateRefusal(
            "no clean window inside the stage neighborhood",
            stage=i, window=w, scanned=self._scan_cap)

    def contains_point(self, p, depth: int | None = None) -> bool:
        """Exact membership in the closed set, via a separating stage."""
        if p == self.limit:
            return True
        if not self.space.contains_point(p):
            return False
        stage = self.space.separation_index(self.limit, p)
        n = self.modulus(stage)
        return p in self.terms(n)

    # -- combinators ------------------------------------------------------

    def subsequence(self, k: int, r: int = 0, name="") -> "ConvSeq":
        if not (k >= 1 and 0 <= r < k):
            raise PresentationError("bad arithmetic subsequence parameters")
        return make_seq(self.space, self.limit,
                        (self.term(k * j + r) for j in _count()),
                        name=name or f"{self.name}[{r}mod{k}]")

    def split(self, k: int) -> list:
        return [self.subsequence(k, r) for r in range(k)]

    def __repr__(self):
        head = ",".join(repr(t) for t in self.terms(4))
        return f"ConvSeq({head},..-> {self.limit!r})"


def _count():
    i = 0
    while True:
        yield i
        i += 1


def _resolve_stream(space, limit, terms):
    if terms is None:
        desc = space.chain_desc(limit, 0)
        return space.tail_stream(limit, desc)
    if callable(terms):
        return (terms(j) for j in _count())
    return terms


def _chain_certify(seq: ConvSeq, cert_depth: int, cert_window: int):
    head = seq.terms(cert_window)
    if len(set(head)) != len(head):
        raise CertificateRefusal("terms repeat in the scanned prefix")
    if seq.limit in head:
        raise CertificateRefusal("a term equals the limit")
    for p in head:
        if not seq.space.contains_point(p):
            raise CertificateRefusal("term outside the space", term=repr(p))
    for i in range(cert_depth):
        seq.modulus(i, window=cert_window)


def _ad_certify(space, limit, stream, scan):
    """Generator-confinement certificate for limits without countable base.

    Terms must settle into finitely many family generators: generators
    collected over the first half of the scan must cover everything in
    the second half.  A stream that keeps visiting new generators gets no
    tail inside any stage union, so the certificate is refused.
    """
    family = space.filter.ad_family
    head = [stream.get(j) for j in range(scan)]
    if len(set(head)) != len(head):
        raise CertificateRefusal("terms repeat in the scanned prefix")
    if limit in head:
        raise CertificateRefusal("a term equals the limit")
    half = scan // 2
    gens = set()
    for m in head[:half]:
        gens.update(family.containing_generators(m))
        if len(gens) > AD_GENERATOR_CAP:
            raise CertificateRefusal(
                "terms spread over too many generators; "
                "no tail fits inside a stage union",
                seen=len(gens))
    for m in head[half:]:
        if not any(family.generator(g).contains(m) for g in sorted(gens)):
            raise CertificateRefusal(
                "late term escapes the stable generator cover",
                term=m, cover=sorted(gens))
    return frozenset(gens)


def make_seq(space: SpacePresentation, limit, terms=None, name="",
             window: int = DEFAULT_WINDOW, scan_cap: int = DEFAULT_SCAN_CAP,
             cert_depth: int = 4, cert_window: int = 16) -> ConvSeq:
    """Build and certify a convergent sequence.

    terms may be None (canonical tail), a callable index -> point, or an
    infinite iterable.  Raises CertificateRefusal when the stream cannot
    be certified at desk scale.
    """
    if not space.contains_point(limit):
        raise PresentationError(f"{limit!r} is not a point of the space")
    if space.isolated(limit):
        raise PresentationError("no nontrivial sequence converges to an isolated point")

    ad_mode = getattr(space, "kind", "") == "xi" and not space.filter.has_countable_base
    if terms is None and ad_mode:
        raise PresentationError(
            "no canonical tail without a countable base; pass explicit terms")

    stream = _MemoStream(_resolve_stream(space, limit, terms))
    if ad_mode:
        gens = _ad_certify(space, limit, stream, AD_CERT_SCAN)
        return ConvSeq(space, limit, stream, name=name, window=window,
                       scan_cap=scan_cap, ad_generators=gens)

    seq = ConvSeq(space, limit, stream, name=name, window=window,
                  scan_cap=scan_cap)
    _chain_certify(seq, cert_depth, cert_window)
    return seq


def amalgam(seqs, name="") -> ConvSeq:
    """Merge finitely many sequences with a common limit into one."""
    seqs = list(seqs)
    if not seqs:
        raise PresentationError("nothing to merge")
    space = seqs[0].space
    limit = seqs[0].limit
    for s in seqs[1:]:
        if s.space.signature != space.signature or s.limit != limit:
            raise PresentationError("merging needs a shared space and limit")

    def merged():
        seen = set()
        depth = 0
        while True:
            for s in seqs:
                t = s.term(depth)
                if t not in seen:
                    seen.add(t)
                    yield t
            depth += 1

    return make_seq(space, limit, merged(), name=name or "amalgam")
