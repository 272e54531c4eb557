"""Game engine: drives a strategy against an adversary and scores the play.

The adversary moves first and must keep its opens legal, meaning each
one has a piece with a non-isolated point, so its trace on the
hyperspace is nonempty.  A detected breach ends the episode with the
verdict "adversary-fault".  The responding strategy is held to a higher
standard: its errors propagate, since a strategy that cannot answer a
legal move is a bug, not a forfeit.

After the agreed number of rounds the strategy must extract a
convergent sequence lying inside every open it played.  The episode
passes exactly when the extracted sequence is a certified member of
each of those opens.
"""
from __future__ import annotations

from ..errors import CertificateRefusal, PresentationError, UndecidedAtDepth
from ..vietoris import member
from .transcript import EMPTY, NONEMPTY, IllegalMove, Move, Transcript

PASS = "pass"
FAIL = "fail"
ADVERSARY_FAULT = "adversary-fault"

_ADVERSARY_ERRORS = (IllegalMove, PresentationError, UndecidedAtDepth,
                     CertificateRefusal)


class Episode:
    """Finished play: transcript, extracted sequence, verdict, round ledger."""

    __slots__ = ("transcript", "limit", "verdict", "detail", "ledger")

    def __init__(self, transcript, limit, verdict, detail=None, ledger=()):
        self.transcript = transcript
        self.limit = limit
        self.verdict = verdict
        self.detail = detail
        self.ledger = list(ledger)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def __repr__(self):
        return f"Episode({self.verdict}, {self.transcript.rounds} rounds)"


def _inhabited(copen, depth) -> None:
    # Legality of an adversary open: some piece must hold a non-isolated
    # point, else no nontrivial convergent sequence fits inside it.
    if copen.nondiscrete_piece(depth=depth) is None:
        raise IllegalMove("open has no piece with a non-isolated point",
                          pieces=len(copen))


def play(space, strategy, adversary, rounds, depth=24) -> Episode:
    """Run `rounds` full rounds; returns the scored Episode.

    Zero rounds is a vacuous pass: nothing was demanded, nothing escaped.
    """
    transcript = Transcript()
    for _ in range(rounds):
        try:
            copen, cert = adversary.move(transcript)
            transcript.append(Move(EMPTY, copen, inclusion=cert))
            _inhabited(copen, depth=max(depth, 32))
        except _ADVERSARY_ERRORS as err:
            return Episode(transcript, None, ADVERSARY_FAULT,
                           detail=str(err), ledger=_collect_ledger(transcript))
        reply, reply_cert, state = strategy.respond(transcript)
        transcript.append(Move(NONEMPTY, reply, inclusion=reply_cert,
                               state=state))

    ledger = _collect_ledger(transcript)
    if transcript.rounds == 0:
        return Episode(transcript, None, PASS,
                       detail="vacuous: no rounds played", ledger=ledger)

    seq = strategy.extract_limit(transcript, depth=depth)
    for index, move in enumerate(transcript.moves):
        if move.player != NONEMPTY:
            continue
        try:
            if not member(seq, move.open):
                return Episode(transcript, seq, FAIL,
                               detail=f"extracted sequence escapes move {index}",
                               ledger=ledger)
        except (UndecidedAtDepth, CertificateRefusal) as err:
            return Episode(transcript, seq, FAIL,
                           detail=f"membership undecided at move {index}: {err}",
                           ledger=ledger)
    return Episode(transcript, seq, PASS, ledger=ledger)


def _collect_ledger(transcript):
    entries = []
    for move in transcript.moves:
        if move.player == NONEMPTY and move.state:
            entry = move.state.get("ledger")
            if entry is not None:
                entries.append(entry)
    return entries
