"""Move protocol for the open-refinement game on the hyperspace.

The first player opens with a canonical open; every later move, by
either player, must carry a verified inclusion certificate into the
move just before it.  The transcript enforces alternation and the
certificate chain, so whatever sits on it is a legal partial play.
"""
from __future__ import annotations

from ..vietoris import CanonicalOpen, InclusionCertificate

EMPTY = "EMPTY"
NONEMPTY = "NONEMPTY"


class IllegalMove(Exception):
    """A move broke the protocol; the message names the first failed duty."""

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class Move:
    __slots__ = ("player", "open", "inclusion", "state")

    def __init__(self, player, copen, inclusion=None, state=None):
        self.player = player
        self.open = copen
        self.inclusion = inclusion
        self.state = state

    def __repr__(self):
        return f"Move({self.player},{self.open!r})"


class Transcript:
    """Validated alternating move list, EMPTY moving first."""

    def __init__(self):
        self.moves = []

    def append(self, move: Move) -> Move:
        expected = EMPTY if len(self.moves) % 2 == 0 else NONEMPTY
        if move.player != expected:
            raise IllegalMove(f"out of turn: expected {expected}",
                              index=len(self.moves))
        if not isinstance(move.open, CanonicalOpen):
            raise IllegalMove("moves must be canonical opens",
                              index=len(self.moves))
        if not self.moves:
            if move.inclusion is not None:
                raise IllegalMove("the opening move refines nothing")
        else:
            cert = move.inclusion
            if not isinstance(cert, InclusionCertificate):
                raise IllegalMove("non-opening moves need an inclusion certificate",
                                  index=len(self.moves))
            if cert.child != move.open:
                raise IllegalMove("certificate child is not the move itself",
                                  index=len(self.moves))
            if cert.parent != self.moves[-1].open:
                raise IllegalMove("certificate parent is not the previous move",
                                  index=len(self.moves))
            if not cert.verify():
                raise IllegalMove("inclusion certificate failed verification",
                                  index=len(self.moves))
        self.moves.append(move)
        return move

    @property
    def rounds(self) -> int:
        return sum(1 for m in self.moves if m.player == NONEMPTY)

    @property
    def last_open(self):
        return self.moves[-1].open if self.moves else None

    def last_state(self):
        """Most recent state snapshot left by the responding player."""
        for m in reversed(self.moves):
            if m.player == NONEMPTY and m.state is not None:
                return m.state
        return None

    def opens(self, player=None) -> list:
        return [m.open for m in self.moves
                if player is None or m.player == player]

    def __len__(self):
        return len(self.moves)

    def __repr__(self):
        return f"Transcript({len(self.moves)} moves)"
