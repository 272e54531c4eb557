"""Ordinals in Cantor normal form.

An ordinal is a strictly-decreasing sum of omega-powers with positive
integer coefficients; exponents are themselves ordinals.  Comparison,
successor arithmetic and limit classification work for the full nested
form.  Enumeration below a bound and fundamental sequences are provided
for ordinals whose exponents are all finite (below omega^omega), which
covers every desk-scale segment this package presents.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering
from itertools import combinations_with_replacement


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    terms: tuple = ()  # ((exponent: Ordinal, coeff: int), ...) exponents strictly decreasing

    def __post_init__(self):
        last = None
        for exp, coeff in self.terms:
            if not isinstance(exp, Ordinal):
                raise TypeError("exponents must be Ordinals")
            if not isinstance(coeff, int) or coeff < 1:
                raise ValueError("coefficients must be positive integers")
            if last is not None and not exp < last:
                raise ValueError("exponents must be strictly decreasing")
            last = exp

    # ---- classification -------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero

    @property
    def is_finite(self) -> bool:
        return self.is_zero or (len(self.terms) == 1 and self.terms[0][0].is_zero)

    def has_finite_exponents(self) -> bool:
        return all(e.is_finite for e, _ in self.terms)

    # ---- order ----------------------------------------------------------

    def __lt__(self, other: "Ordinal") -> bool:
        if not isinstance(other, Ordinal):
            return NotImplemented
        for (e1, c1), (e2, c2) in zip(self.terms, other.terms):
            if e1 != e2:
                return e1 < e2
            if c1 != c2:
                return c1 < c2
        return len(self.terms) < len(other.terms)

    # ---- arithmetic ------------------------------------------------------

    def __add__(self, other) -> "Ordinal":
        if isinstance(other, int):
            other = from_int(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        if other.is_zero:
            return self
        head_exp = other.terms[0][0]
        kept = [(e, c) for e, c in self.terms if e > head_exp]
        merged = list(other.terms)
        for e, c in self.terms:
            if e == head_exp:
                merged[0] = (head_exp, c + merged[0][1])
        return Ordinal(tuple(kept) + tuple(merged))

    def succ(self) -> "Ordinal":
        return self + 1

    def pred(self) -> "Ordinal":
        if not self.is_successor:
            raise ValueError(f"{self} is not a successor")
        *rest, (exp, coeff) = self.terms
        if coeff > 1:
            return Ordinal(tuple(rest) + ((exp, coeff - 1),))
        return Ordinal(tuple(rest))

    def to_int(self) -> int:
        if not self.is_finite:
            raise ValueError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    # ---- limit structure -------------------------------------------------

    def fundamental(self, k: int) -> "Ordinal":
        """k-th element of the canonical strictly increasing sequence cofinal in a limit."""
        if not self.is_limit:
            raise ValueError(f"{self} is not a limit ordinal")
        *rest, (exp, coeff) = self.terms
        prefix = Ordinal(tuple(rest) + (((exp, coeff - 1),) if coeff > 1 else ()))
        if exp.is_successor:
            step = Ordinal(((exp.pred(), k),)) if k > 0 else ZERO
        elif exp.is_limit:
            step = Ordinal(((exp.fundamental(k), 1),)) if k > 0 else ZERO
        else:  # pragma: no cover - exp 0 would make this a successor
            raise AssertionError
        return prefix + step

    def __repr__(self):
        return format_ordinal(self)


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def from_int(n: int) -> Ordinal:
    if n < 0:
        raise ValueError("ordinals are nonnegative")
    return Ordinal(((ZERO, n),)) if n else ZERO


def omega_power(e, coeff: int = 1) -> Ordinal:
    if isinstance(e, int):
        e = from_int(e)
    return Ordinal(((e, coeff),)) if coeff else ZERO


def iter_below(alpha: Ordinal):
    """Deterministic enumeration of every ordinal < alpha (finite exponents only).

    Order: by number of omega-power summands counted with multiplicity,
    then by descending-exponent tuple; not the ordinal order, but every
    ordinal below alpha appears at a fixed finite position.
    """
    if not alpha.has_finite_exponents():
        raise ValueError("enumeration needs all exponents below omega")
    if alpha.is_zero:
        return
    emax = alpha.terms[0][0].to_int()
    weight = 0
    while True:
        emitted = False
        for exps in combinations_with_replacement(range(emax, -1, -1), weight):
            counts: list = []
            for e in exps:
                if counts and counts[-1][0] == e:
                    counts[-1] = (e, counts[-1][1] + 1)
                else:
                    counts.append((e, 1))
            cand = Ordinal(tuple((from_int(e), c) for e, c in counts))
            if cand < alpha:
                emitted = True
                yield cand
        if weight and not emitted:
            return
        weight += 1


def parse_ordinal(text: str) -> Ordinal:
    """Parse "w^2*3+w*2+5"-style Cantor normal forms with finite exponents."""
    text = text.strip().replace(" ", "")
    if text in ("0", ""):
        return ZERO
    total = ZERO
    for part in text.split("+"):
        if part.startswith("w"):
            rest = part[1:]
            exp = 1
            coeff = 1
            if rest.startswith("^"):
                body = rest[1:]
                num, _, mul = body.partition("*")
                exp = int(num)
                coeff = int(mul) if mul else 1
            elif rest.startswith("*"):
                coeff = int(rest[1:])
            elif rest:
                raise ValueError(f"bad ordinal term {part!r}")
            total = total + omega_power(exp, coeff)
        else:
            total = total + from_int(int(part))
    return total


def format_ordinal(o: Ordinal) -> str:
    if o.is_zero:
        return "0"
    parts = []
    for exp, coeff in o.terms:
        if exp.is_zero:
            parts.append(str(coeff))
        elif exp == ONE:
            parts.append("w" if coeff == 1 else f"w*{coeff}")
        else:
            parts.append(f"w^{format_ordinal(exp)}" + ("" if coeff == 1 else f"*{coeff}"))
    return "+".join(parts)
