"""JSON shapes for spaces, used by the batch driver.

Every builder takes the decoded object plus the dotted path to it, so a
bad field reports exactly where it sits in the config.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import PresentationError
from .filters import (NatSet, branch_family, explicit_family, fan_filter,
                      frechet_filter, partition_filter)
from .ordinals import Ordinal, format_ordinal, from_int, parse_ordinal
from .points import (FILTER_POINT, DupPoint, GenPoint, SigmaPoint, SumPoint,
                     cantor_point, sigma_point)
from .spaces import (cantor_space, duplicate_space, dyadic_space,
                     ordinal_segment, psi_space, sigma_space, sum_space,
                     xi_space)


def _fail(path, message):
    raise PresentationError(f"{path}: {message}")


def _require(obj, path, *fields):
    if not isinstance(obj, dict):
        _fail(path, f"expected an object, got {type(obj).__name__}")
    for f in fields:
        if f not in obj:
            _fail(path, f"missing field {f!r}")


def family_from_jsonable(obj, path="family"):
    if isinstance(obj, str):
        obj = {"kind": obj}
    _require(obj, path, "kind")
    kind = obj["kind"]
    if kind == "branch":
        depth = obj.get("depth", 3)
        if not (isinstance(depth, int) and depth >= 1):
            _fail(f"{path}.depth", "expected a positive integer")
        return branch_family(depth)
    if kind == "progressions":
        rows = obj.get("generators")
        if not isinstance(rows, list) or len(rows) < 2:
            _fail(f"{path}.generators", "expected a list of [start, step] pairs")
        sets = []
        for i, row in enumerate(rows):
            try:
                start, step = row
            except (TypeError, ValueError):
                _fail(f"{path}.generators[{i}]", "expected a [start, step] pair")
            if not (isinstance(start, int) and isinstance(step, int)
                    and start >= 0 and step >= 1):
                _fail(f"{path}.generators[{i}]", "expected naturals, step >= 1")
            sets.append(NatSet(
                lambda m, a=start, d=step: m >= a and (m - a) % d == 0,
                f"{start}+{step}k"))
        return explicit_family(sets)
    _fail(f"{path}.kind", f"unknown family kind {kind!r}")


def filter_from_jsonable(obj, path="filter"):
    if isinstance(obj, str):
        obj = {"kind": obj}
    _require(obj, path, "kind")
    kind = obj["kind"]
    if kind == "frechet":
        return frechet_filter()
    if kind == "partition":
        return partition_filter()
    if kind == "fan":
        return fan_filter()
    _fail(f"{path}.kind", f"unknown filter kind {kind!r}")


def space_from_jsonable(obj, path="space"):
    _require(obj, path, "kind")
    kind = obj["kind"]
    if kind == "xi":
        _require(obj, path, "filter")
        return xi_space(filter_from_jsonable(obj["filter"], f"{path}.filter"))
    if kind == "psi":
        _require(obj, path, "family")
        return psi_space(family_from_jsonable(obj["family"], f"{path}.family"))
    if kind == "ordinal":
        _require(obj, path, "bound")
        bound = obj["bound"]
        if isinstance(bound, int):
            bound = from_int(bound)
        elif isinstance(bound, str):
            try:
                bound = parse_ordinal(bound)
            except (PresentationError, ValueError) as err:
                _fail(f"{path}.bound", str(err))
        else:
            _fail(f"{path}.bound", "expected an integer or a normal form string")
        return ordinal_segment(bound)
    if kind == "dyadic":
        return dyadic_space()
    if kind == "cantor":
        return cantor_space()
    if kind == "duplicate":
        base = obj.get("base", {"kind": "cantor"})
        return duplicate_space(space_from_jsonable(base, f"{path}.base"))
    if kind == "sigma":
        return sigma_space()
    if kind == "sum":
        _require(obj, path, "parts")
        parts = obj["parts"]
        if not isinstance(parts, list) or not parts:
            _fail(f"{path}.parts", "expected a nonempty list")
        return sum_space(*[space_from_jsonable(p, f"{path}.parts[{i}]")
                           for i, p in enumerate(parts)])
    _fail(f"{path}.kind", f"unknown space kind {kind!r}")


def point_to_jsonable(p):
    """Tagged JSON shape for any point value; naturals stay bare."""
    if isinstance(p, bool):
        raise PresentationError(f"not a point: {p!r}")
    if isinstance(p, int):
        return p
    if p == FILTER_POINT:
        return "lim"
    if isinstance(p, GenPoint):
        return ["gen", p.index]
    if isinstance(p, Ordinal):
        return ["ord", format_ordinal(p)]
    if isinstance(p, Fraction):
        return ["fr", p.numerator, p.denominator]
    if isinstance(p, tuple):
        return ["bits", list(p)]
    if isinstance(p, SigmaPoint):
        return ["sig", [[i, list(b)] for i, b in sorted(p.coords)]]
    if isinstance(p, DupPoint):
        return ["dup", point_to_jsonable(p.base), p.level]
    if isinstance(p, SumPoint):
        return ["sum", p.side, point_to_jsonable(p.point)]
    raise PresentationError(f"no JSON shape for point {p!r}")


def point_from_jsonable(obj, path="point"):
    if isinstance(obj, bool):
        _fail(path, "not a point")
    if isinstance(obj, int):
        if obj < 0:
            _fail(path, "naturals only")
        return obj
    if obj == "lim":
        return FILTER_POINT
    if not (isinstance(obj, list) and obj and isinstance(obj[0], str)):
        _fail(path, f"unrecognized point shape {obj!r}")
    tag, args = obj[0], obj[1:]
    try:
        if tag == "gen":
            return GenPoint(args[0])
        if tag == "ord":
            return parse_ordinal(args[0])
        if tag == "fr":
            return Fraction(args[0], args[1])
        if tag == "bits":
            return cantor_point(args[0])
        if tag == "sig":
            return sigma_point({i: tuple(b) for i, b in args[0]})
        if tag == "dup":
            return DupPoint(point_from_jsonable(args[0], path), args[1])
        if tag == "sum":
            return SumPoint(args[0], point_from_jsonable(args[1], path))
    except (IndexError, TypeError, ValueError) as err:
        _fail(path, f"bad {tag!r} point: {err}")
    _fail(path, f"unknown point tag {tag!r}")


def desc_to_jsonable(desc):
    """Tagged JSON shape for any piece descriptor."""
    tag = desc[0]
    if tag == "one":
        return ["one", desc[1]]
    if tag in ("tl", "gt"):
        return [tag, desc[1], sorted(desc[2])]
    if tag == "iv":
        lo = None if desc[1] is None else format_ordinal(desc[1])
        return ["iv", lo, format_ordinal(desc[2])]
    if tag == "dy":
        return ["dy", desc[1], desc[2]]
    if tag == "cyl":
        return ["cyl", list(desc[1])]
    if tag == "sg":
        return ["sg", [[i, list(b)] for i, b in sorted(desc[1])]]
    if tag == "d1":
        return ["d1", point_to_jsonable(desc[1])]
    if tag == "hat":
        minus = sorted((point_to_jsonable(m) for m in desc[2]), key=repr)
        return ["hat", desc_to_jsonable(desc[1]), minus]
    if tag == "sm":
        return ["sm", desc[1], desc_to_jsonable(desc[2])]
    raise PresentationError(f"no JSON shape for descriptor {desc!r}")


def desc_from_jsonable(obj, path="desc"):
    if not (isinstance(obj, list) and obj and isinstance(obj[0], str)):
        _fail(path, f"expected a tagged list, got {obj!r}")
    tag, args = obj[0], obj[1:]
    try:
        if tag == "one":
            return ("one", args[0])
        if tag in ("tl", "gt"):
            return (tag, args[0], frozenset(args[1]))
        if tag == "iv":
            lo = None if args[0] is None else parse_ordinal(args[0])
            return ("iv", lo, parse_ordinal(args[1]))
        if tag == "dy":
            return ("dy", args[0], args[1])
        if tag == "cyl":
            return ("cyl", tuple(args[0]))
        if tag == "sg":
            return ("sg", frozenset((i, tuple(b)) for i, b in args[0]))
        if tag == "d1":
            return ("d1", point_from_jsonable(args[0], path))
        if tag == "hat":
            minus = frozenset(point_from_jsonable(m, path) for m in args[1])
            return ("hat", desc_from_jsonable(args[0], path), minus)
        if tag == "sm":
            return ("sm", args[0], desc_from_jsonable(args[1], path))
    except (IndexError, TypeError, ValueError) as err:
        _fail(path, f"bad {tag!r} descriptor: {err}")
    _fail(path, f"unknown descriptor tag {tag!r}")


def space_to_jsonable(space):
    """Echo shape for reports; inverse of the builder on builder output."""
    kind = space.kind
    if kind == "xi":
        return {"kind": "xi", "filter": {"kind": space.filter.kind}}
    if kind == "psi":
        fam = space.family
        out = {"kind": "psi", "family": {"kind": "branch"}}
        if fam.name.startswith("branch"):
            out["family"]["depth"] = fam.intersection_bound
            return out
        return {"kind": "psi", "family": {"kind": fam.name}}
    if kind == "ordinal":
        return {"kind": "ordinal", "bound": format_ordinal(space.bound)}
    if kind in ("dyadic", "cantor", "sigma"):
        return {"kind": kind}
    if kind == "duplicate":
        return {"kind": "duplicate", "base": space_to_jsonable(space.base)}
    if kind == "sum":
        return {"kind": "sum",
                "parts": [space_to_jsonable(p) for p in space.parts]}
    return {"kind": kind}
