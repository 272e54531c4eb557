"""Three-valued check results and report containers.

Depth-bounded checks never guess: they answer pass, fail, or
unknown-at-depth, and every non-pass answer carries a witness.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
UNKNOWN = "unknown-at-depth"


def _jsonable(value):
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, float):
        raise TypeError("reports must not contain floats; use exact strings")
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted((_jsonable(v) for v in value), key=repr)
    return repr(value)


@dataclass(frozen=True)
class CheckItem:
    name: str
    status: str
    witness: object = None

    def to_jsonable(self):
        out = {"name": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        return out


@dataclass
class Report:
    """Ordered list of check items plus free-form metadata."""

    title: str
    items: list[CheckItem] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, name: str, status: str, witness: object = None) -> CheckItem:
        item = CheckItem(name, status, witness)
        self.items.append(item)
        return item

    def extend(self, other: "Report") -> None:
        for item in other.items:
            self.add(f"{other.title}/{item.name}", item.status, item.witness)

    @property
    def counts(self) -> dict:
        out = {PASS: 0, FAIL: 0, UNKNOWN: 0}
        for item in self.items:
            out[item.status] = out.get(item.status, 0) + 1
        return out

    @property
    def failed(self) -> bool:
        return any(item.status == FAIL for item in self.items)

    @property
    def all_pass(self) -> bool:
        return all(item.status == PASS for item in self.items)

    def to_jsonable(self):
        return {
            "title": self.title,
            "meta": _jsonable(self.meta),
            "counts": self.counts,
            "items": [item.to_jsonable() for item in self.items],
        }

    def to_json(self) -> str:
        # sort_keys + fixed separators: reports must be byte-identical across runs
        return json.dumps(self.to_jsonable(), sort_keys=True, separators=(",", ":"))
