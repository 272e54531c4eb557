"""Desk-scale structural checks on space presentations."""
from __future__ import annotations

from ..reports import FAIL, PASS, UNKNOWN, Report
from .base import SpacePresentation


def isolated_dense_check(space: SpacePresentation, depth: int = 24,
                         scan: int = 64) -> Report:
    """Probe whether the isolated points are dense.

    One cell per sampled basis piece: pass when an isolated point is
    exhibited inside it, fail when the piece is certified crowded (then
    density of isolated points is definitively refuted), and
    unknown-at-depth when the scan was inconclusive.
    """
    report = Report(title=f"isolated-dense:{space.kind}")
    for piece in space.iter_basis(depth):
        name = space.describe_desc(piece.desc)
        witness = space.pick_isolated(piece.desc, depth=scan)
        if witness is not None:
            report.add(name, PASS, witness=repr(witness))
        elif space.region_crowded(piece.desc):
            report.add(name, FAIL, witness="piece certified crowded")
        else:
            report.add(name, UNKNOWN,
                       witness=f"no isolated point in first {scan}")
    verdict = PASS
    if any(item.status == FAIL for item in report.items):
        verdict = FAIL
    elif any(item.status == UNKNOWN for item in report.items):
        verdict = UNKNOWN
    report.meta["verdict"] = verdict
    report.meta["depth"] = depth
    return report
