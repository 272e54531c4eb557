"""Batch driver: build spaces from config, run certificate checks, metric
suites, game episodes, meagerness drills, and diagnostics; emit stable
JSON reports suitable for diffing and plotting."""
from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import chain as ichain, count, islice
from pathlib import Path

from .descriptors import (desc_from_jsonable, desc_to_jsonable,
                          point_to_jsonable, space_from_jsonable,
                          space_to_jsonable)
from .errors import CertificateRefusal, PresentationError, UndecidedAtDepth
from .games import (InteractiveAdversary, NwdPiece, RandomAdversary,
                    ScriptedAdversary, SigmaAdversary,
                    baire_strategy_countable_base, clopen_part,
                    compose_strategy, diagnose, duplicate_metric_strategy,
                    nwd_avoid, nwd_classify, play, sigma_duplicate_strategy)
from .games.strategies import CommittedPointsStrategy
from .metricization import cauchy_limit, polish_profile, xi_metric
from .ordinals import from_int, omega_power
from .points import FILTER_POINT, SumPoint
from .reports import FAIL, PASS, UNKNOWN, Report, _jsonable
from .sequences import FiniteSet, make_seq
from .spaces import Subspace
from .vietoris import canonical_open, construct_member, member

SCHEMA_ID = "hyperseq-config-v1"
REPORT_SCHEMA = "hyperseq-report-v1"
TASKS = ("certify", "metric", "game", "meager", "diagnose", "profile")


@dataclass
class RunConfig:
    space: dict
    task: str
    depth: int = 24
    rounds: int = 20
    seeds: tuple = (0,)
    out: str | None = None
    adversary: str = "random"
    spaces: tuple = ()  # extra space descriptors for side-by-side profiles
    samples: int = 40

    def validate(self):
        if self.task not in TASKS:
            raise PresentationError(
                f"config.task: {self.task!r} is not one of {', '.join(TASKS)}")
        if not (isinstance(self.depth, int) and self.depth >= 1):
            raise PresentationError("config.depth: expected an integer >= 1")
        if not (isinstance(self.rounds, int) and self.rounds >= 0):
            raise PresentationError("config.rounds: expected an integer >= 0")
        for i, s in enumerate(self.seeds):
            if not isinstance(s, int):
                raise PresentationError(f"config.seeds[{i}]: expected an integer")
        if not isinstance(self.space, dict):
            raise PresentationError("config.space: expected an object")
        return self


def load_config(path) -> RunConfig:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as err:
        raise PresentationError(
            f"{path}:{err.lineno}:{err.colno}: {err.msg}") from None
    if not isinstance(obj, dict):
        raise PresentationError(f"{path}: config must be a JSON object")
    schema = obj.get("schema", SCHEMA_ID)
    if schema != SCHEMA_ID:
        raise PresentationError(
            f"{path}: schema {schema!r} is not {SCHEMA_ID!r}")
    known = {"schema", "space", "task", "depth", "rounds", "seeds", "out",
             "adversary", "spaces", "samples"}
    for key in obj:
        if key not in known:
            raise PresentationError(f"{path}: unknown config field {key!r}")
    for req in ("space", "task"):
        if req not in obj:
            raise PresentationError(f"{path}: missing config field {req!r}")
    cfg = RunConfig(
        space=obj["space"], task=obj["task"],
        depth=obj.get("depth", 24), rounds=obj.get("rounds", 20),
        seeds=tuple(obj.get("seeds", (0,))), out=obj.get("out"),
        adversary=obj.get("adversary", "random"),
        spaces=tuple(obj.get("spaces", ())),
        samples=obj.get("samples", 40))
    return cfg.validate()


def scenario(name: str) -> RunConfig:
    """Preset configurations for the documented study scenarios."""
    xi_fr = {"kind": "xi", "filter": "frechet"}
    xi_p = {"kind": "xi", "filter": "partition"}
    table = {
        "omega1": RunConfig(
            space={"kind": "ordinal", "bound": "w^3"}, task="game",
            rounds=20, seeds=tuple(range(5))),
        "psi": RunConfig(
            space={"kind": "psi", "family": {"kind": "branch", "depth": 3}},
            task="game", rounds=20, seeds=tuple(range(5))),
        "duplicate-cantor": RunConfig(
            space={"kind": "duplicate", "base": {"kind": "cantor"}},
            task="game", rounds=20, seeds=tuple(range(5))),
        "sigma": RunConfig(
            space={"kind": "duplicate", "base": {"kind": "sigma"}},
            task="game", rounds=15, seeds=tuple(range(5))),
        "nhsc-profile": RunConfig(
            space=xi_fr, spaces=(xi_fr, xi_p), task="profile", depth=5),
        "sum-second-category": RunConfig(
            space={"kind": "sum", "parts": [xi_fr, {"kind": "dyadic"}]},
            task="certify", depth=12),
    }
    if name not in table:
        raise PresentationError(
            f"unknown scenario {name!r}; choose from {', '.join(sorted(table))}")
    return table[name]


# ---------------------------------------------------------------- game wiring

def ex1_subspace(segment) -> Subspace:
    """The segment minus its nonzero multiples of the square of the first
    limit: what is left is the closed-or-isolated points whose last
    normal-form exponent is at most one."""
    two = from_int(2)

    def region(p):
        return (not p.terms) or p.terms[-1][0] < two

    return Subspace(segment, region, name=f"thinned[{segment.bound}]")


def _ex1_parts(arena):
    w = omega_power(1)
    w2 = omega_power(2)
    limits = [w, w + w, w + w + w, w + w + w + w, w2 + w, w2 + w + w]
    parts = []
    for alpha in limits:
        lo = alpha.pred_limit_step() if False else None
        parts.append(alpha)
    out = []
    for alpha in limits:
        below = _minus_omega(alpha)
        part = clopen_part(arena, [("iv", below, alpha)],
                           name=f"block({alpha})")
        out.append((part, CommittedPointsStrategy(part)))
    return out


def _minus_omega(alpha):
    # alpha = gamma + w*k with k >= 1: the block floor is gamma + w*(k-1)
    *rest, (exp, coeff) = alpha.terms
    one = from_int(1)
    if exp != one:
        raise PresentationError(f"{alpha} is not an omega-block limit")
    if coeff == 1:
        return type(alpha)(tuple(rest)) if rest else from_int(0)
    return type(alpha)(tuple(rest) + ((exp, coeff - 1),))


def _psi_parts(arena):
    fam = arena.family
    out = []
    for k in range(fam.num_generators):
        minus = set()
        for j in range(k):
            minus.update(fam.overlap(j, k))
        part = clopen_part(arena, [("gt", k, frozenset(minus))],
                           name=f"leg{k}")
        out.append((part, CommittedPointsStrategy(part)))
    return out


def game_setup(space):
    """(arena, strategy) for the space's documented strategy."""
    kind = space.kind
    if kind == "xi":
        return space, baire_strategy_countable_base(space.filter)
    if kind == "psi":
        dense = tuple(range(64))
        return space, compose_strategy(space, dense, _psi_parts(space))
    if kind == "ordinal":
        arena = ex1_subspace(space)
        dense = tuple(from_int(n + 1) for n in range(8))
        return arena, compose_strategy(arena, dense, _ex1_parts(arena))
    if kind == "duplicate":
        if space.base.kind == "sigma":
            return space, sigma_duplicate_strategy(space)
        return space, duplicate_metric_strategy(space)
    raise PresentationError(f"no documented strategy for kind {kind!r}")


def make_adversary(spec: str, arena, seed: int, depth: int):
    if spec == "random":
        if arena.kind == "duplicate" and arena.base.kind == "sigma":
            return SigmaAdversary(arena, seed, fresh_cap=5, depth=depth)
        return RandomAdversary(arena, seed, depth=depth)
    if spec.startswith("scripted:"):
        path = spec.split(":", 1)[1]
        try:
            rows = json.loads(Path(path).read_text())
        except json.JSONDecodeError as err:
            raise PresentationError(
                f"{path}:{err.lineno}:{err.colno}: {err.msg}") from None
        scripts = [[desc_from_jsonable(d, f"{path}[{i}][{j}]")
                    for j, d in enumerate(row)]
                   for i, row in enumerate(rows)]
        return ScriptedAdversary(arena, scripts)
    if spec == "interactive":
        return InteractiveAdversary(
            arena, sys.stdin, sys.stdout,
            from_json=lambda obj: desc_from_jsonable(obj, "stdin"))
    raise PresentationError(
        f"config.adversary: {spec!r} is not random, scripted:FILE, or "
        "interactive")


def _transcript_record(transcript):
    out = []
    for m in transcript.moves:
        cert = None
        if m.inclusion is not None:
            cert = {"parent_map": list(m.inclusion.parent_map),
                    "onto": list(m.inclusion.onto)}
        out.append({"player": m.player,
                    "pieces": [desc_to_jsonable(p.desc) for p in m.open.pieces],
                    "certificate": cert})
    return out


def _limit_record(seq):
    if seq is None:
        return None
    return {"limit": point_to_jsonable(seq.limit),
            "head": [point_to_jsonable(t) for t in seq.terms(12)],
            "name": seq.name}


def _one_episode(space_obj, cfg, seed):
    arena, strategy = game_setup(space_obj)
    adversary = make_adversary(cfg.adversary, arena, seed, cfg.depth)
    ep = play(arena, strategy, adversary, cfg.rounds, depth=cfg.depth)
    record = {
        "space": space_to_jsonable(space_obj),
        "strategy": type(strategy).__name__,
        "adversary": cfg.adversary,
        "seed": seed,
        "rounds": cfg.rounds,
        "verdict": ep.verdict,
        "detail": ep.detail,
        "transcript": _transcript_record(ep.transcript),
        "limit": _limit_record(ep.limit),
        "ledgers": _jsonable(list(ep.ledger)),
    }
    return ep, record


def _game_task(space_obj, cfg, report):
    if not cfg.seeds:
        report.add("episodes", PASS, witness="no seeds given: vacuous pass")
        report.meta["warning"] = "empty seed list"
        return {"episodes": []}
    records = []
    if cfg.adversary == "interactive" or len(cfg.seeds) == 1:
        results = [_one_episode(space_obj, cfg, s) for s in cfg.seeds]
    else:
        with ThreadPoolExecutor(max_workers=min(8, len(cfg.seeds))) as pool:
            futures = [pool.submit(_one_episode, space_obj, cfg, s)
                       for s in cfg.seeds]
            results = [f.result() for f in futures]
    for seed, (ep, record) in zip(cfg.seeds, results):
        records.append(record)
        status = PASS if ep.passed else FAIL
        report.add(f"seed {seed}", status,
                   witness=None if ep.passed else ep.detail)
    return {"episodes": records}


# ---------------------------------------------------------------- other tasks

def _certify_task(space_obj, cfg, report):
    picked = []
    for desc in islice(space_obj.basis_stream(), 12 * cfg.depth):
        if space_obj.pick_nonisolated(desc, depth=64) is not None:
            picked.append(desc)
        if len(picked) >= min(cfg.depth, 8):
            break
    if not picked:
        report.add("basis-scan", UNKNOWN,
                   witness="no piece with non-isolated content found")
    for desc in picked:
        name = space_obj.describe_desc(desc)
        try:
            copen = canonical_open(space_obj, [desc])
            seq = construct_member(copen)
            ok = member(seq, copen)
        except (PresentationError, UndecidedAtDepth, CertificateRefusal) as err:
            report.add(name, FAIL, witness=str(err))
            continue
        report.add(name, PASS if ok else FAIL,
                   witness=None if ok else "constructed member rejected")
    if space_obj.kind == "sum" and len(space_obj.parts) == 2:
        _sum_split_cells(space_obj, report)
    return {}


def _sum_split_cells(space_obj, report):
    """Sampled members fall in exactly one of: left summand, right
    summand, the mixed open hitting both."""
    left = space_obj.parts[0].whole_desc()
    right = space_obj.parts[1].whole_desc()
    if left is None or right is None:
        report.add("sum-split", UNKNOWN,
                   witness="a part has no whole descriptor")
        return
    ldesc, rdesc = ("sm", 0, left), ("sm", 1, right)
    opens = {
        "left-only": canonical_open(space_obj, [ldesc]),
        "right-only": canonical_open(space_obj, [rdesc]),
        "mixed": canonical_open(space_obj, [ldesc, rdesc]),
    }
    samples = {
        "left-only": construct_member(opens["left-only"]),
        "right-only": construct_member(opens["right-only"]),
    }
    base_seq = samples["left-only"]
    stray = None
    for p in space_obj.parts[1].point_stream():
        stray = SumPoint(1, p)
        break
    mixed_terms = ichain([stray],
                         (SumPoint(0, base_seq.term(i).point)
                          for i in count()
                          if base_seq.term(i) != stray))
    samples["mixed"] = make_seq(
        space_obj, base_seq.limit, terms=mixed_terms, name="mixed-member")
    for came_from, seq in samples.items():
        hits = {label: member(seq, o) for label, o in opens.items()}
        good = sum(hits.values()) == 1 and hits[came_from]
        report.add(f"sum-split:{came_from}", PASS if good else FAIL,
                   witness={k: v for k, v in hits.items()})


def _metric_task(space_obj, cfg, report):
    if space_obj.kind != "xi":
        raise PresentationError(
            "config.task: the metric suite runs on filter-sequence spaces")
    metric = xi_metric(space_obj.filter)
    rng = random.Random(cfg.seeds[0] if cfg.seeds else 0)
    pool = [FILTER_POINT] + list(range(48))

    bad = 0
    for _ in range(cfg.samples):
        x, y, z = (rng.choice(pool) for _ in range(3))
        dxy, dyx = metric.distance(x, y), metric.distance(y, x)
        if (dxy == 0) != (x == y) or dxy != dyx:
            bad += 1
        elif metric.distance(x, z) > dxy + metric.distance(y, z):
            bad += 1
    report.add("metric-axioms", PASS if bad == 0 else FAIL,
               witness={"triples": cfg.samples, "violations": bad})

    mismatches = 0
    checked = 0
    for _ in range(cfg.samples):
        p = rng.choice(pool)
        if p is FILTER_POINT:
            r = rng.randrange(6)
        else:
            r = metric.stage_of(p) + 1 + rng.randrange(3)
        desc = metric.ball_desc(p, r)
        brute = set(map(repr, metric.ball_members(p, r, 96)))
        via_desc = {repr(q) for q in pool[:97]
                    if space_obj.desc_member(desc, q)}
        via_desc &= brute | via_desc  # same candidate universe below
        enumerated = {repr(q) for q in [FILTER_POINT] + list(range(96))
                      if space_obj.desc_member(desc, q)}
        checked += 1
        if enumerated != brute:
            mismatches += 1
    report.add("ball-compatibility", PASS if mismatches == 0 else FAIL,
               witness={"pairs": checked, "mismatches": mismatches})

    seq = make_seq(space_obj, FILTER_POINT, name="cauchy-probe")
    depth = min(cfg.depth, 8)

    def stream(i):
        head = seq.terms(seq.modulus(i))
        pts = [t for t in dict.fromkeys(head) if metric.stage_of(t) < i]
        return FiniteSet(space_obj, [FILTER_POINT] + pts)

    try:
        lim = cauchy_limit(stream, depth, metric=metric)
        ok = lim.has_limit_point and all(
            lim.contains(t) for t in seq.terms(4)
            if metric.stage_of(t) < depth)
        report.add("completeness-probe", PASS if ok else FAIL,
                   witness=repr(lim))
    except (CertificateRefusal, UndecidedAtDepth) as err:
        report.add("completeness-probe", FAIL, witness=str(err))
    return {}


def _meager_task(space_obj, cfg, report):
    if not space_obj.crowded_flag:
        raise PresentationError(
            "config.task: the meagerness drill runs on crowded spaces")
    whole = space_obj.whole_desc()
    if whole is None:
        raise PresentationError("config.space: no whole descriptor")
    ambient = canonical_open(space_obj, space_obj.split_desc(whole, 2))
    seeds = cfg.seeds or (0,)
    for seed in seeds:
        rng = random.Random(seed)
        n = 1 + rng.randrange(3)
        avoided = NwdPiece(ambient, rng.randrange(2), n)
        descs = []
        for p in ambient.pieces:
            descs.extend(space_obj.split_desc(p.desc, 1 + rng.randrange(2)))
        refinement = canonical_open(space_obj, descs)
        try:
            out = nwd_avoid(refinement, avoided)
            witness_member = construct_member(out)
            dodged = not avoided.member(witness_member)
            slab = nwd_classify(witness_member, ambient)
            status = PASS if dodged else FAIL
            report.add(f"seed {seed}", status,
                       witness={"avoided": repr(avoided),
                                "landed": repr(slab),
                                "pieces": len(out)})
        except (PresentationError, UndecidedAtDepth, CertificateRefusal) as err:
            report.add(f"seed {seed}", FAIL, witness=str(err))
    return {}


def _diagnose_task(space_obj, cfg, report):
    sub = diagnose(space_obj, depth=cfg.depth)
    report.extend(sub)
    for key in ("isolated_dense", "discrete_clopen", "gdelta"):
        report.meta[key] = sub.meta.get(key)
    return {}


def _profile_task(space_obj, cfg, report):
    described = cfg.spaces or (None,)
    for obj in described:
        sp = space_obj if obj is None else space_from_jsonable(obj)
        if sp.kind != "xi":
            raise PresentationError(
                "config.task: profiles run on filter-sequence spaces")
        sub = polish_profile(sp.filter, cfg.depth)
        report.extend(sub)
    return {}


_TASK_RUNNERS = {
    "certify": _certify_task,
    "metric": _metric_task,
    "game": _game_task,
    "meager": _meager_task,
    "diagnose": _diagnose_task,
    "profile": _profile_task,
}


# ---------------------------------------------------------------- entry point

def run(config: RunConfig) -> int:
    config.validate()
    space_obj = space_from_jsonable(config.space)
    report = Report(title=f"{config.task}:{space_obj.kind}")
    report.meta["schema"] = REPORT_SCHEMA
    report.meta["config"] = {
        "space": config.space, "task": config.task, "depth": config.depth,
        "rounds": config.rounds, "seeds": list(config.seeds),
        "adversary": config.adversary,
    }
    extras = _TASK_RUNNERS[config.task](space_obj, config, report)

    if config.out:
        out_dir = Path(config.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.json").write_text(report.to_json() + "\n")
        for name, payload in extras.items():
            path = out_dir / f"{name}.json"
            path.write_text(json.dumps(_jsonable(payload), sort_keys=True,
                                       separators=(",", ":")) + "\n")

    counts = report.counts
    for item in report.items:
        print(f"[{item.status}] {item.name}")
    print(f"{report.title}: {counts[PASS]} pass, {counts[FAIL]} fail, "
          f"{counts[UNKNOWN]} unknown")
    return 1 if report.failed else 0


def _parse_seeds(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return tuple(out)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hyperseq",
        description="certificate checks, metric suites, games, and "
                    "diagnostics over hyperspaces of convergent sequences")
    parser.add_argument("--space", metavar="FILE",
                        help="JSON config file (schema hyperseq-config-v1)")
    parser.add_argument("--scenario", metavar="NAME",
                        help="preset: omega1 psi duplicate-cantor sigma "
                             "nhsc-profile sum-second-category")
    parser.add_argument("--task", choices=TASKS)
    parser.add_argument("--depth", type=int)
    parser.add_argument("--rounds", type=int)
    parser.add_argument("--seeds", metavar="LIST",
                        help="comma list with ranges, e.g. 0,5,10-19")
    parser.add_argument("--out", metavar="DIR")
    parser.add_argument("--adversary", metavar="MODE",
                        help="random | scripted:FILE | interactive")
    args = parser.parse_args(argv)

    try:
        if args.scenario:
            config = scenario(args.scenario)
        elif args.space:
            config = load_config(args.space)
        else:
            parser.error("either --space FILE or --scenario NAME is required")
        if args.task:
            config.task = args.task
        if args.depth is not None:
            config.depth = args.depth
        if args.rounds is not None:
            config.rounds = args.rounds
        if args.seeds is not None:
            config.seeds = _parse_seeds(args.seeds)
        if args.out:
            config.out = args.out
        if args.adversary:
            config.adversary = args.adversary
        return run(config)
    except PresentationError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
