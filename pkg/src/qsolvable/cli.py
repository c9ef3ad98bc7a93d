"""Command-line front end.

Exit codes: 0 success, 1 negative decision, 2 usage error, 3 group not
solvable, 4 budget or size limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import blackbox as bb
from . import classical, factorgroup, qsim, reductions
from .errors import (
    BadSpec,
    BudgetExhausted,
    DomainMismatch,
    InvalidEncoding,
    NotAbelianQuotient,
    NotNormal,
    NotSolvable,
    NotSubgroup,
    SizeLimitExceeded,
)
from .solvable_order import group_order

RECORD_SCHEMA = "qsolvable.record/1"
DEFAULT_SEED = 1729
COMMANDS = ("order", "member", "subgroup", "equal", "normal", "decompose", "chain", "solvable", "superpose")

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_UNSOLVABLE, EXIT_LIMIT = 0, 1, 2, 3, 4


@dataclass
class RunConfig:
    command: str
    group: str
    subgroup: str | None = None
    other: str | None = None
    element: str | None = None
    epsilon: float = 0.05
    seed: int = DEFAULT_SEED
    record: bool = False
    verify: bool = False
    max_group_size: int = classical.DEFAULT_SIZE_CAP

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.max_group_size < 1:
            raise ValueError("max-group-size must be positive")


class UsageError(Exception):
    pass


@dataclass
class Report:
    status: int
    fields: dict[str, Any] = field(default_factory=dict)
    text: str = ""


def parse_elements(oracle: bb.GroupOracle, arg: str | None) -> list[int]:
    """Generators from a file (JSON list or {"generators": [...]}) or inline hex."""
    if arg is None:
        raise UsageError("this command needs --subgroup")
    path = Path(arg)
    if path.is_file():
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise UsageError(f"cannot parse {arg}: {exc}") from exc
        items = data.get("generators") if isinstance(data, dict) else data
        if not isinstance(items, list):
            raise UsageError(f"{arg} must hold a list of hex generators")
    else:
        items = [s for s in arg.split(",") if s.strip()]
    return [oracle.from_hex(str(s).strip()) for s in items]


def _hex_list(oracle, xs) -> list[str]:
    return [oracle.to_hex(x) for x in xs]


def _decision(report: reductions.DecisionReport) -> Report:
    return Report(
        EXIT_OK if report.answer else EXIT_NO,
        {
            "answer": report.answer,
            "orders": report.orders,
            "failure_bound": report.failure_bound,
        },
    )


def execute(cfg: RunConfig, oracle: bb.GroupOracle, rng: np.random.Generator) -> Report:
    gens = list(oracle.generators)
    eps, cap = cfg.epsilon, cfg.max_group_size
    cmd = cfg.command
    if cmd == "order":
        res = group_order(oracle, gens, eps, rng, verify=cfg.verify, cap=cap)
        return Report(EXIT_OK, {"order": res.order, "factors": res.factors, "chain": _hex_list(oracle, res.chain),
                                "restarts": res.restarts, "copies_prepared": res.copies_prepared})
    if cmd == "superpose":
        res = group_order(oracle, gens, eps, rng, verify=cfg.verify, cap=cap)
        dump = qsim.dump(res.final_state)
        return Report(EXIT_OK, {"order": res.order, "state": dump.splitlines()}, dump)
    if cmd == "chain":
        chain = classical.polycyclic_chain(oracle, gens, cap)
        return Report(EXIT_OK, {"chain": _hex_list(oracle, chain.elements),
                                "subgroup_orders": chain.subgroup_orders(oracle, cap)})
    if cmd == "solvable":
        series = classical.derived_series(oracle, gens, cap)
        return Report(EXIT_OK if series.solvable else EXIT_NO,
                      {"answer": series.solvable, "derived_series_orders": series.orders})
    if cmd == "member":
        if cfg.element is None:
            raise UsageError("member needs --element")
        h = oracle.from_hex(cfg.element)
        base = parse_elements(oracle, cfg.subgroup) if cfg.subgroup else gens
        return _decision(reductions.is_member(oracle, base, h, eps, rng, cap))
    sub = parse_elements(oracle, cfg.subgroup)
    if cmd == "subgroup":
        return _decision(reductions.is_subgroup(oracle, sub, gens, eps, rng, cap))
    if cmd == "equal":
        other = parse_elements(oracle, cfg.other) if cfg.other else gens
        return _decision(reductions.groups_equal(oracle, sub, other, eps, rng, cap))
    if cmd == "normal":
        return _decision(reductions.is_normal(oracle, sub, gens, eps, rng, cap))
    if cmd == "decompose":
        dec = factorgroup.quotient_structure(oracle, gens, sub, eps, rng, verify=cfg.verify, cap=cap)
        return Report(EXIT_OK, {"prime_powers": dec.prime_powers, "sample_count": len(dec.samples),
                                "generator_orders": dec.orders, "N": dec.N})
    raise UsageError(f"unknown command {cmd}")  # pragma: no cover


def run(cfg: RunConfig) -> Report:
    """Load the group, dispatch, and attach the common report fields."""
    t0 = time.perf_counter()
    try:
        spec = bb.load_spec(cfg.group)
        oracle = bb.make_oracle(spec)
    except BadSpec as exc:
        return Report(EXIT_USAGE, {"error": str(exc)})
    rng = np.random.default_rng(cfg.seed)
    try:
        rep = execute(cfg, oracle, rng)
    except (UsageError, InvalidEncoding, DomainMismatch, NotSubgroup, NotNormal, NotAbelianQuotient) as exc:
        rep = Report(EXIT_USAGE, {"error": f"{type(exc).__name__}: {exc}"})
    except NotSolvable as exc:
        rep = Report(EXIT_UNSOLVABLE, {"error": f"NotSolvable: {exc}"})
    except (BudgetExhausted, SizeLimitExceeded) as exc:
        rep = Report(EXIT_LIMIT, {"error": f"{type(exc).__name__}: {exc}"})
    rep.fields.update(
        command=cfg.command,
        group=spec.label(),
        epsilon=cfg.epsilon,
        seed=cfg.seed,
        queries=oracle.queries,
        invalid_queries=oracle.invalid_queries,
        exit_status=rep.status,
    )
    rep.fields["wall_time_s"] = round(time.perf_counter() - t0, 4)
    return rep


def render(rep: Report, record: bool) -> str:
    if record:
        doc = {k: v for k, v in rep.fields.items() if k != "wall_time_s"}
        doc["schema"] = RECORD_SCHEMA
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"
    lines = [f"{k}: {v}" for k, v in rep.fields.items() if k != "state"]
    if rep.text:
        lines.append(rep.text.rstrip("\n"))
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qsolvable", description="Simulated quantum algorithms for solvable black-box groups.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--group", required=True, help="JSON group spec file")
    p.add_argument("--subgroup", help="JSON file or comma-separated hex generators")
    p.add_argument("--other", help="second generating set for 'equal' (default: the group's generators)")
    p.add_argument("--element", help="hex-encoded element")
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--record", action="store_true", help="byte-stable JSON output")
    p.add_argument("--verify", action="store_true", help="cross-check against closure enumeration")
    p.add_argument("--max-group-size", type=int, default=classical.DEFAULT_SIZE_CAP)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            group=args.group,
            subgroup=args.subgroup,
            other=args.other,
            element=args.element,
            epsilon=args.epsilon,
            seed=args.seed,
            record=args.record,
            verify=args.verify,
            max_group_size=args.max_group_size,
        )
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"qsolvable: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep = run(cfg)
    sys.stdout.write(render(rep, cfg.record))
    if "error" in rep.fields and not cfg.record:
        print(rep.fields["error"], file=sys.stderr)
    return rep.status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
