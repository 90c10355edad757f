"""Command-line interface.

Subcommands: ``cost``, ``verify-gap``, ``table2``, ``gen`` and ``bench``.
Exit codes: 0 ok, 2 bad input, 3 enumeration limit exceeded, 4 instance
shape unsuitable for ``table2``.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import Instance, InstanceError, ValueVector, dump_instance, load_instance
from .generate import FAMILIES, generate
from .oracle import (
    DEFAULT_LIMIT,
    EnumerationLimitError,
    ShapeError,
    check_limit,
    make_strategy,
    monte_carlo_cost,
    pinned_root_costs,
    solve,
    strategy_expected_cost,
)
from .strategies import STRATEGY_NAMES, StrategyError

EXIT_OK, EXIT_ERROR, EXIT_INPUT, EXIT_LIMIT, EXIT_SHAPE = 0, 1, 2, 3, 4

COST_FIELDS = ("instance_id", "strategy", "n", "B", "expected_cost", "zero_cost",
               "one_cost", "opt_cost", "ratio")
BENCH_FIELDS = COST_FIELDS + ("tests_max",)
GAP_FIELDS = ("instance_id", "n", "B", "eval_cost", "l0_cost", "l1_cost", "verify_cost",
              "opt_tree_zero_cost", "opt_tree_one_cost", "gap")
TABLE2_FIELDS = ("root", "left", "expected_cost", "is_min")

# V(f) < E(f) is reported only beyond this relative margin
GAP_RTOL = 1e-9


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    instance: Path | None
    strategies: list[str]
    mode: str = "exact"
    trials: int = 10_000
    seed: int | None = None
    limit: int = DEFAULT_LIMIT
    fmt: str = "table"
    out: Path | None = None

    def __post_init__(self):
        for name in self.strategies:
            if name not in STRATEGY_NAMES:
                raise UsageError(f"unknown strategy {name!r}; choose from {', '.join(STRATEGY_NAMES)}")
        if self.mode == "mc":
            if self.trials < 1:
                raise UsageError(f"--trials must be at least 1, got {self.trials}")
            if self.seed is None:
                raise UsageError("--mode mc requires --seed")


# -- output ----------------------------------------------------------------------

def _money(v) -> str:
    if v is None or v == "":
        return ""
    if isinstance(v, float):
        return f"{v:,.1f}"
    return str(v)


def _format(rows: list[dict], fields, fmt: str, money=()) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({f: ("" if row.get(f) is None else row.get(f)) for f in fields})
        return buf.getvalue()
    cells = [list(fields)]
    for row in rows:
        cells.append([_money(row.get(f)) if f in money else
                      ("" if row.get(f) is None else
                       f"{row[f]:.6g}" if isinstance(row.get(f), float) else str(row[f]))
                      for f in fields])
    widths = [max(len(r[i]) for r in cells) for i in range(len(fields))]
    return "".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in cells)


def _emit(text: str, out: Path | None) -> None:
    # assembled in memory first so a failure never leaves a partial file
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _instance_id(path: Path) -> str:
    return Path(path).stem


# -- commands --------------------------------------------------------------------

def _cost_rows(instance_id: str, inst: Instance, R: ValueVector, config: RunConfig,
               with_tests: bool = False) -> list[dict]:
    sol = None
    if config.mode == "exact" or "opt" in config.strategies:
        check_limit(inst.n, config.limit)
        sol = solve(inst, R, None, config.limit)
    elif inst.n <= config.limit:
        # monte carlo costs still get a ratio when the optimum is computable
        sol = solve(inst, R, None, config.limit)
    opt = sol.value if sol is not None else None
    rows = []
    for name in config.strategies:
        strat = make_strategy(name, inst, R, solution=sol)
        tests_max = None
        if config.mode == "exact":
            if name == "opt":
                expected, zero, one = opt, sol.policy_value(0), sol.policy_value(1)
                tests_max = strategy_expected_cost(strat, inst, R, config.limit).tests_max if with_tests else None
            else:
                rep = strategy_expected_cost(strat, inst, R, config.limit)
                expected, zero, one, tests_max = rep.expected_cost, rep.zero_cost, rep.one_cost, rep.tests_max
        else:
            est = monte_carlo_cost(strat, inst, R, config.trials, config.seed)
            expected, zero, one = est.mean, est.zero_cost, est.one_cost
        if opt is None:
            ratio = None
        elif opt > 0:
            ratio = expected / opt
        else:
            ratio = 1.0 if expected == 0 else math.inf
        row = {
            "instance_id": instance_id, "strategy": name, "n": inst.n, "B": R.B,
            "expected_cost": expected, "zero_cost": zero, "one_cost": one,
            "opt_cost": opt, "ratio": ratio,
        }
        if with_tests:
            row["tests_max"] = tests_max
        rows.append(row)
    return rows


def cmd_cost(config: RunConfig) -> str:
    inst, R = load_instance(config.instance)
    rows = _cost_rows(_instance_id(config.instance), inst, R, config)
    return _format(rows, COST_FIELDS, config.fmt,
                   money=("expected_cost", "zero_cost", "one_cost", "opt_cost"))


def verify_gap_row(instance_id: str, inst: Instance, R: ValueVector, limit: int) -> dict:
    evaluation = solve(inst, R, None, limit)
    l0 = solve(inst, R, 0, limit).value
    l1 = solve(inst, R, 1, limit).value
    E = evaluation.value
    V = l0 + l1
    return {
        "instance_id": instance_id, "n": inst.n, "B": R.B,
        "eval_cost": E, "l0_cost": l0, "l1_cost": l1, "verify_cost": V,
        "opt_tree_zero_cost": evaluation.policy_value(0),
        "opt_tree_one_cost": evaluation.policy_value(1),
        "gap": "TRUE" if V < E - GAP_RTOL * max(1.0, abs(E)) else "FALSE",
    }


def cmd_verify_gap(path: Path, limit: int = DEFAULT_LIMIT, fmt: str = "table") -> str:
    inst, R = load_instance(path)
    row = verify_gap_row(_instance_id(path), inst, R, limit)
    if fmt == "csv":
        return _format([row], GAP_FIELDS, "csv")
    labels = [
        ("instance", "instance_id"), ("n", "n"), ("B", "B"),
        ("E(f) optimal evaluation cost", "eval_cost"),
        ("L0 optimal 0-cost", "l0_cost"), ("L1 optimal 1-cost", "l1_cost"),
        ("V(f) = L0 + L1", "verify_cost"),
        ("optimal tree 0-cost", "opt_tree_zero_cost"),
        ("optimal tree 1-cost", "opt_tree_one_cost"),
        ("V(f) < E(f)", "gap"),
    ]
    width = max(len(a) for a, _ in labels)
    return "".join(f"{a.ljust(width)}  {_money(row[k])}\n" for a, k in labels)


def table2_rows(inst: Instance, R: ValueVector) -> list[dict]:
    pinned = pinned_root_costs(inst, R)
    best = min(t.expected_cost for t in pinned)
    return [
        {"root": f"x{t.root + 1}", "left": f"x{t.left + 1}",
         "expected_cost": t.expected_cost, "is_min": int(t.expected_cost == best)}
        for t in pinned
    ]


def cmd_table2(path: Path, fmt: str = "table") -> str:
    inst, R = load_instance(path)
    rows = table2_rows(inst, R)
    if fmt == "csv":
        return _format(rows, TABLE2_FIELDS, "csv")
    lines = [f"{'root':>4}  {'left':>4}  {'expected cost':>14}\n"]
    for r in rows:
        mark = "  *" if r["is_min"] else ""
        lines.append(f"{r['root']:>4}  {r['left']:>4}  {_money(r['expected_cost']):>14}{mark}\n")
    return "".join(lines)


def cmd_gen(n: int, blocks: int, seed: int, cost_range, prob_range, family: str = "any") -> str:
    inst, R = generate(n, blocks, seed, tuple(cost_range), tuple(prob_range), family)
    return dump_instance(inst, R)


def _bench_instances(args) -> list[tuple[str, Instance, ValueVector]]:
    if args.instance:
        return [(_instance_id(p), *load_instance(p)) for p in args.instance]
    if args.n is None:
        raise UsageError("bench needs --instance paths or a generator spec (--n, --blocks, --count)")
    children = np.random.SeedSequence(args.seed).spawn(args.count)
    out = []
    for idx, child in enumerate(children):
        inst, R = generate(args.n, args.blocks, child, tuple(args.cost_range),
                           tuple(args.prob_range), args.family)
        out.append((f"s{args.seed}-{idx}", inst, R))
    return out


def cmd_bench(args) -> str:
    config = _config(args)
    instances = _bench_instances(args)
    for _, inst, _R in instances:
        if config.mode == "exact":
            check_limit(inst.n, config.limit)
    rows = []
    for instance_id, inst, R in instances:
        rows.extend(_cost_rows(instance_id, inst, R, config, with_tests=True))
    for name in config.strategies:
        ratios = [r["ratio"] for r in rows if r["strategy"] == name and r["ratio"] is not None]
        if not ratios:
            continue
        rows.append({"instance_id": "summary-max", "strategy": name, "ratio": max(ratios)})
        rows.append({"instance_id": "summary-mean", "strategy": name,
                     "ratio": math.fsum(ratios) / len(ratios)})
    return _format(rows, BENCH_FIELDS, config.fmt,
                   money=("expected_cost", "zero_cost", "one_cost", "opt_cost"))


# -- argument parsing ------------------------------------------------------------

def _add_common(p, strategies=False):
    if strategies:
        p.add_argument("--strategy", default="opt",
                       help="comma-separated names: " + ", ".join(STRATEGY_NAMES))
        p.add_argument("--mode", choices=("exact", "mc"), default="exact")
        p.add_argument("--trials", type=int, default=10_000)
        p.add_argument("--seed", type=int, default=None)
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT,
                   help="largest n handled by exact enumeration (default %(default)s)")
    p.add_argument("--format", dest="fmt", choices=("table", "csv"), default="table")
    p.add_argument("--out", type=Path, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symsbfe",
        description="Evaluate symmetric Boolean functions with costly, uncertain tests.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cost", help="expected cost of one or more strategies")
    p.add_argument("--instance", type=Path, required=True)
    _add_common(p, strategies=True)

    p = sub.add_parser("verify-gap", help="optimal evaluation vs verification cost")
    p.add_argument("--instance", type=Path, required=True)
    _add_common(p)

    p = sub.add_parser("table2", help="optimal trees with the first two tests pinned")
    p.add_argument("--instance", type=Path, required=True)
    _add_common(p)

    p = sub.add_parser("gen", help="write a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--blocks", "-B", type=int, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--family", choices=FAMILIES, default="any")
    p.add_argument("--cost-range", type=float, nargs=2, default=(1.0, 10.0), metavar=("LO", "HI"))
    p.add_argument("--prob-range", type=float, nargs=2, default=(0.05, 0.95), metavar=("LO", "HI"))
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("bench", help="cost/OPT ratios over instance files or a seeded sweep")
    p.add_argument("--instance", type=Path, nargs="*", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--blocks", "-B", type=int, default=None)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--family", choices=FAMILIES, default="any")
    p.add_argument("--cost-range", type=float, nargs=2, default=(1.0, 10.0), metavar=("LO", "HI"))
    p.add_argument("--prob-range", type=float, nargs=2, default=(0.05, 0.95), metavar=("LO", "HI"))
    _add_common(p, strategies=True)
    p.set_defaults(seed=0)
    return parser


def _config(args) -> RunConfig:
    return RunConfig(
        instance=getattr(args, "instance", None),
        strategies=[s.strip() for s in args.strategy.split(",") if s.strip()],
        mode=args.mode, trials=args.trials, seed=args.seed, limit=args.limit,
        fmt=args.fmt, out=args.out,
    )


def _dispatch(args) -> str:
    if args.command == "cost":
        return cmd_cost(_config(args))
    if args.command == "verify-gap":
        return cmd_verify_gap(args.instance, args.limit, args.fmt)
    if args.command == "table2":
        return cmd_table2(args.instance, args.fmt)
    if args.command == "gen":
        if args.family == "any" and args.blocks is None:
            raise UsageError("gen: --blocks is required unless --family is kofn or exactk")
        return cmd_gen(args.n, args.blocks, args.seed, args.cost_range, args.prob_range, args.family)
    if args.command == "bench":
        return cmd_bench(args)
    raise UsageError(f"unknown command {args.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = _dispatch(args)
    except (InstanceError, UsageError, StrategyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EnumerationLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except ShapeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    _emit(text, args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
