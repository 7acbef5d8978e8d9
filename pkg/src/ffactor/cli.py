"""Command-line entry point.

Subcommands bind the library modules to instance files and reports:

  solve             find a perfect factor by augmentation
  rank              obstruction rank (optionally with the witness tree)
  check             decide one of the properties p1..p4
  stream            run a prefix of the countable-graph construction
  suite             run the full invariant suite
  export-dot        render an instance (and its factor, if any) as DOT
  hereditary-sample tabulate hereditary-step outcomes over small instances

Exit codes are a stable contract: 0 success or property true, 1 property
false, 2 input error, 3 no perfect factor, 4 suite or verification
violation, 5 search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .core import OMEGA, load_instance
from .errors import BudgetExceeded, FFactorError
from .obstruction import obstruction_rank, obstruction_witness, witness_to_json
from .properties import (
    PropertyId,
    check_property,
    hereditary_step,
    perfect_factor_bruteforce,
)
from .stream import make_family, schedule_violations, stream_factor
from .suite import SuiteConfig, run_suite
from .trails import solve_by_augmentation
from .universe import exhaustive_instances

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2
EXIT_NO_FACTOR = 3
EXIT_VIOLATION = 4
EXIT_BUDGET = 5


def _default_node_budget() -> int | None:
    raw = os.environ.get("FFACTOR_BUDGET_NODES")
    return int(raw) if raw else None


def _budgets(args: argparse.Namespace) -> dict:
    return {
        "max_edges": getattr(args, "budget_edges", None),
        "max_factors": getattr(args, "budget_factors", None),
        "node_budget": getattr(args, "budget_nodes", None) or _default_node_budget(),
    }


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _dump(doc: object) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def cmd_solve(args: argparse.Namespace) -> int:
    problem = load_instance(args.instance)
    budgets = _budgets(args)
    factor = solve_by_augmentation(problem)
    if args.verify:
        oracle = perfect_factor_bruteforce(problem, max_edges=budgets["max_edges"])
        if (oracle is None) != (factor is None):
            sys.stderr.write(
                "verification failed: solver and oracle existence disagree\n"
            )
            return EXIT_VIOLATION
    if factor is None:
        _emit("null\n", args.out)
        return EXIT_NO_FACTOR
    ordered = [list(e) for e in problem.graph.sorted_edges if e in factor]
    _emit(_dump(ordered), args.out)
    return EXIT_OK


def cmd_rank(args: argparse.Namespace) -> int:
    problem = load_instance(args.instance)
    budgets = _budgets(args)
    rank = obstruction_rank(problem, node_budget=budgets["node_budget"])
    doc: dict = {"rank": rank}
    if args.witness:
        witness = obstruction_witness(problem, node_budget=budgets["node_budget"])
        doc["witness"] = None if witness is None else witness_to_json(witness)
    _emit(_dump(doc), args.out)
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    problem = load_instance(args.instance)
    verdict = check_property(
        PropertyId(args.property), problem, **_budgets(args)
    )
    _emit("true\n" if verdict else "false\n", args.out)
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_stream(args: argparse.Namespace) -> int:
    if args.steps < 0:
        sys.stderr.write("error: --steps must be nonnegative\n")
        return EXIT_INPUT
    f_value = None
    if args.f is not None:
        f_value = OMEGA if args.f == "omega" else int(args.f)
    source, chooser = make_family(args.family, f_value)
    report = stream_factor(source, chooser, args.steps)
    doc = report.to_json()
    doc["schedule_ok"] = not schedule_violations(source, args.steps)
    _emit(_dump(doc), args.out)
    if report.violations or not doc["schedule_ok"]:
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_suite(args: argparse.Namespace) -> int:
    config = SuiteConfig(
        seed=args.seed,
        max_exhaustive_vertices=args.max_exhaustive,
        sample_count_5=args.samples_5,
        sample_count_6=args.samples_6,
        sample_count_7=args.samples_7,
        trail_sample_count=args.trail_samples,
        degeneration_count=args.degeneration_samples,
        ray_steps=args.ray_steps,
        workers=args.workers,
        inject_fault=args.inject_fault,
        **{
            k: v
            for k, v in {
                "node_budget": args.budget_nodes or _default_node_budget(),
                "max_factors": args.budget_factors,
                "max_edges": args.budget_edges,
            }.items()
            if v is not None
        },
    )
    result = run_suite(config)
    text = _dump(result.to_json())
    if args.out:
        _emit(text, args.out)
        for check in result.checks:
            sys.stdout.write(
                f"{check.name}: {'ok' if check.ok else 'FAIL'} "
                f"({check.instances} instances, {len(check.failures)} failures)\n"
            )
    else:
        sys.stdout.write(text)
    if not result.ok:
        for check in result.checks:
            for failure in check.failures[:10]:
                sys.stderr.write(f"{check.name}: {failure}\n")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_export_dot(args: argparse.Namespace) -> int:
    problem = load_instance(args.instance)
    factor = solve_by_augmentation(problem) or frozenset()
    lines = ["graph instance {"]
    for v in problem.graph.vertices:
        lines.append(f'  "{v}" [label="{v} (f={problem.f[v]})"];')
    for e in problem.graph.sorted_edges:
        style = "bold" if e in factor else "dashed"
        lines.append(f'  "{e[0]}" -- "{e[1]}" [style={style}];')
    lines.append("}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_hereditary_sample(args: argparse.Namespace) -> int:
    pid = PropertyId(args.property)
    budgets = _budgets(args)
    cache: dict = {}
    rows = []
    gated_failures = 0
    for n in range(1, args.max_vertices + 1):
        instances = held = counterexamples = 0
        for _label, problem in exhaustive_instances(n):
            if len(problem.graph.vertices) != n:
                continue
            instances += 1
            if not check_property(pid, problem, cache=cache, **budgets):
                continue
            held += 1
            report = hereditary_step(pid, problem, cache=cache, **budgets)
            counterexamples += len(report.counterexamples)
        rows.append((n, instances, held, counterexamples))
        if pid is not PropertyId.P3:
            gated_failures += counterexamples
    sys.stdout.write(f"hereditary-step sample for {pid.value}\n")
    sys.stdout.write("vertices  instances  property-held  counterexamples\n")
    for n, instances, held, counterexamples in rows:
        sys.stdout.write(
            f"{n:>8}  {instances:>9}  {held:>13}  {counterexamples:>15}\n"
        )
    return EXIT_VIOLATION if gated_failures else EXIT_OK


def _add_budget_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--budget-nodes",
        type=int,
        default=None,
        help="node budget for the obstruction recursion "
        "(default: FFACTOR_BUDGET_NODES or 5000000)",
    )
    parser.add_argument(
        "--budget-factors",
        type=int,
        default=None,
        help="cap on enumerated factors (default 1000000)",
    )
    parser.add_argument(
        "--budget-edges",
        type=int,
        default=None,
        help="edge-count cap for exhaustive enumeration (default 20)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ffactor",
        description="degree-constrained subgraph toolkit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="find a perfect factor")
    p_solve.add_argument("instance")
    p_solve.add_argument("--verify", action="store_true",
                         help="cross-check against the subset oracle")
    p_solve.add_argument("--out", default=None)
    _add_budget_flags(p_solve)
    p_solve.set_defaults(fn=cmd_solve)

    p_rank = sub.add_parser("rank", help="obstruction rank")
    p_rank.add_argument("instance")
    p_rank.add_argument("--witness", action="store_true",
                        help="attach the witness tree")
    p_rank.add_argument("--out", default=None)
    _add_budget_flags(p_rank)
    p_rank.set_defaults(fn=cmd_rank)

    p_check = sub.add_parser("check", help="decide a property")
    p_check.add_argument("instance")
    p_check.add_argument(
        "--property", required=True, choices=[p.value for p in PropertyId]
    )
    p_check.add_argument("--out", default=None)
    _add_budget_flags(p_check)
    p_check.set_defaults(fn=cmd_check)

    p_stream = sub.add_parser("stream", help="countable-graph prefix run")
    p_stream.add_argument(
        "--family", required=True, choices=["double-ray", "bipartite", "complete"]
    )
    p_stream.add_argument("--f", default=None,
                          help="capacity (must match the family; 'omega' allowed)")
    p_stream.add_argument("--steps", type=int, required=True)
    p_stream.add_argument("--out", default=None)
    p_stream.set_defaults(fn=cmd_stream)

    p_suite = sub.add_parser("suite", help="run the invariant suite")
    p_suite.add_argument("--seed", type=int, default=SuiteConfig().seed)
    p_suite.add_argument("--workers", type=int, default=1)
    p_suite.add_argument("--out", default=None)
    p_suite.add_argument("--max-exhaustive", type=int, default=4,
                         help="vertex bound of the exhaustive layer")
    p_suite.add_argument("--samples-5", type=int, default=SuiteConfig().sample_count_5)
    p_suite.add_argument("--samples-6", type=int, default=SuiteConfig().sample_count_6)
    p_suite.add_argument("--samples-7", type=int, default=SuiteConfig().sample_count_7)
    p_suite.add_argument("--trail-samples", type=int,
                         default=SuiteConfig().trail_sample_count)
    p_suite.add_argument("--degeneration-samples", type=int,
                         default=SuiteConfig().degeneration_count)
    p_suite.add_argument("--ray-steps", type=int, default=SuiteConfig().ray_steps)
    p_suite.add_argument("--inject-fault", default=None,
                         choices=["bad-flip"],
                         help="testing hook: corrupt flips to prove the suite fails")
    _add_budget_flags(p_suite)
    p_suite.set_defaults(fn=cmd_suite)

    p_dot = sub.add_parser("export-dot", help="emit DOT with the factor styled")
    p_dot.add_argument("instance")
    p_dot.add_argument("--out", default=None)
    p_dot.set_defaults(fn=cmd_export_dot)

    p_hs = sub.add_parser("hereditary-sample",
                          help="hereditary-step outcomes over small instances")
    p_hs.add_argument(
        "--property", required=True, choices=[p.value for p in PropertyId]
    )
    p_hs.add_argument("--max-vertices", type=int, default=4)
    _add_budget_flags(p_hs)
    p_hs.set_defaults(fn=cmd_hereditary_sample)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except BudgetExceeded as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except FFactorError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
