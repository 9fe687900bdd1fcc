"""Command-line interface.

Subcommands: `run` simulates one scenario and prints its metrics, `compare`
replays a scenario under several policies and writes CSV reports plus
figures, `analyze` prints the per-node reliability table and the headline
performance/reliability picks.

Exit codes: 0 on success, 2 for scenario or argument problems, 3 for I/O
failures.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .errors import GridRelyError, ValidationError
from .experiment import compare_policies, emit_reports
from .perf import selection_report
from .scenario_io import load_scenario
from .sim import run


def _fmt(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.3f}"


def _cmd_run(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    metrics = run(scenario, collect_events=args.event_log is not None)
    if args.event_log is not None:
        lines = metrics.event_log or ()
        Path(args.event_log).write_text("".join(line + "\n" for line in lines))

    completed = sum(jm.completed for jm in metrics.jobs)
    print(f"policy: {scenario.policy.value if hasattr(scenario.policy, 'value') else scenario.policy}")
    print(f"seed: {scenario.seed}")
    print(f"jobs_completed: {completed}/{len(metrics.jobs)}")
    print(f"deadlines_met: {sum(jm.deadline_met for jm in metrics.jobs)}")
    print(f"mean_job_makespan_s: {_fmt(metrics.mean_job_makespan_s)}")
    print(f"total_task_failures: {metrics.total_task_failures}")
    print(f"events_processed: {metrics.events_processed}")
    print(f"end_time_s: {_fmt(metrics.end_time_s)}")
    for jm in metrics.jobs:
        if jm.completed:
            print(
                f"job {jm.job_id}: completed makespan_s={_fmt(jm.makespan_s)} "
                f"deadline_met={'true' if jm.deadline_met else 'false'}"
            )
        else:
            print(f"job {jm.job_id}: not_completed")
    for nm in metrics.nodes:
        rate = nm.successes / nm.attempts if nm.attempts else 1.0
        print(
            f"node {nm.node_id}: attempts={nm.attempts} successes={nm.successes} "
            f"raw_success_rate={rate:.3f} observed_availability={nm.observed_availability:.3f}"
        )
    if args.event_log is not None:
        print(f"event log written to {args.event_log}")
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    policies = [p.strip() for p in args.policies.split(",") if p.strip()]
    scenario = load_scenario(args.scenario)
    result = compare_policies(
        scenario, policies, replications=args.replications, base_seed=args.seed
    )
    paths = emit_reports(result, args.out, figures=not args.no_figures)
    for s in result.summaries:
        print(
            f"{s.policy.value}: jobs_completed={s.jobs_completed}/{s.jobs_total} "
            f"mean_makespan_s={_fmt(s.mean_makespan_s)} "
            f"total_task_failures={s.total_task_failures}"
        )
    print(f"wrote {len(paths)} report files to {args.out}")
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    report = selection_report(scenario.nodes)
    csv_text = report.to_csv()
    print(csv_text, end="")
    print(f"performance_pick: node {report.performance_pick} (highest mips)")
    print(f"reliability_pick: node {report.reliability_pick} (lowest failure-to-repair ratio)")
    if args.out is not None:
        Path(args.out).write_text(csv_text)
        print(f"table written to {args.out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridrely",
        description="Reliability-aware grid scheduling simulator.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one scenario and print its metrics")
    p_run.add_argument("scenario", help="path to a scenario JSON file")
    p_run.add_argument(
        "--event-log",
        metavar="PATH",
        help="also write the tab-separated event log to PATH",
    )
    p_run.set_defaults(func=_cmd_run)

    p_cmp = sub.add_parser("compare", help="run a scenario under several policies")
    p_cmp.add_argument("scenario", help="path to a scenario JSON file")
    p_cmp.add_argument(
        "--policies",
        required=True,
        help="comma-separated policies (reliability_first, min_time, cost_aware)",
    )
    p_cmp.add_argument("--replications", type=int, default=1, help="runs per policy (default 1)")
    p_cmp.add_argument(
        "--seed",
        type=int,
        default=None,
        help="base seed; replication k uses seed+k (default: scenario seed)",
    )
    p_cmp.add_argument("--out", required=True, help="directory for report files")
    p_cmp.add_argument(
        "--no-figures", action="store_true", help="skip rendering PNG figures"
    )
    p_cmp.set_defaults(func=_cmd_compare)

    p_an = sub.add_parser("analyze", help="print the per-node reliability table")
    p_an.add_argument("scenario", help="path to a scenario JSON file")
    p_an.add_argument("--out", metavar="PATH", help="also write the table as CSV to PATH")
    p_an.set_defaults(func=_cmd_analyze)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print("error: invalid input:", file=sys.stderr)
        for violation in exc.violations:
            print(f"  - {violation}", file=sys.stderr)
        return 2
    except GridRelyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
