"""Multi-policy comparison experiments and their report files.

An experiment replays one scenario under several policies, `replications`
times each; replication k runs with seed base_seed + k so every policy sees
the same failure history in the same replication. Reports are written
atomically (temp file then rename): three CSVs, a plain-text summary and,
unless disabled, PNG figures next to them.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from pathlib import Path
from statistics import fmean
from typing import Sequence

from .errors import ValidationError
from .perf import SelectionReport, selection_report
from .policy import PolicyId
from .scenario_io import load_scenario
from .sim import Metrics, Scenario, run

MAKESPANS_CSV_HEADER = "policy,replication,seed,job_id,makespan_s,deadline_met"
NODES_CSV_HEADER = "policy,node_id,attempts,successes,raw_success_rate,observed_availability"

_POLICY_NAMES = ", ".join(p.value for p in PolicyId)


@dataclass(frozen=True)
class ExperimentSpec:
    """A description of a comparison run, ready to execute."""

    scenario_path: str
    policies: tuple[PolicyId | str, ...]
    replications: int = 1
    base_seed: int | None = None  # None: use the scenario's own seed
    out_dir: str | None = None


@dataclass(frozen=True)
class RunRecord:
    policy: PolicyId
    replication: int
    seed: int
    metrics: Metrics


@dataclass(frozen=True)
class NodeAggregate:
    """One node's history pooled across the replications of one policy."""

    node_id: int
    attempts: int
    successes: int
    raw_success_rate: float
    observed_availability: float  # mean across replications


@dataclass(frozen=True)
class PolicySummary:
    policy: PolicyId
    jobs_total: int
    jobs_completed: int
    deadlines_met: int
    mean_makespan_s: float | None
    min_makespan_s: float | None
    max_makespan_s: float | None
    total_task_failures: int
    nodes: tuple[NodeAggregate, ...]


@dataclass(frozen=True)
class ExperimentResult:
    scenario: Scenario
    base_seed: int
    replications: int
    runs: tuple[RunRecord, ...]
    summaries: tuple[PolicySummary, ...]
    selection: SelectionReport


def _coerce_policies(policies: Sequence[PolicyId | str]) -> tuple[list[PolicyId], list[str]]:
    coerced: list[PolicyId] = []
    violations: list[str] = []
    for p in policies:
        if isinstance(p, PolicyId):
            coerced.append(p)
            continue
        try:
            coerced.append(PolicyId(p))
        except ValueError:
            violations.append(f"unknown policy {p!r} (expected one of: {_POLICY_NAMES})")
    return coerced, violations


def _summarise(policy: PolicyId, records: Sequence[RunRecord]) -> PolicySummary:
    makespans = [
        jm.makespan_s for rec in records for jm in rec.metrics.jobs if jm.makespan_s is not None
    ]
    node_ids = [nm.node_id for nm in records[0].metrics.nodes]
    aggregates = []
    for nid in node_ids:
        per_rep = [next(nm for nm in rec.metrics.nodes if nm.node_id == nid) for rec in records]
        attempts = sum(nm.attempts for nm in per_rep)
        successes = sum(nm.successes for nm in per_rep)
        aggregates.append(
            NodeAggregate(
                node_id=nid,
                attempts=attempts,
                successes=successes,
                raw_success_rate=successes / attempts if attempts else 1.0,
                observed_availability=fmean(nm.observed_availability for nm in per_rep),
            )
        )
    return PolicySummary(
        policy=policy,
        jobs_total=sum(len(rec.metrics.jobs) for rec in records),
        jobs_completed=sum(jm.completed for rec in records for jm in rec.metrics.jobs),
        deadlines_met=sum(jm.deadline_met for rec in records for jm in rec.metrics.jobs),
        mean_makespan_s=fmean(makespans) if makespans else None,
        min_makespan_s=min(makespans) if makespans else None,
        max_makespan_s=max(makespans) if makespans else None,
        total_task_failures=sum(rec.metrics.total_task_failures for rec in records),
        nodes=tuple(aggregates),
    )


def compare_policies(
    scenario: Scenario,
    policies: Sequence[PolicyId | str],
    replications: int = 1,
    base_seed: int | None = None,
) -> ExperimentResult:
    """Run the scenario under each policy and summarise per policy."""
    coerced, violations = _coerce_policies(policies)
    if not policies:
        violations.append("no policies given")
    seen: set[PolicyId] = set()
    for p in coerced:
        if p in seen:
            violations.append(f"duplicate policy {p.value!r}")
        seen.add(p)
    if replications < 1:
        violations.append("replications must be >= 1")
    if violations:
        raise ValidationError(violations)

    if base_seed is None:
        base_seed = scenario.seed
    runs: list[RunRecord] = []
    summaries: list[PolicySummary] = []
    for policy in coerced:
        records = []
        for k in range(replications):
            variant = replace(scenario, policy=policy, seed=base_seed + k)
            records.append(RunRecord(policy=policy, replication=k, seed=base_seed + k, metrics=run(variant)))
        runs.extend(records)
        summaries.append(_summarise(policy, records))
    return ExperimentResult(
        scenario=scenario,
        base_seed=base_seed,
        replications=replications,
        runs=tuple(runs),
        summaries=tuple(summaries),
        selection=selection_report(scenario.nodes),
    )


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Load the scenario, run the comparison and, if out_dir is set, emit reports."""
    scenario = load_scenario(spec.scenario_path)
    result = compare_policies(
        scenario, list(spec.policies), replications=spec.replications, base_seed=spec.base_seed
    )
    if spec.out_dir is not None:
        emit_reports(result, spec.out_dir)
    return result


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _fmt_bool(value: bool) -> str:
    return "true" if value else "false"


def _makespans_csv(result: ExperimentResult) -> str:
    lines = [MAKESPANS_CSV_HEADER]
    for rec in result.runs:
        for jm in rec.metrics.jobs:
            makespan = "" if jm.makespan_s is None else repr(jm.makespan_s)
            lines.append(
                f"{rec.policy.value},{rec.replication},{rec.seed},{jm.job_id},"
                f"{makespan},{_fmt_bool(jm.deadline_met)}"
            )
    return "\n".join(lines) + "\n"


def _nodes_csv(result: ExperimentResult) -> str:
    lines = [NODES_CSV_HEADER]
    for summary in result.summaries:
        for agg in summary.nodes:
            lines.append(
                f"{summary.policy.value},{agg.node_id},{agg.attempts},{agg.successes},"
                f"{agg.raw_success_rate!r},{agg.observed_availability!r}"
            )
    return "\n".join(lines) + "\n"


def _summary_text(result: ExperimentResult) -> str:
    lines = [
        f"replications: {result.replications}",
        f"base_seed: {result.base_seed}",
        f"policies: {', '.join(s.policy.value for s in result.summaries)}",
        "",
    ]
    for s in result.summaries:
        def fmt(value):
            return "n/a" if value is None else f"{value:.3f}"

        lines += [
            f"policy {s.policy.value}:",
            f"  jobs_completed: {s.jobs_completed}/{s.jobs_total}",
            f"  deadlines_met: {s.deadlines_met}",
            f"  mean_makespan_s: {fmt(s.mean_makespan_s)}",
            f"  min_makespan_s: {fmt(s.min_makespan_s)}",
            f"  max_makespan_s: {fmt(s.max_makespan_s)}",
            f"  total_task_failures: {s.total_task_failures}",
            "",
        ]
    lines += [
        f"performance_pick: node {result.selection.performance_pick} (highest mips)",
        f"reliability_pick: node {result.selection.reliability_pick} (lowest failure-to-repair ratio)",
    ]
    return "\n".join(lines) + "\n"


def emit_reports(result: ExperimentResult, out_dir: str | Path, figures: bool = True) -> list[Path]:
    """Write makespans.csv, nodes.csv, reliability.csv, summary.txt and figures.

    Every file is written to a temp name and renamed into place, so readers
    never observe a half-written report. Returns the paths written.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in (
        ("makespans.csv", _makespans_csv(result)),
        ("nodes.csv", _nodes_csv(result)),
        ("reliability.csv", result.selection.to_csv()),
        ("summary.txt", _summary_text(result)),
    ):
        path = out / name
        _write_atomic(path, text)
        written.append(path)
    if figures:
        from .plots import render_all

        written.extend(render_all(result, out))
    return written
