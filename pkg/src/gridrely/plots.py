"""Report figures rendered straight to PNG files.

Figures are built on matplotlib Figure objects (no pyplot state) and saved
atomically next to the CSV reports.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
from matplotlib.figure import Figure

from .experiment import ExperimentResult

DPI = 150


def _save(fig: Figure, path: Path) -> None:
    tmp = path.with_name(path.name + ".tmp")
    fig.savefig(tmp, dpi=DPI, format="png", bbox_inches="tight")
    os.replace(tmp, path)


def _makespan_figure(result: ExperimentResult) -> Figure:
    fig = Figure(figsize=(7.0, 4.5))
    ax = fig.add_subplot()
    labels = [s.policy.value for s in result.summaries]
    means = [s.mean_makespan_s if s.mean_makespan_s is not None else 0.0 for s in result.summaries]
    lower = [
        m - (s.min_makespan_s if s.min_makespan_s is not None else m)
        for m, s in zip(means, result.summaries)
    ]
    upper = [
        (s.max_makespan_s if s.max_makespan_s is not None else m) - m
        for m, s in zip(means, result.summaries)
    ]
    ax.bar(labels, means, yerr=[lower, upper], capsize=5, color="C0")
    ax.set_ylabel("job makespan (s)")
    ax.set_title("Mean job makespan by policy (whiskers: min/max of completed jobs)")
    ax.grid(axis="y", alpha=0.3)
    return fig


def _reliability_figure(result: ExperimentResult) -> Figure:
    rows = result.selection.rows
    ids = [str(r.node_id) for r in rows]
    fig = Figure(figsize=(8.0, 5.5))
    ax_ratio, ax_avail = fig.subplots(2, 1, sharex=True)

    colors = [
        "C1" if r.node_id == result.selection.reliability_pick else "C0" for r in rows
    ]
    ax_ratio.bar(ids, [r.failure_to_repair_ratio for r in rows], color=colors)
    ax_ratio.set_ylabel("failure/repair ratio")
    ax_ratio.set_title(
        f"Node reliability (orange: reliability pick, node {result.selection.reliability_pick})"
    )
    ax_ratio.grid(axis="y", alpha=0.3)

    colors = [
        "C2" if r.node_id == result.selection.performance_pick else "C0" for r in rows
    ]
    ax_avail.bar(ids, [r.availability for r in rows], color=colors)
    ax_avail.set_ylim(0.0, 1.05)
    ax_avail.set_ylabel("steady-state availability")
    ax_avail.set_xlabel(
        f"node id (green: performance pick, node {result.selection.performance_pick})"
    )
    ax_avail.grid(axis="y", alpha=0.3)
    return fig


def _success_rate_figure(result: ExperimentResult) -> Figure:
    fig = Figure(figsize=(8.0, 4.5))
    ax = fig.add_subplot()
    node_ids = [agg.node_id for agg in result.summaries[0].nodes]
    x = np.arange(len(node_ids), dtype=float)
    width = 0.8 / max(len(result.summaries), 1)
    for i, summary in enumerate(result.summaries):
        rates = [agg.raw_success_rate for agg in summary.nodes]
        ax.bar(x + i * width, rates, width=width, label=summary.policy.value)
    ax.set_xticks(x + width * (len(result.summaries) - 1) / 2.0)
    ax.set_xticklabels([str(nid) for nid in node_ids])
    ax.set_ylim(0.0, 1.05)
    ax.set_xlabel("node id")
    ax.set_ylabel("observed success rate")
    ax.set_title("Observed per-node success rate by policy (pooled replications)")
    ax.legend()
    ax.grid(axis="y", alpha=0.3)
    return fig


def render_all(result: ExperimentResult, out_dir: str | Path) -> list[Path]:
    """Render every report figure into out_dir; returns the PNG paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, build in (
        ("makespan_by_policy.png", _makespan_figure),
        ("node_reliability.png", _reliability_figure),
        ("node_success_rates.png", _success_rate_figure),
    ):
        path = out / name
        _save(build(result), path)
        written.append(path)
    return written
