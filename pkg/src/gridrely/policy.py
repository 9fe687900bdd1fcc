"""Node ranking policies and empirical success-rate tracking.

The scheduler ranks candidate nodes for a task under one of three policies:

- reliability_first: highest observed success rate wins; rates within
  epsilon of the best are treated as tied and broken by estimated
  execution time, then node id.
- min_time: shortest estimated execution time, then node id.
- cost_aware: cheapest total cost (cost_per_sec * estimated execution
  time), then highest MIPS, then node id.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import EmptyNodeSet
from .model import GridNode, QosRequirement, Task, estimated_exec_time
from .perf import classify_reliability, steady_state_availability


class RateMode(enum.Enum):
    """How observed attempt counts turn into a success-rate estimate."""

    RAW = "raw"
    SMOOTHED = "smoothed"


class PolicyId(enum.Enum):
    RELIABILITY_FIRST = "reliability_first"
    MIN_TIME = "min_time"
    COST_AWARE = "cost_aware"


@dataclass(frozen=True)
class NodeStats:
    """Observed dispatch history of one node."""

    node_id: int
    attempts: int = 0
    successes: int = 0


def success_rate(stats: NodeStats, mode: RateMode = RateMode.SMOOTHED) -> float:
    """Estimated probability that a task run on this node completes.

    RAW is the plain ratio successes/attempts and is optimistically 1.0 for
    an untried node. SMOOTHED applies add-one smoothing,
    (successes + 1) / (attempts + 2), so a single failure cannot pin a node
    at zero forever.
    """
    if mode is RateMode.RAW:
        if stats.attempts == 0:
            return 1.0
        return stats.successes / stats.attempts
    return (stats.successes + 1) / (stats.attempts + 2)


def failure_rate(stats: NodeStats, mode: RateMode = RateMode.SMOOTHED) -> float:
    return 1.0 - success_rate(stats, mode)


Candidates = Sequence[tuple[GridNode, NodeStats]]


def rank_reliability_first(
    candidates: Candidates,
    task: Task,
    epsilon: float = 1e-9,
    mode: RateMode = RateMode.SMOOTHED,
) -> list[int]:
    """Order node ids by success rate, best first, with banded tie-breaks.

    Repeatedly extracts the best remaining candidate: among nodes whose
    rate is within epsilon of the current maximum, the one with the
    smallest estimated execution time (then smallest id) wins. This makes
    the tie band local to each extraction rather than a global sort key.
    """
    if not candidates:
        raise EmptyNodeSet("no candidate nodes to rank")
    remaining = [
        (success_rate(stats, mode), estimated_exec_time(task, node), node.id)
        for node, stats in candidates
    ]
    order: list[int] = []
    while remaining:
        best_rate = max(r for r, _, _ in remaining)
        tied = [c for c in remaining if best_rate - c[0] <= epsilon]
        pick = min(tied, key=lambda c: (c[1], c[2]))
        order.append(pick[2])
        remaining.remove(pick)
    return order


def rank_min_time(candidates: Candidates, task: Task) -> list[int]:
    """Order node ids by estimated execution time, fastest first."""
    if not candidates:
        raise EmptyNodeSet("no candidate nodes to rank")
    keyed = [(estimated_exec_time(task, node), node.id) for node, _ in candidates]
    return [node_id for _, node_id in sorted(keyed)]


def rank_cost_aware(candidates: Candidates, task: Task) -> list[int]:
    """Order node ids by total run cost, cheapest first.

    Cost ties prefer the faster node (higher MIPS), then the lower id, so
    a fleet of free nodes degenerates to min_time ordering.
    """
    if not candidates:
        raise EmptyNodeSet("no candidate nodes to rank")
    keyed = [
        (node.cost_per_sec * estimated_exec_time(task, node), -node.mips, node.id)
        for node, _ in candidates
    ]
    return [node_id for _, _, node_id in sorted(keyed)]


def rank(
    policy: PolicyId,
    candidates: Candidates,
    task: Task,
    *,
    epsilon: float = 1e-9,
    mode: RateMode = RateMode.SMOOTHED,
) -> list[int]:
    """Rank candidates for `task` under `policy`, best node id first."""
    if policy is PolicyId.RELIABILITY_FIRST:
        return rank_reliability_first(candidates, task, epsilon=epsilon, mode=mode)
    if policy is PolicyId.MIN_TIME:
        return rank_min_time(candidates, task)
    if policy is PolicyId.COST_AWARE:
        return rank_cost_aware(candidates, task)
    raise ValueError(f"unknown policy {policy!r}")


def filter_by_qos(
    nodes: Sequence[GridNode],
    qos: QosRequirement | None,
    availability: Mapping[int, float] | None = None,
) -> list[GridNode]:
    """Keep nodes whose predicted reliability meets the job's minimum band.

    Without a min_level this is the identity. Availability defaults to the
    analytic steady-state value per node; pass a mapping to override (for
    example with observed availabilities).
    """
    if qos is None or qos.min_level is None:
        return list(nodes)
    kept = []
    for node in nodes:
        avail = (
            availability[node.id]
            if availability is not None
            else steady_state_availability(node.failure)
        )
        if classify_reliability(avail) >= qos.min_level:
            kept.append(node)
    return kept
