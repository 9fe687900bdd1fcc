"""Steady-state reliability analysis and Markov reward models.

Every node is a two-state (up/down) continuous-time Markov chain with
exponential failure rate lambda and repair rate mu. A fleet composes into a
system CTMC over all up/down subsets; the reward of a state is the effective
processing capacity (MIPS) of its up nodes. Because nodes are independent,
the steady state has product form, which the tests use as an exact oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, SingularSystem, TooManyNodes
from .model import SECONDS_PER_HOUR, FailureProfile, GridNode, ReliabilityLevel

STATE_CAP = 16

RESIDUAL_TOL = 1e-10


def failure_to_repair_ratio(profile: FailureProfile) -> float:
    """lambda/mu, dimensionless; lower means more reliable."""
    return profile.lambda_per_hour / profile.mu_per_hour


def steady_state_availability(profile: FailureProfile) -> float:
    """Long-run probability the node is up: mu/(lambda+mu)."""
    return profile.mu_per_hour / (profile.lambda_per_hour + profile.mu_per_hour)


def classify_reliability(availability: float) -> ReliabilityLevel:
    """Map an availability fraction onto the five-band reliability scale."""
    if not 0.0 <= availability <= 1.0:
        raise DomainError(f"availability {availability!r} outside [0, 1]")
    if availability < 0.60:
        return ReliabilityLevel.POOR
    if availability < 0.70:
        return ReliabilityLevel.LOW
    if availability < 0.80:
        return ReliabilityLevel.MEDIUM
    if availability < 0.90:
        return ReliabilityLevel.GOOD
    return ReliabilityLevel.HIGH


def effective_mips(node: GridNode) -> float:
    """Processing capacity while up, discounted by the degradation factor."""
    return node.mips * (1.0 - node.failure.degradation)


@dataclass
class MarkovRewardModel:
    """CTMC over node up/down subsets with a capacity reward per state.

    states[i] is a bitmask: bit k set means node k (k-th of the node list
    the model was built from) is up in state i. States are ordered from
    all-up down to all-down. `generator` holds per-second transition rates;
    each row sums to zero. `steady_state` is populated by
    solve_steady_state, not by construction.
    """

    states: list[int]
    generator: np.ndarray
    rewards: np.ndarray
    steady_state: np.ndarray | None = None


def build_system_ctmc(nodes: Sequence[GridNode], cap: int = STATE_CAP) -> MarkovRewardModel:
    """Compose independent per-node up/down chains into one system CTMC.

    From any state, node k fails at rate lambda_k if up and repairs at rate
    mu_k if down; no other transitions exist. Memory grows as 4^N, so fleets
    larger than `cap` (at most 16) are rejected; analyse those with the
    per-node closed forms instead.
    """
    if not 1 <= cap <= STATE_CAP:
        raise ValueError(f"cap must be in 1..{STATE_CAP}, got {cap}")
    n = len(nodes)
    if n == 0:
        raise ValueError("at least one node is required")
    if n > cap:
        raise TooManyNodes(f"{n} nodes exceeds the exact state-space cap of {cap}")

    lam = [node.failure.lambda_per_hour / SECONDS_PER_HOUR for node in nodes]
    mu = [node.failure.mu_per_hour / SECONDS_PER_HOUR for node in nodes]
    size = 1 << n
    states = list(range(size - 1, -1, -1))  # all-up first, all-down last
    index_of = {mask: i for i, mask in enumerate(states)}

    q = np.zeros((size, size))
    rewards = np.zeros(size)
    for i, mask in enumerate(states):
        for k, node in enumerate(nodes):
            bit = 1 << k
            j = index_of[mask ^ bit]
            if mask & bit:
                q[i, j] += lam[k]
                rewards[i] += effective_mips(node)
            else:
                q[i, j] += mu[k]
    q[np.arange(size), np.arange(size)] = -q.sum(axis=1)
    return MarkovRewardModel(states=states, generator=q, rewards=rewards)


def solve_steady_state(model: MarkovRewardModel) -> np.ndarray:
    """Solve pi Q = 0, sum(pi) = 1 and store pi on the model.

    One balance equation is replaced by the normalisation row; the residual
    of the original system is checked against RESIDUAL_TOL afterwards.
    """
    q = model.generator
    size = q.shape[0]
    scale = float(np.abs(np.diag(q)).max()) or 1.0
    a = (q / scale).T.copy()
    a[-1, :] = 1.0
    b = np.zeros(size)
    b[-1] = 1.0
    try:
        pi = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"steady-state solve failed: {exc}") from exc

    if not np.isfinite(pi).all() or pi.min() < -1e-12:
        raise SingularSystem("steady-state solve produced an invalid distribution")
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()
    residual = float(np.abs(pi @ q).max())
    if residual >= RESIDUAL_TOL:
        raise SingularSystem(f"steady-state residual {residual:.3e} exceeds {RESIDUAL_TOL}")
    model.steady_state = pi
    return pi


def expected_reward_rate(model: MarkovRewardModel) -> float:
    """Steady-state expected reward rate: sum_i pi_i * r_i (MIPS)."""
    if model.steady_state is None:
        raise ValueError("steady_state not computed; call solve_steady_state first")
    return float(model.steady_state @ model.rewards)


@dataclass(frozen=True)
class SelectionRow:
    node_id: int
    mips: float
    lambda_per_hour: float
    mu_per_hour: float
    failure_to_repair_ratio: float
    availability: float
    reliability_level: ReliabilityLevel
    expected_reward_rate_mips: float


SELECTION_CSV_HEADER = (
    "node_id,mips,lambda_per_hour,mu_per_hour,failure_to_repair_ratio,"
    "availability,reliability_level,expected_reward_rate_mips"
)


@dataclass(frozen=True)
class SelectionReport:
    """Per-node reliability table plus the two headline designations.

    performance_pick is the node that would finish a task fastest (max
    MIPS); reliability_pick is the node with the lowest failure-to-repair
    ratio. Ties go to the lowest node id.
    """

    rows: tuple[SelectionRow, ...]
    performance_pick: int
    reliability_pick: int

    def to_csv(self) -> str:
        lines = [SELECTION_CSV_HEADER]
        for r in self.rows:
            lines.append(
                f"{r.node_id},{r.mips!r},{r.lambda_per_hour!r},{r.mu_per_hour!r},"
                f"{r.failure_to_repair_ratio!r},{r.availability!r},"
                f"{r.reliability_level.label},{r.expected_reward_rate_mips!r}"
            )
        return "\n".join(lines) + "\n"


def selection_report(nodes: Sequence[GridNode]) -> SelectionReport:
    """Build the per-node report backing the performance-vs-reliability choice.

    The per-node expected reward rate is availability * mips * (1 -
    degradation), i.e. the single-node Markov reward model in closed form.
    """
    if not nodes:
        raise ValueError("selection_report requires at least one node")
    rows = []
    for node in sorted(nodes, key=lambda n: n.id):
        avail = steady_state_availability(node.failure)
        rows.append(
            SelectionRow(
                node_id=node.id,
                mips=node.mips,
                lambda_per_hour=node.failure.lambda_per_hour,
                mu_per_hour=node.failure.mu_per_hour,
                failure_to_repair_ratio=failure_to_repair_ratio(node.failure),
                availability=avail,
                reliability_level=classify_reliability(avail),
                expected_reward_rate_mips=avail * effective_mips(node),
            )
        )
    performance = min(rows, key=lambda r: (-r.mips, r.node_id)).node_id
    reliability = min(rows, key=lambda r: (r.failure_to_repair_ratio, r.node_id)).node_id
    return SelectionReport(rows=tuple(rows), performance_pick=performance, reliability_pick=reliability)
