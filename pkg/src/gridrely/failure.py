"""Reproducible sampling of node failure and repair times.

RNG streams are keyed by (seed, stream id). Each node owns two independent
streams, one for time-to-failure and one for time-to-repair, so adding or
removing nodes never perturbs the draws of the others and a scenario replays
identically from its seed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .model import SECONDS_PER_HOUR, FailureProfile
from .policy import NodeStats

FAILURE_STREAM = 0
REPAIR_STREAM = 1


@dataclass
class RngStream:
    """An independent PCG64 stream derived from (seed, stream_id)."""

    seed: int
    stream_id: tuple[int, ...]
    _rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self) -> None:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=tuple(self.stream_id))
        self._rng = np.random.Generator(np.random.PCG64(ss))

    def uniform(self) -> float:
        """A draw from U[0, 1)."""
        return float(self._rng.random())


def failure_stream(seed: int, node_id: int) -> RngStream:
    return RngStream(seed, (node_id, FAILURE_STREAM))


def repair_stream(seed: int, node_id: int) -> RngStream:
    return RngStream(seed, (node_id, REPAIR_STREAM))


class Outcome(enum.Enum):
    SUCCESS = "success"
    FAILURE = "failure"


def _sample_exponential(rate_per_hour: float, rng: RngStream) -> float:
    """Inverse-CDF exponential draw in seconds; rate 0 means never."""
    if rate_per_hour <= 0.0:
        return math.inf
    rate_s = rate_per_hour / SECONDS_PER_HOUR
    return -math.log1p(-rng.uniform()) / rate_s


def sample_time_to_failure(profile: FailureProfile, rng: RngStream) -> float:
    """Seconds until the next failure of an up node (inf if it never fails)."""
    return _sample_exponential(profile.lambda_per_hour, rng)


def sample_time_to_repair(profile: FailureProfile, rng: RngStream) -> float:
    """Seconds until a down node comes back up."""
    return _sample_exponential(profile.mu_per_hour, rng)


def record_attempt(stats: NodeStats, outcome: Outcome) -> NodeStats:
    """Fold one finished run into a node's history, returning new stats."""
    return NodeStats(
        node_id=stats.node_id,
        attempts=stats.attempts + 1,
        successes=stats.successes + (1 if outcome is Outcome.SUCCESS else 0),
    )
