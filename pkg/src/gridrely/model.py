"""Shared domain types for grid scheduling scenarios.

Units: work is measured in million instructions (MI), node speed in MIPS,
simulation time in seconds. Failure and repair rates are carried per hour,
exactly as they appear in scenario files, and converted to per-second rates
only at the point where exponential draws or generator matrices are built.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

SECONDS_PER_HOUR = 3600.0


class TaskState(enum.Enum):
    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


class AppModel(enum.Enum):
    """Execution model of a job.

    MASTER_WORKER tasks are independent: a failure retries only that task.
    SPMD tasks cooperate: any task failure restarts the whole job.
    """

    MASTER_WORKER = "master_worker"
    SPMD = "spmd"


class ReliabilityLevel(enum.IntEnum):
    """Five-band qualitative reliability scale over availability fractions.

    The bands partition [0, 1]: Poor [0, 0.60), Low [0.60, 0.70),
    Medium [0.70, 0.80), Good [0.80, 0.90), High [0.90, 1.0]. Band edges
    are assigned upward so the classification is total and non-overlapping.
    """

    POOR = 0
    LOW = 1
    MEDIUM = 2
    GOOD = 3
    HIGH = 4

    @property
    def label(self) -> str:
        return self.name.capitalize()


@dataclass(frozen=True)
class FailureProfile:
    """Exponential failure/repair behaviour of a node.

    lambda_per_hour: failures per hour while up (0 means the node never fails).
    mu_per_hour: repairs per hour while down; must be positive.
    degradation: fraction of processing capacity lost while up, in [0, 1).
    """

    lambda_per_hour: float = 0.0
    mu_per_hour: float = 1.0
    degradation: float = 0.0


@dataclass(frozen=True)
class GridNode:
    """A compute resource that executes one task at a time."""

    id: int
    mips: float
    cost_per_sec: float = 0.0
    failure: FailureProfile = field(default_factory=FailureProfile)


@dataclass
class Task:
    """An independent unit of work measured in million instructions.

    `attempts` counts finished runs: completions, kills by node failure and
    aborts caused by a sibling failure in an SPMD job all increment it.
    """

    id: int
    job_id: int
    length_mi: float
    state: TaskState = TaskState.PENDING
    attempts: int = 0


@dataclass(frozen=True)
class QosRequirement:
    """Per-job quality-of-service request.

    deadline_s is reported as met/missed but never aborts a job. min_level
    restricts dispatch to nodes whose predicted availability classifies at
    or above the requested reliability band. max_retries bounds how many
    failed runs a task may accumulate before its job is given up.
    """

    deadline_s: float | None = None
    min_level: ReliabilityLevel | None = None
    max_retries: int = 3


@dataclass
class Job:
    id: int
    tasks: list[Task]
    app_model: AppModel = AppModel.MASTER_WORKER
    qos: QosRequirement = field(default_factory=QosRequirement)
    arrival_s: float = 0.0


def estimated_exec_time(task: Task, node: GridNode) -> float:
    """Seconds to run `task` on `node` at full speed: length_mi / mips."""
    return task.length_mi / node.mips


def job_completed(job: Job) -> bool:
    """A job is complete exactly when every one of its tasks is complete."""
    return all(t.state is TaskState.COMPLETED for t in job.tasks)
