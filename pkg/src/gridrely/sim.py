"""Discrete-event simulation of QoS-aware task scheduling on a grid.

The engine replays a scenario deterministically from its seed: job arrivals
enqueue tasks into a global FIFO, free nodes are matched to waiting tasks by
the configured ranking policy, and node failures kill whatever they were
running. Events that tie in time resolve in insertion order.

Task lifecycle: a run ends by completing, by being killed when its node
fails, or by being aborted when a sibling of an SPMD job fails; every ended
run increments the task's attempt count. A task needing another run is
re-queued only while its attempts stay within the job's retry budget;
otherwise the whole job is given up and reported as not completed.
"""

from __future__ import annotations

import copy
import enum
import heapq
import statistics
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import EmptyNodeSet, ValidationError
from .failure import (
    Outcome,
    RngStream,
    failure_stream,
    record_attempt,
    repair_stream,
    sample_time_to_failure,
    sample_time_to_repair,
)
from .model import AppModel, GridNode, Job, QosRequirement, Task, TaskState, estimated_exec_time
from .policy import NodeStats, PolicyId, RateMode, filter_by_qos, rank
from .perf import steady_state_availability

DEFAULT_HORIZON_S = 86400.0


class EventKind(enum.Enum):
    JOB_ARRIVAL = "job_arrival"
    TASK_COMPLETE = "task_complete"
    NODE_FAIL = "node_fail"
    NODE_REPAIR = "node_repair"


@dataclass
class Scenario:
    """Everything needed to reproduce one simulation run."""

    nodes: list[GridNode]
    jobs: list[Job]
    policy: PolicyId | str = PolicyId.RELIABILITY_FIRST
    seed: int = 0
    horizon_s: float = DEFAULT_HORIZON_S
    epsilon: float = 1e-9
    success_rate_mode: RateMode | str = RateMode.SMOOTHED


_POLICY_NAMES = ", ".join(p.value for p in PolicyId)


def validate_scenario(scenario: Scenario) -> list[str]:
    """Collect every invariant violation; an empty list means valid."""
    v: list[str] = []

    if not scenario.nodes:
        v.append("no nodes defined")
    seen_nodes: set[int] = set()
    for node in scenario.nodes:
        if node.id in seen_nodes:
            v.append(f"duplicate node id {node.id}")
        seen_nodes.add(node.id)
        if node.mips <= 0:
            v.append(f"node {node.id}: mips must be > 0")
        if node.cost_per_sec < 0:
            v.append(f"node {node.id}: cost_per_sec must be >= 0")
        if node.failure.lambda_per_hour < 0:
            v.append(f"node {node.id}: lambda_per_hour must be >= 0")
        if node.failure.mu_per_hour <= 0:
            v.append(f"node {node.id}: mu_per_hour must be > 0")
        if not 0.0 <= node.failure.degradation < 1.0:
            v.append(f"node {node.id}: degradation must be in [0, 1)")
    if scenario.nodes and len(seen_nodes) == len(scenario.nodes):
        if sorted(seen_nodes) != list(range(len(scenario.nodes))):
            v.append("node ids must be contiguous from 0")

    if not scenario.jobs:
        v.append("no jobs defined")
    seen_jobs: set[int] = set()
    for job in scenario.jobs:
        if job.id in seen_jobs:
            v.append(f"duplicate job id {job.id}")
        seen_jobs.add(job.id)
        if job.arrival_s < 0:
            v.append(f"job {job.id}: arrival_s must be >= 0")
        if not job.tasks:
            v.append(f"job {job.id}: no tasks")
        seen_tasks: set[int] = set()
        for task in job.tasks:
            if task.id in seen_tasks:
                v.append(f"job {job.id}: duplicate task id {task.id}")
            seen_tasks.add(task.id)
            if task.length_mi <= 0:
                v.append(f"job {job.id} task {task.id}: length_mi must be > 0")
        if job.qos.deadline_s is not None and job.qos.deadline_s <= 0:
            v.append(f"job {job.id}: deadline_s must be > 0")
        if job.qos.max_retries < 0:
            v.append(f"job {job.id}: max_retries must be >= 0")

    if not isinstance(scenario.policy, PolicyId):
        try:
            PolicyId(scenario.policy)
        except ValueError:
            v.append(f"unknown policy {scenario.policy!r} (expected one of: {_POLICY_NAMES})")
    if not isinstance(scenario.success_rate_mode, RateMode):
        try:
            RateMode(scenario.success_rate_mode)
        except ValueError:
            v.append(f"unknown success_rate_mode {scenario.success_rate_mode!r}")
    if isinstance(scenario.seed, bool) or not isinstance(scenario.seed, int):
        v.append("seed must be an integer")
    if scenario.horizon_s <= 0:
        v.append("horizon_s must be > 0")
    if scenario.epsilon < 0:
        v.append("epsilon must be >= 0")
    return v


def dispatch(
    task: Task,
    free_nodes: Sequence[GridNode],
    policy: PolicyId,
    stats: Mapping[int, NodeStats],
    qos: QosRequirement | None = None,
    *,
    availability: Mapping[int, float] | None = None,
    epsilon: float = 1e-9,
    mode: RateMode = RateMode.SMOOTHED,
) -> int:
    """Pick the node id for `task` among `free_nodes` under `policy`.

    QoS filtering happens first; raises EmptyNodeSet when no free node
    qualifies. Nodes missing from `stats` count as never attempted.
    """
    eligible = filter_by_qos(free_nodes, qos, availability)
    if not eligible:
        raise EmptyNodeSet(f"task {task.id}: no eligible free node")
    pairs = [(node, stats.get(node.id, NodeStats(node.id))) for node in eligible]
    return rank(policy, pairs, task, epsilon=epsilon, mode=mode)[0]


@dataclass(frozen=True)
class JobMetrics:
    job_id: int
    completed: bool
    makespan_s: float | None
    deadline_met: bool


@dataclass(frozen=True)
class NodeMetrics:
    node_id: int
    attempts: int
    successes: int
    busy_time_s: float
    observed_availability: float


@dataclass(frozen=True)
class Metrics:
    jobs: tuple[JobMetrics, ...]
    nodes: tuple[NodeMetrics, ...]
    mean_job_makespan_s: float | None
    total_task_failures: int
    events_processed: int
    end_time_s: float
    event_log: tuple[str, ...] | None = None


@dataclass
class _TaskRun:
    task: Task
    node_id: int | None = None


@dataclass
class _JobRun:
    job: Job
    remaining: int
    completed_at: float | None = None
    exhausted: bool = False


@dataclass
class _NodeRun:
    node: GridNode
    stats: NodeStats
    fail_rng: RngStream
    repair_rng: RngStream
    up: bool = True
    serial: int = 0
    running: _TaskRun | None = None
    busy_since: float | None = None
    busy_time: float = 0.0
    up_since: float = 0.0
    up_time: float = 0.0


class Simulation:
    """One deterministic run of a scenario.

    Construction validates the scenario (raising ValidationError with all
    violations) and deep-copies jobs so callers' objects are never mutated.
    """

    def __init__(self, scenario: Scenario, collect_events: bool = False):
        violations = validate_scenario(scenario)
        if violations:
            raise ValidationError(violations)
        self.scenario = scenario
        self._policy = (
            scenario.policy if isinstance(scenario.policy, PolicyId) else PolicyId(scenario.policy)
        )
        self._mode = (
            scenario.success_rate_mode
            if isinstance(scenario.success_rate_mode, RateMode)
            else RateMode(scenario.success_rate_mode)
        )
        self._epsilon = scenario.epsilon
        self._horizon = scenario.horizon_s
        self._collect = collect_events
        self._log: list[str] = []

        self._nodes = {
            node.id: _NodeRun(
                node=node,
                stats=NodeStats(node.id),
                fail_rng=failure_stream(scenario.seed, node.id),
                repair_rng=repair_stream(scenario.seed, node.id),
            )
            for node in scenario.nodes
        }
        self._availability = {
            node.id: steady_state_availability(node.failure) for node in scenario.nodes
        }
        self._jobs: dict[int, _JobRun] = {}
        self._tasks: dict[tuple[int, int], _TaskRun] = {}
        for job in copy.deepcopy(scenario.jobs):
            self._jobs[job.id] = _JobRun(job=job, remaining=len(job.tasks))
            for task in job.tasks:
                self._tasks[(job.id, task.id)] = _TaskRun(task=task)

        self._heap: list[tuple[float, int, EventKind, tuple]] = []
        self._seq = 0
        self._queue: list[tuple[int, int]] = []
        # every job counts as active until it completes or is given up
        self._active_jobs = len(scenario.jobs)
        self._busy_nodes = 0
        self._clock = 0.0
        self._events_processed = 0
        self._total_task_failures = 0

        for nr in self._nodes.values():
            ttf = sample_time_to_failure(nr.node.failure, nr.fail_rng)
            if ttf != float("inf"):
                self._push(ttf, EventKind.NODE_FAIL, (nr.node.id,))
        for job in scenario.jobs:
            self._push(job.arrival_s, EventKind.JOB_ARRIVAL, (job.id,))

    def _push(self, time: float, kind: EventKind, payload: tuple) -> None:
        heapq.heappush(self._heap, (time, self._seq, kind, payload))
        self._seq += 1

    def _record(self, time: float, kind: EventKind, node_id, job_id, task_id) -> None:
        if not self._collect:
            return
        cols = (
            repr(time),
            kind.value,
            "" if node_id is None else str(node_id),
            "" if job_id is None else str(job_id),
            "" if task_id is None else str(task_id),
        )
        self._log.append("\t".join(cols))

    def run(self) -> Metrics:
        while self._heap and (self._active_jobs > 0 or self._busy_nodes > 0):
            time = self._heap[0][0]
            if time > self._horizon:
                self._clock = self._horizon
                break
            time, _, kind, payload = heapq.heappop(self._heap)
            self._clock = time
            if kind is EventKind.JOB_ARRIVAL:
                self._on_job_arrival(time, *payload)
            elif kind is EventKind.TASK_COMPLETE:
                self._on_task_complete(time, *payload)
            elif kind is EventKind.NODE_FAIL:
                self._on_node_fail(time, *payload)
            else:
                self._on_node_repair(time, *payload)
        return self._build_metrics()

    # -- event handlers ----------------------------------------------------

    def _on_job_arrival(self, time: float, job_id: int) -> None:
        self._events_processed += 1
        self._record(time, EventKind.JOB_ARRIVAL, None, job_id, None)
        jr = self._jobs[job_id]
        for task in jr.job.tasks:
            self._queue.append((job_id, task.id))
        self._dispatch_queue(time)

    def _on_task_complete(self, time: float, node_id: int, job_id: int, task_id: int, serial: int) -> None:
        nr = self._nodes[node_id]
        if nr.serial != serial:
            return  # stale: the node failed or was reassigned since scheduling
        self._events_processed += 1
        self._record(time, EventKind.TASK_COMPLETE, node_id, job_id, task_id)

        tr = self._tasks[(job_id, task_id)]
        tr.task.state = TaskState.COMPLETED
        tr.task.attempts += 1
        tr.node_id = None
        self._release(nr, time)
        nr.stats = record_attempt(nr.stats, Outcome.SUCCESS)

        jr = self._jobs[job_id]
        jr.remaining -= 1
        if jr.remaining == 0 and not jr.exhausted:
            jr.completed_at = time
            self._active_jobs -= 1
        self._dispatch_queue(time)

    def _on_node_fail(self, time: float, node_id: int) -> None:
        self._events_processed += 1
        nr = self._nodes[node_id]
        nr.up = False
        nr.up_time += time - nr.up_since
        nr.serial += 1

        killed = nr.running
        self._record(
            time,
            EventKind.NODE_FAIL,
            node_id,
            killed.task.job_id if killed else None,
            killed.task.id if killed else None,
        )
        if killed is not None:
            self._release(nr, time)
            killed.task.state = TaskState.FAILED
            killed.task.attempts += 1
            killed.node_id = None
            nr.stats = record_attempt(nr.stats, Outcome.FAILURE)
            self._total_task_failures += 1
            self._after_kill(time, killed)

        ttr = sample_time_to_repair(nr.node.failure, nr.repair_rng)
        self._push(time + ttr, EventKind.NODE_REPAIR, (node_id,))
        # a kill can re-queue tasks and an SPMD abort can free other nodes
        self._dispatch_queue(time)

    def _on_node_repair(self, time: float, node_id: int) -> None:
        self._events_processed += 1
        self._record(time, EventKind.NODE_REPAIR, node_id, None, None)
        nr = self._nodes[node_id]
        nr.up = True
        nr.up_since = time
        ttf = sample_time_to_failure(nr.node.failure, nr.fail_rng)
        if ttf != float("inf"):
            self._push(time + ttf, EventKind.NODE_FAIL, (node_id,))
        self._dispatch_queue(time)

    # -- scheduling internals ----------------------------------------------

    def _after_kill(self, time: float, killed: _TaskRun) -> None:
        """Apply the job-level consequence of a run killed by node failure."""
        jr = self._jobs[killed.task.job_id]
        if jr.exhausted:
            return
        if jr.job.app_model is AppModel.MASTER_WORKER:
            if killed.task.attempts <= jr.job.qos.max_retries:
                killed.task.state = TaskState.PENDING
                self._queue.append((jr.job.id, killed.task.id))
            else:
                self._exhaust(jr)
            return

        # SPMD: one lost task invalidates the whole wave. Abort the runs of
        # the siblings still executing (their nodes are not charged a
        # failure), then either restart every task or give the job up.
        for task in jr.job.tasks:
            if task is killed.task:
                continue
            if task.state is TaskState.RUNNING:
                tr = self._tasks[(jr.job.id, task.id)]
                sibling_node = self._nodes[tr.node_id]
                sibling_node.serial += 1
                self._release(sibling_node, time)
                tr.node_id = None
                task.state = TaskState.FAILED
                task.attempts += 1
        if any(t.attempts > jr.job.qos.max_retries for t in jr.job.tasks):
            self._exhaust(jr)
            return
        self._drop_queued(jr.job.id)
        jr.remaining = len(jr.job.tasks)
        for task in jr.job.tasks:
            task.state = TaskState.PENDING
            self._queue.append((jr.job.id, task.id))

    def _exhaust(self, jr: _JobRun) -> None:
        jr.exhausted = True
        self._active_jobs -= 1
        self._drop_queued(jr.job.id)

    def _drop_queued(self, job_id: int) -> None:
        self._queue = [key for key in self._queue if key[0] != job_id]

    def _release(self, nr: _NodeRun, time: float) -> None:
        nr.running = None
        nr.busy_time += time - nr.busy_since
        nr.busy_since = None
        self._busy_nodes -= 1

    def _dispatch_queue(self, time: float) -> None:
        free = [nr.node for nr in self._nodes.values() if nr.up and nr.running is None]
        stats = {nid: nr.stats for nid, nr in self._nodes.items()}
        i = 0
        while i < len(self._queue) and free:
            job_id, task_id = self._queue[i]
            jr = self._jobs[job_id]
            if not filter_by_qos(self.scenario.nodes, jr.job.qos, self._availability):
                level = jr.job.qos.min_level
                raise EmptyNodeSet(
                    f"job {job_id}: no node in the grid satisfies reliability level"
                    f" {level.label if level else '?'}"
                )
            tr = self._tasks[(job_id, task_id)]
            try:
                node_id = dispatch(
                    tr.task,
                    free,
                    self._policy,
                    stats,
                    jr.job.qos,
                    availability=self._availability,
                    epsilon=self._epsilon,
                    mode=self._mode,
                )
            except EmptyNodeSet:
                i += 1
                continue
            self._queue.pop(i)
            free = [n for n in free if n.id != node_id]
            self._assign(node_id, tr, time)

    def _assign(self, node_id: int, tr: _TaskRun, time: float) -> None:
        nr = self._nodes[node_id]
        nr.serial += 1
        nr.running = tr
        nr.busy_since = time
        self._busy_nodes += 1
        tr.task.state = TaskState.RUNNING
        tr.node_id = node_id
        duration = estimated_exec_time(tr.task, nr.node)
        self._push(
            time + duration,
            EventKind.TASK_COMPLETE,
            (node_id, tr.task.job_id, tr.task.id, nr.serial),
        )

    # -- results -------------------------------------------------------------

    def _build_metrics(self) -> Metrics:
        end = self._clock
        for nr in self._nodes.values():
            if nr.busy_since is not None:
                nr.busy_time += end - nr.busy_since
                nr.busy_since = None
            if nr.up:
                nr.up_time += end - nr.up_since
                nr.up_since = end

        jobs = []
        for jr in sorted(self._jobs.values(), key=lambda j: j.job.id):
            completed = jr.completed_at is not None
            makespan = jr.completed_at - jr.job.arrival_s if completed else None
            deadline = jr.job.qos.deadline_s
            deadline_met = completed and (deadline is None or makespan <= deadline)
            jobs.append(
                JobMetrics(
                    job_id=jr.job.id,
                    completed=completed,
                    makespan_s=makespan,
                    deadline_met=deadline_met,
                )
            )
        nodes = []
        for nr in sorted(self._nodes.values(), key=lambda n: n.node.id):
            nodes.append(
                NodeMetrics(
                    node_id=nr.node.id,
                    attempts=nr.stats.attempts,
                    successes=nr.stats.successes,
                    busy_time_s=nr.busy_time,
                    observed_availability=nr.up_time / end if end > 0 else 1.0,
                )
            )
        makespans = [jm.makespan_s for jm in jobs if jm.makespan_s is not None]
        return Metrics(
            jobs=tuple(jobs),
            nodes=tuple(nodes),
            mean_job_makespan_s=statistics.fmean(makespans) if makespans else None,
            total_task_failures=self._total_task_failures,
            events_processed=self._events_processed,
            end_time_s=end,
            event_log=tuple(self._log) if self._collect else None,
        )


def run(scenario: Scenario, collect_events: bool = False) -> Metrics:
    """Validate, simulate and summarise one scenario."""
    return Simulation(scenario, collect_events=collect_events).run()
