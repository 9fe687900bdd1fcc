"""Domain type behaviour: time estimates, completion, reliability bands."""

from __future__ import annotations

import pytest

from gridrely import (
    AppModel,
    GridNode,
    Job,
    ReliabilityLevel,
    Task,
    TaskState,
    estimated_exec_time,
    job_completed,
)


def test_estimated_exec_time_is_length_over_speed():
    task = Task(id=0, job_id=0, length_mi=3000.0)
    assert estimated_exec_time(task, GridNode(id=0, mips=1500.0)) == 2.0
    assert estimated_exec_time(task, GridNode(id=1, mips=3000.0)) == 1.0


def test_faster_node_never_has_longer_estimate():
    task = Task(id=0, job_id=0, length_mi=1234.5)
    slow = GridNode(id=0, mips=100.0)
    fast = GridNode(id=1, mips=100.0001)
    assert estimated_exec_time(task, fast) < estimated_exec_time(task, slow)


def test_job_completed_requires_every_task():
    tasks = [Task(id=i, job_id=0, length_mi=1.0) for i in range(3)]
    job = Job(id=0, tasks=tasks)
    assert not job_completed(job)
    for t in tasks[:-1]:
        t.state = TaskState.COMPLETED
    assert not job_completed(job)
    tasks[-1].state = TaskState.COMPLETED
    assert job_completed(job)


def test_reliability_levels_are_ordered():
    assert (
        ReliabilityLevel.POOR
        < ReliabilityLevel.LOW
        < ReliabilityLevel.MEDIUM
        < ReliabilityLevel.GOOD
        < ReliabilityLevel.HIGH
    )


def test_reliability_level_labels():
    assert ReliabilityLevel.HIGH.label == "High"
    assert ReliabilityLevel.POOR.label == "Poor"
    assert [lv.label for lv in ReliabilityLevel] == ["Poor", "Low", "Medium", "Good", "High"]


def test_app_model_values():
    assert AppModel.MASTER_WORKER.value == "master_worker"
    assert AppModel.SPMD.value == "spmd"


def test_task_defaults():
    task = Task(id=0, job_id=0, length_mi=10.0)
    assert task.state is TaskState.PENDING
    assert task.attempts == 0
