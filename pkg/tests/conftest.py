"""Shared factories for building small scenarios in tests."""

from __future__ import annotations

import pytest

from gridrely import FailureProfile, GridNode, Job, PolicyId, QosRequirement, Scenario, Task


def make_node(node_id: int, mips: float = 1000.0, lam: float = 0.0, mu: float = 1.0,
              cost: float = 0.0, degradation: float = 0.0) -> GridNode:
    return GridNode(
        id=node_id,
        mips=mips,
        cost_per_sec=cost,
        failure=FailureProfile(lambda_per_hour=lam, mu_per_hour=mu, degradation=degradation),
    )


def make_job(job_id: int, lengths: list[float], arrival: float = 0.0, **kwargs) -> Job:
    qos = kwargs.pop("qos", QosRequirement())
    return Job(
        id=job_id,
        tasks=[Task(id=i, job_id=job_id, length_mi=l) for i, l in enumerate(lengths)],
        arrival_s=arrival,
        qos=qos,
        **kwargs,
    )


@pytest.fixture
def two_node_scenario() -> Scenario:
    """Two failure-free nodes, one three-task job; min_time baseline."""
    return Scenario(
        nodes=[make_node(0, mips=500.0), make_node(1, mips=250.0)],
        jobs=[make_job(0, [1000.0, 1000.0, 1000.0])],
        policy=PolicyId.MIN_TIME,
        horizon_s=100.0,
    )
