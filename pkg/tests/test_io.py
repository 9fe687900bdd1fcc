"""Scenario JSON parsing, validation wiring and round-tripping."""

from __future__ import annotations

import json

import pytest

from conftest import make_job, make_node
from gridrely import (
    AppModel,
    ParseError,
    PolicyId,
    QosRequirement,
    RateMode,
    ReliabilityLevel,
    Scenario,
    ValidationError,
    dump_scenario,
    load_scenario,
    scenario_from_dict,
    scenario_to_dict,
)

MINIMAL = {
    "nodes": [{"id": 0, "mips": 500.0}],
    "jobs": [{"id": 0, "tasks": [{"id": 0, "length_mi": 1000.0}]}],
}


def write(tmp_path, data) -> str:
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return str(path)


class TestLoading:
    def test_minimal_scenario_with_defaults(self, tmp_path):
        sc = load_scenario(write(tmp_path, MINIMAL))
        assert sc.policy is PolicyId.RELIABILITY_FIRST
        assert sc.seed == 0
        assert sc.horizon_s == 86400.0
        assert sc.epsilon == 1e-9
        assert sc.success_rate_mode is RateMode.SMOOTHED
        node = sc.nodes[0]
        assert (node.cost_per_sec, node.failure.lambda_per_hour, node.failure.mu_per_hour) == (
            0.0, 0.0, 1.0,
        )
        job = sc.jobs[0]
        assert job.app_model is AppModel.MASTER_WORKER
        assert job.arrival_s == 0.0
        assert job.qos == QosRequirement(deadline_s=None, min_level=None, max_retries=3)

    def test_full_scenario(self, tmp_path):
        data = {
            "nodes": [
                {"id": 0, "mips": 800.0, "cost_per_sec": 0.02, "lambda_per_hour": 0.5,
                 "mu_per_hour": 2.0, "degradation": 0.1},
                {"id": 1, "mips": 1200.0},
            ],
            "jobs": [
                {"id": 0, "arrival_s": 5.0, "app_model": "spmd",
                 "qos": {"deadline_s": 30.0, "min_level": "good", "max_retries": 2},
                 "tasks": [{"id": 0, "length_mi": 400.0}, {"id": 1, "length_mi": 900.0}]},
            ],
            "policy": "cost_aware",
            "seed": 17,
            "horizon_s": 600.0,
            "options": {"epsilon": 1e-6, "success_rate_mode": "raw"},
        }
        sc = load_scenario(write(tmp_path, data))
        assert sc.policy is PolicyId.COST_AWARE
        assert sc.seed == 17
        assert sc.horizon_s == 600.0
        assert sc.epsilon == 1e-6
        assert sc.success_rate_mode is RateMode.RAW
        assert sc.nodes[0].failure.degradation == 0.1
        job = sc.jobs[0]
        assert job.app_model is AppModel.SPMD
        assert job.qos.min_level is ReliabilityLevel.GOOD
        assert job.qos.deadline_s == 30.0
        assert [t.length_mi for t in job.tasks] == [400.0, 900.0]
        assert all(t.job_id == 0 for t in job.tasks)

    def test_malformed_json_reports_position(self, tmp_path):
        path = write(tmp_path, '{"nodes": [}')
        with pytest.raises(ParseError) as exc:
            load_scenario(path)
        assert str(exc.value).startswith(f"{path}:1:12:")

    def test_missing_file_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            load_scenario(tmp_path / "nope.json")


class TestStructuralErrors:
    def check(self, data, fragment):
        with pytest.raises(ParseError) as exc:
            scenario_from_dict(data)
        assert fragment in str(exc.value)

    def test_top_level_must_be_object(self):
        self.check([], "scenario: expected an object")

    def test_missing_required_sections(self):
        self.check({"jobs": []}, "scenario: missing required field 'nodes'")
        self.check({"nodes": []}, "scenario: missing required field 'jobs'")

    def test_unknown_top_level_key(self):
        self.check(dict(MINIMAL, extra=1), "scenario: unknown field 'extra'")

    def test_node_field_types(self):
        bad = {"nodes": [{"id": 0, "mips": "fast"}], "jobs": MINIMAL["jobs"]}
        self.check(bad, "nodes[0].mips: expected a number")
        bad = {"nodes": [{"id": 0.5, "mips": 1.0}], "jobs": MINIMAL["jobs"]}
        self.check(bad, "nodes[0].id: expected an integer")

    def test_booleans_are_not_numbers(self):
        bad = {"nodes": [{"id": 0, "mips": True}], "jobs": MINIMAL["jobs"]}
        self.check(bad, "nodes[0].mips: expected a number")
        self.check(dict(MINIMAL, seed=True), "seed: expected an integer")

    def test_node_unknown_and_missing_fields(self):
        bad = {"nodes": [{"id": 0, "mips": 1.0, "mps": 2.0}], "jobs": MINIMAL["jobs"]}
        self.check(bad, "nodes[0]: unknown field 'mps'")
        bad = {"nodes": [{"id": 0}], "jobs": MINIMAL["jobs"]}
        self.check(bad, "nodes[0]: missing required field 'mips'")

    def test_unknown_policy_lists_choices(self):
        with pytest.raises(ParseError) as exc:
            scenario_from_dict(dict(MINIMAL, policy="fastest"))
        message = str(exc.value)
        assert "policy: unknown policy 'fastest'" in message
        for name in ("reliability_first", "min_time", "cost_aware"):
            assert name in message

    def test_unknown_app_model(self):
        jobs = [{"id": 0, "app_model": "mapreduce", "tasks": [{"id": 0, "length_mi": 1.0}]}]
        self.check(dict(MINIMAL, jobs=jobs), "jobs[0].app_model: unknown app model 'mapreduce'")

    def test_unknown_min_level(self):
        jobs = [{"id": 0, "qos": {"min_level": "amazing"},
                 "tasks": [{"id": 0, "length_mi": 1.0}]}]
        self.check(dict(MINIMAL, jobs=jobs),
                   "jobs[0].qos.min_level: unknown reliability level 'amazing'")

    def test_unknown_rate_mode(self):
        self.check(dict(MINIMAL, options={"success_rate_mode": "median"}),
                   "options.success_rate_mode: unknown success_rate_mode 'median'")

    def test_task_structure(self):
        jobs = [{"id": 0, "tasks": [{"id": 0}]}]
        self.check(dict(MINIMAL, jobs=jobs), "jobs[0].tasks[0]: missing required field 'length_mi'")
        jobs = [{"id": 0, "tasks": {"id": 0}}]
        self.check(dict(MINIMAL, jobs=jobs), "jobs[0].tasks: expected an array")


class TestValidationWiring:
    def test_all_violations_reported_together(self, tmp_path):
        data = {
            "nodes": [{"id": 0, "mips": -1.0}, {"id": 0, "mips": 2.0}],
            "jobs": [{"id": 0, "tasks": [{"id": 0, "length_mi": 0.0}]}],
            "horizon_s": -5.0,
        }
        with pytest.raises(ValidationError) as exc:
            load_scenario(write(tmp_path, data))
        violations = exc.value.violations
        assert "node 0: mips must be > 0" in violations
        assert "duplicate node id 0" in violations
        assert "job 0 task 0: length_mi must be > 0" in violations
        assert "horizon_s must be > 0" in violations
        assert len(violations) >= 4


class TestRoundTrip:
    def scenario(self):
        return Scenario(
            nodes=[make_node(0, mips=800.0, lam=0.5, mu=2.0, cost=0.01, degradation=0.25),
                   make_node(1, mips=1200.0)],
            jobs=[
                make_job(0, [400.0, 900.0], arrival=5.0, app_model=AppModel.SPMD,
                         qos=QosRequirement(deadline_s=30.0,
                                            min_level=ReliabilityLevel.MEDIUM,
                                            max_retries=2)),
                make_job(1, [1000.0]),
            ],
            policy=PolicyId.COST_AWARE,
            seed=9,
            horizon_s=450.0,
            epsilon=1e-7,
            success_rate_mode=RateMode.RAW,
        )

    def test_dump_then_load_preserves_everything(self, tmp_path):
        path = tmp_path / "round.json"
        original = self.scenario()
        dump_scenario(original, path)
        loaded = load_scenario(path)
        assert scenario_to_dict(loaded) == scenario_to_dict(original)

    def test_canonical_dict_is_explicit(self):
        d = scenario_to_dict(self.scenario())
        assert set(d) == {"nodes", "jobs", "policy", "seed", "horizon_s", "options"}
        assert d["jobs"][1]["qos"] == {"deadline_s": None, "min_level": None, "max_retries": 3}
        assert d["jobs"][0]["qos"]["min_level"] == "medium"
        assert d["policy"] == "cost_aware"

    def test_dump_output_is_valid_json(self, tmp_path):
        path = tmp_path / "round.json"
        dump_scenario(self.scenario(), path)
        data = json.loads(path.read_text())
        assert data["options"]["success_rate_mode"] == "raw"
