"""Scenario file loading and saving.

Scenarios are JSON objects with top-level keys `nodes`, `jobs`, `policy`,
`seed`, `horizon_s` and `options`. Structural problems (wrong types, missing
or unknown fields, unknown enum names) raise ParseError with the offending
field path; value-domain problems are collected by validate_scenario and
raised together as ValidationError.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .errors import ParseError, ValidationError
from .model import (
    AppModel,
    FailureProfile,
    GridNode,
    Job,
    QosRequirement,
    ReliabilityLevel,
    Task,
)
from .policy import PolicyId, RateMode
from .sim import DEFAULT_HORIZON_S, Scenario, validate_scenario

_LEVEL_NAMES = {level.name.lower(): level for level in ReliabilityLevel}


def _as_dict(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise ParseError(f"{path}: expected an object")
    return value


def _as_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise ParseError(f"{path}: expected an array")
    return value


def _as_number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{path}: expected a number")
    return float(value)


def _as_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{path}: expected an integer")
    return value


def _as_str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise ParseError(f"{path}: expected a string")
    return value


def _check_keys(obj: dict, allowed: set[str], path: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ParseError(f"{path}: unknown field {unknown[0]!r}")


def _parse_enum(value: Any, mapping: dict[str, Any], path: str, what: str) -> Any:
    name = _as_str(value, path)
    if name not in mapping:
        expected = ", ".join(sorted(mapping, key=list(mapping).index))
        raise ParseError(f"{path}: unknown {what} {name!r} (expected one of: {expected})")
    return mapping[name]


def _parse_node(obj: Any, path: str) -> GridNode:
    obj = _as_dict(obj, path)
    _check_keys(
        obj,
        {"id", "mips", "cost_per_sec", "lambda_per_hour", "mu_per_hour", "degradation"},
        path,
    )
    for key in ("id", "mips"):
        if key not in obj:
            raise ParseError(f"{path}: missing required field {key!r}")
    return GridNode(
        id=_as_int(obj["id"], f"{path}.id"),
        mips=_as_number(obj["mips"], f"{path}.mips"),
        cost_per_sec=_as_number(obj.get("cost_per_sec", 0.0), f"{path}.cost_per_sec"),
        failure=FailureProfile(
            lambda_per_hour=_as_number(obj.get("lambda_per_hour", 0.0), f"{path}.lambda_per_hour"),
            mu_per_hour=_as_number(obj.get("mu_per_hour", 1.0), f"{path}.mu_per_hour"),
            degradation=_as_number(obj.get("degradation", 0.0), f"{path}.degradation"),
        ),
    )


def _parse_qos(obj: Any, path: str) -> QosRequirement:
    obj = _as_dict(obj, path)
    _check_keys(obj, {"deadline_s", "min_level", "max_retries"}, path)
    deadline = obj.get("deadline_s")
    if deadline is not None:
        deadline = _as_number(deadline, f"{path}.deadline_s")
    min_level = obj.get("min_level")
    if min_level is not None:
        min_level = _parse_enum(min_level, _LEVEL_NAMES, f"{path}.min_level", "reliability level")
    return QosRequirement(
        deadline_s=deadline,
        min_level=min_level,
        max_retries=_as_int(obj.get("max_retries", 3), f"{path}.max_retries"),
    )


def _parse_job(obj: Any, path: str) -> Job:
    obj = _as_dict(obj, path)
    _check_keys(obj, {"id", "arrival_s", "app_model", "qos", "tasks"}, path)
    for key in ("id", "tasks"):
        if key not in obj:
            raise ParseError(f"{path}: missing required field {key!r}")
    job_id = _as_int(obj["id"], f"{path}.id")
    tasks = []
    for i, t in enumerate(_as_list(obj["tasks"], f"{path}.tasks")):
        tpath = f"{path}.tasks[{i}]"
        t = _as_dict(t, tpath)
        _check_keys(t, {"id", "length_mi"}, tpath)
        for key in ("id", "length_mi"):
            if key not in t:
                raise ParseError(f"{tpath}: missing required field {key!r}")
        tasks.append(
            Task(
                id=_as_int(t["id"], f"{tpath}.id"),
                job_id=job_id,
                length_mi=_as_number(t["length_mi"], f"{tpath}.length_mi"),
            )
        )
    app_model = AppModel.MASTER_WORKER
    if "app_model" in obj:
        app_model = _parse_enum(
            obj["app_model"],
            {m.value: m for m in AppModel},
            f"{path}.app_model",
            "app model",
        )
    qos = _parse_qos(obj.get("qos", {}), f"{path}.qos")
    arrival = _as_number(obj.get("arrival_s", 0.0), f"{path}.arrival_s")
    return Job(id=job_id, tasks=tasks, app_model=app_model, qos=qos, arrival_s=arrival)


def scenario_from_dict(data: Any) -> Scenario:
    """Build a Scenario from parsed JSON; structural errors raise ParseError."""
    data = _as_dict(data, "scenario")
    _check_keys(data, {"nodes", "jobs", "policy", "seed", "horizon_s", "options"}, "scenario")
    for key in ("nodes", "jobs"):
        if key not in data:
            raise ParseError(f"scenario: missing required field {key!r}")

    nodes = [
        _parse_node(obj, f"nodes[{i}]")
        for i, obj in enumerate(_as_list(data["nodes"], "nodes"))
    ]
    jobs = [
        _parse_job(obj, f"jobs[{i}]")
        for i, obj in enumerate(_as_list(data["jobs"], "jobs"))
    ]
    policy = PolicyId.RELIABILITY_FIRST
    if "policy" in data:
        policy = _parse_enum(data["policy"], {p.value: p for p in PolicyId}, "policy", "policy")

    options = _as_dict(data.get("options", {}), "options")
    _check_keys(options, {"epsilon", "success_rate_mode"}, "options")
    mode = RateMode.SMOOTHED
    if "success_rate_mode" in options:
        mode = _parse_enum(
            options["success_rate_mode"],
            {m.value: m for m in RateMode},
            "options.success_rate_mode",
            "success_rate_mode",
        )
    return Scenario(
        nodes=nodes,
        jobs=jobs,
        policy=policy,
        seed=_as_int(data.get("seed", 0), "seed"),
        horizon_s=_as_number(data.get("horizon_s", DEFAULT_HORIZON_S), "horizon_s"),
        epsilon=_as_number(options.get("epsilon", 1e-9), "options.epsilon"),
        success_rate_mode=mode,
    )


def load_scenario(path: str | Path) -> Scenario:
    """Load, parse and validate a scenario file.

    Raises ParseError for malformed JSON or structure, ValidationError
    (carrying every violation) for a well-formed but invalid scenario, and
    OSError if the file cannot be read.
    """
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    scenario = scenario_from_dict(data)
    violations = validate_scenario(scenario)
    if violations:
        raise ValidationError(violations)
    return scenario


def scenario_to_dict(scenario: Scenario) -> dict:
    """Canonical dict form: every field explicit, None encoded as null."""
    policy = scenario.policy if isinstance(scenario.policy, PolicyId) else PolicyId(scenario.policy)
    mode = (
        scenario.success_rate_mode
        if isinstance(scenario.success_rate_mode, RateMode)
        else RateMode(scenario.success_rate_mode)
    )
    return {
        "nodes": [
            {
                "id": n.id,
                "mips": n.mips,
                "cost_per_sec": n.cost_per_sec,
                "lambda_per_hour": n.failure.lambda_per_hour,
                "mu_per_hour": n.failure.mu_per_hour,
                "degradation": n.failure.degradation,
            }
            for n in scenario.nodes
        ],
        "jobs": [
            {
                "id": j.id,
                "arrival_s": j.arrival_s,
                "app_model": j.app_model.value,
                "qos": {
                    "deadline_s": j.qos.deadline_s,
                    "min_level": j.qos.min_level.name.lower() if j.qos.min_level else None,
                    "max_retries": j.qos.max_retries,
                },
                "tasks": [{"id": t.id, "length_mi": t.length_mi} for t in j.tasks],
            }
            for j in scenario.jobs
        ],
        "policy": policy.value,
        "seed": scenario.seed,
        "horizon_s": scenario.horizon_s,
        "options": {
            "epsilon": scenario.epsilon,
            "success_rate_mode": mode.value,
        },
    }


def dump_scenario(scenario: Scenario, path: str | Path) -> None:
    """Write the canonical JSON form; load_scenario round-trips it."""
    Path(path).write_text(json.dumps(scenario_to_dict(scenario), indent=2) + "\n")
