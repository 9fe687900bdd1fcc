"""Reliability-aware grid scheduling simulator with Markov reward analysis.

The package simulates independent tasks dispatched onto failure-prone grid
nodes under pluggable ranking policies, tracks per-node success histories,
and analyses fleets with two-state Markov models: steady-state availability,
failure-to-repair ratios, five-band reliability levels and expected
computational reward rates.
"""

from .errors import (
    DomainError,
    EmptyNodeSet,
    GridRelyError,
    ParseError,
    SingularSystem,
    TooManyNodes,
    ValidationError,
)
from .experiment import (
    ExperimentResult,
    ExperimentSpec,
    PolicySummary,
    RunRecord,
    compare_policies,
    emit_reports,
    run_experiment,
)
from .failure import (
    Outcome,
    RngStream,
    failure_stream,
    record_attempt,
    repair_stream,
    sample_time_to_failure,
    sample_time_to_repair,
)
from .model import (
    SECONDS_PER_HOUR,
    AppModel,
    FailureProfile,
    GridNode,
    Job,
    QosRequirement,
    ReliabilityLevel,
    Task,
    TaskState,
    estimated_exec_time,
    job_completed,
)
from .perf import (
    MarkovRewardModel,
    SelectionReport,
    SelectionRow,
    build_system_ctmc,
    classify_reliability,
    effective_mips,
    expected_reward_rate,
    failure_to_repair_ratio,
    selection_report,
    solve_steady_state,
    steady_state_availability,
)
from .policy import (
    NodeStats,
    PolicyId,
    RateMode,
    failure_rate,
    filter_by_qos,
    rank,
    rank_cost_aware,
    rank_min_time,
    rank_reliability_first,
    success_rate,
)
from .scenario_io import dump_scenario, load_scenario, scenario_from_dict, scenario_to_dict
from .sim import (
    EventKind,
    JobMetrics,
    Metrics,
    NodeMetrics,
    Scenario,
    Simulation,
    dispatch,
    run,
    validate_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "AppModel",
    "DomainError",
    "EmptyNodeSet",
    "EventKind",
    "ExperimentResult",
    "ExperimentSpec",
    "FailureProfile",
    "GridNode",
    "GridRelyError",
    "Job",
    "JobMetrics",
    "MarkovRewardModel",
    "Metrics",
    "NodeMetrics",
    "NodeStats",
    "Outcome",
    "ParseError",
    "PolicyId",
    "PolicySummary",
    "QosRequirement",
    "RateMode",
    "ReliabilityLevel",
    "RngStream",
    "RunRecord",
    "Scenario",
    "SECONDS_PER_HOUR",
    "SelectionReport",
    "SelectionRow",
    "Simulation",
    "SingularSystem",
    "Task",
    "TaskState",
    "TooManyNodes",
    "ValidationError",
    "build_system_ctmc",
    "classify_reliability",
    "compare_policies",
    "dispatch",
    "dump_scenario",
    "effective_mips",
    "emit_reports",
    "estimated_exec_time",
    "expected_reward_rate",
    "failure_rate",
    "failure_stream",
    "failure_to_repair_ratio",
    "filter_by_qos",
    "job_completed",
    "load_scenario",
    "rank",
    "rank_cost_aware",
    "rank_min_time",
    "rank_reliability_first",
    "record_attempt",
    "repair_stream",
    "run",
    "run_experiment",
    "sample_time_to_failure",
    "sample_time_to_repair",
    "scenario_from_dict",
    "scenario_to_dict",
    "selection_report",
    "solve_steady_state",
    "steady_state_availability",
    "success_rate",
    "validate_scenario",
]
