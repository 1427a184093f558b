"""Deterministic discrete-event engine: scenarios, simulation, statistics."""

from .scenario import FaultEvent, FaultKind, Scenario, ScenarioError
from .sim import (
    MessageStats,
    RecordKind,
    Sim,
    SimResult,
    TraceRecord,
    Verdict,
    build_sim,
    check_agreement,
    message_stats,
    run_batch,
    run_scenario,
    trace_lines,
    write_trace,
)

__all__ = [
    "FaultEvent",
    "FaultKind",
    "Scenario",
    "ScenarioError",
    "MessageStats",
    "RecordKind",
    "Sim",
    "SimResult",
    "TraceRecord",
    "Verdict",
    "build_sim",
    "check_agreement",
    "message_stats",
    "run_batch",
    "run_scenario",
    "trace_lines",
    "write_trace",
]
