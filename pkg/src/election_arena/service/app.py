"""HTTP service wrapping the election simulator and analysis toolkit.

Endpoints accept scenario text in the same format the CLI reads from disk, so
any client (including the bundled thin CLI) speaks one wire format. Run with::

    uvicorn election_arena.service:app
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__, analysis
from ..engine.scenario import FaultEvent, FaultKind, Scenario, ScenarioError
from ..engine.sim import SimResult, check_agreement, run_batch, run_scenario, trace_lines
from ..protocols.types import Algorithm
from ..scenario_io import ScenarioParseError, parse_scenario
from .schemas import (
    ConcurrentRow,
    HealthResponse,
    SimulateRequest,
    SimulateResponse,
    StatsModel,
    TableRequest,
    TableResponse,
    TableRow,
    VerifyRequest,
    VerifyResponse,
    WorstCaseRow,
)


def _parse_or_400(text: str) -> Scenario:
    try:
        return parse_scenario(text)
    except (ScenarioParseError, ScenarioError) as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


def _stats_model(result: SimResult) -> StatsModel:
    stats = result.stats
    return StatsModel(
        election=stats.election,
        ok=stats.ok,
        inform=stats.inform,
        crosscheck=stats.crosscheck,
        coordinator=stats.coordinator,
        to_ex_coordinator=stats.to_ex_coordinator,
        headline_total=stats.headline_total,
        total_with_crosscheck=stats.total_with_crosscheck,
        critical_path_depth=stats.critical_path_depth,
    )


def _table_scenario(n: int, algorithm: Algorithm) -> Scenario:
    return Scenario(
        node_count=n,
        algorithm=algorithm,
        schedule=(FaultEvent(time=0, kind=FaultKind.DETECT, node=1),),
    )


def create_app() -> FastAPI:
    app = FastAPI(title="election-arena", version=__version__)

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/simulate", response_model=SimulateResponse)
    def simulate(req: SimulateRequest) -> SimulateResponse:
        scenario = _parse_or_400(req.scenario)
        result = run_scenario(scenario, req.max_ticks)
        verdict = check_agreement(result)
        return SimulateResponse(
            coordinator=result.agreed_coordinator,
            quiescent=result.quiescent,
            quiescence_time=result.quiescence_time,
            agreement=verdict.passed,
            agreement_reason=verdict.reason,
            stats=_stats_model(result),
            trace=trace_lines(result) if req.include_trace else [],
        )

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest) -> VerifyResponse:
        scenario = _parse_or_400(req.scenario)
        reason = analysis.formula_preconditions(scenario)
        if reason is not None:
            raise HTTPException(status_code=422, detail=f"formula preconditions unmet: {reason}")
        detect = next(ev for ev in scenario.schedule if ev.kind is FaultKind.DETECT)
        result = run_scenario(scenario)
        inputs = analysis.FormulaInputs(
            live_count=scenario.node_count, detector_rank=detect.node
        )
        report = analysis.verify(result, inputs, scenario.algorithm)
        return VerifyResponse(
            algorithm=report.algorithm.value,
            live_count=report.live_count,
            detector_rank=report.detector_rank,
            simulated=report.simulated,
            analytic=report.analytic,
            crosscheck=report.crosscheck,
            match=report.match,
            notes=list(report.notes),
        )

    @app.post("/table", response_model=TableResponse)
    def table(req: TableRequest) -> TableResponse:
        if not req.sizes:
            raise HTTPException(status_code=400, detail="sizes must be non-empty")
        if any(n < 1 for n in req.sizes):
            raise HTTPException(status_code=400, detail="sizes must be positive integers")
        scenarios = []
        for n in req.sizes:
            scenarios.append(_table_scenario(n, Algorithm.CLASSIC))
            scenarios.append(_table_scenario(n, Algorithm.MODIFIED))
        results = run_batch(scenarios)
        rows: list[TableRow] = []
        for scenario, result in zip(scenarios, results):
            if scenario.algorithm is Algorithm.CLASSIC:
                analytic = analysis.classic_messages(scenario.node_count, 1)
            else:
                analytic = analysis.modified_messages(scenario.node_count, 1)
            rows.append(TableRow(
                n=scenario.node_count,
                p=1,
                algorithm=scenario.algorithm.value,
                simulated=result.stats.headline_total,
                analytic=analytic,
                crosscheck=result.stats.crosscheck,
                match=result.quiescent and result.stats.headline_total == analytic,
                critical_path_depth=result.stats.critical_path_depth,
            ))
        worst = [
            WorstCaseRow(
                n=n,
                classic=analysis.classic_worst(n),
                modified_published=analysis.modified_worst(n).as_published,
                modified_derived=analysis.modified_worst(n).as_derived,
            )
            for n in req.sizes
        ]
        concurrent = [
            ConcurrentRow(
                n=n,
                classic=analysis.classic_concurrent(n),
                modified=analysis.modified_concurrent(n),
            )
            for n in req.sizes
        ]
        return TableResponse(
            rows=rows,
            worst_case=worst,
            concurrent=concurrent,
            worst_case_note=analysis.WORST_CASE_NOTE,
            concurrent_note=analysis.CONCURRENT_FORMULA_NOTE,
        )

    return app


app = create_app()
