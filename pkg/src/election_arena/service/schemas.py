"""Request and response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str
    version: str


class SimulateRequest(BaseModel):
    scenario: str = Field(description="scenario file text")
    include_trace: bool = True
    max_ticks: int | None = None


class StatsModel(BaseModel):
    election: int
    ok: int
    inform: int
    crosscheck: int
    coordinator: int
    to_ex_coordinator: int
    headline_total: int
    total_with_crosscheck: int
    critical_path_depth: int | None


class SimulateResponse(BaseModel):
    coordinator: int | None
    quiescent: bool
    quiescence_time: int
    agreement: bool
    agreement_reason: str
    stats: StatsModel
    trace: list[str]


class VerifyRequest(BaseModel):
    scenario: str = Field(description="scenario file text")


class VerifyResponse(BaseModel):
    algorithm: str
    live_count: int
    detector_rank: int
    simulated: int
    analytic: int
    crosscheck: int
    match: bool
    notes: list[str]


class TableRequest(BaseModel):
    sizes: list[int]


class TableRow(BaseModel):
    """One (cluster size, algorithm) measurement; mirrors the CSV columns."""

    n: int
    p: int
    algorithm: str
    simulated: int
    analytic: int
    crosscheck: int
    match: bool
    critical_path_depth: int | None


class WorstCaseRow(BaseModel):
    n: int
    classic: int
    modified_published: int
    modified_derived: int


class ConcurrentRow(BaseModel):
    n: int
    classic: int
    modified: int


class TableResponse(BaseModel):
    rows: list[TableRow]
    worst_case: list[WorstCaseRow]
    concurrent: list[ConcurrentRow]
    worst_case_note: str
    concurrent_note: str
