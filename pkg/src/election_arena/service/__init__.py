"""HTTP layer: pydantic schemas and the FastAPI application factory."""

from .app import app, create_app
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

__all__ = [
    "app",
    "create_app",
    "ConcurrentRow",
    "HealthResponse",
    "SimulateRequest",
    "SimulateResponse",
    "StatsModel",
    "TableRequest",
    "TableResponse",
    "TableRow",
    "VerifyRequest",
    "VerifyResponse",
    "WorstCaseRow",
]
