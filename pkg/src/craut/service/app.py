"""HTTP surface: one endpoint per command, all stateless."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from . import handlers
from .schemas import (
    AutRequest,
    AutResponse,
    CheckFieldRequest,
    CheckFieldResponse,
    HealthResponse,
    JetRequest,
    JetResponse,
    ValidateRequest,
    ValidateResponse,
)

app = FastAPI(title="craut", version=__version__)


@app.exception_handler(handlers.DocumentError)
async def document_error_handler(_: Request, exc: handlers.DocumentError):
    detail = {"message": str(exc)}
    if exc.offset is not None:
        detail["offset"] = exc.offset
    return JSONResponse(status_code=422, content={"detail": detail})


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/validate", response_model=ValidateResponse)
def validate(request: ValidateRequest) -> ValidateResponse:
    return handlers.run_validate(request)


@app.post("/aut", response_model=AutResponse)
def aut(request: AutRequest) -> AutResponse:
    return handlers.run_aut(request)


@app.post("/check-field", response_model=CheckFieldResponse)
def check_field(request: CheckFieldRequest) -> CheckFieldResponse:
    return handlers.run_check_field(request)


@app.post("/jet", response_model=JetResponse)
def jet(request: JetRequest) -> JetResponse:
    return handlers.run_jet(request)
