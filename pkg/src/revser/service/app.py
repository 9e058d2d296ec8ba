"""FastAPI application exposing the kernel.

Thin by design: every endpoint validates its request model, delegates to
the shared handler, and returns the response model.  Kernel errors are
translated to JSON error bodies carrying the stable error code, so HTTP
clients see the same failure taxonomy as CLI users.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import (
    FormatError,
    KernelError,
    PreconditionError,
    ResourceCapError,
    VerificationError,
)
from . import handlers, models

app = FastAPI(
    title="revser",
    version=__version__,
    description=(
        "Exact-arithmetic composition and inversion of multivariate formal "
        "power series maps, with experiment endpoints for polynomial "
        "automorphism tail tests."
    ),
)

_STATUS = (
    (VerificationError, 500),
    (FormatError, 422),
    (PreconditionError, 422),
    (ResourceCapError, 422),
)


@app.exception_handler(KernelError)
async def kernel_error_handler(request: Request, exc: KernelError) -> JSONResponse:
    status = next((s for cls, s in _STATUS if isinstance(exc, cls)), 400)
    return JSONResponse(
        status_code=status,
        content={"detail": {"code": exc.code, "message": str(exc)}},
    )


@app.get("/health", response_model=models.HealthResponse)
def health() -> models.HealthResponse:
    return models.HealthResponse(status="ok", version=__version__)


@app.post("/invert", response_model=models.InvertResponse)
def invert(req: models.InvertRequest) -> models.InvertResponse:
    return handlers.handle_invert(req)


@app.post("/compose", response_model=models.SeriesResponse)
def compose(req: models.ComposeRequest) -> models.SeriesResponse:
    return handlers.handle_compose(req)


@app.post("/iterate", response_model=models.SeriesResponse)
def iterate(req: models.IterateRequest) -> models.SeriesResponse:
    return handlers.handle_iterate(req)


@app.post("/difference-terms", response_model=models.DifferenceTermsResponse)
def difference_terms(
    req: models.DifferenceTermsRequest,
) -> models.DifferenceTermsResponse:
    return handlers.handle_difference_terms(req)


@app.post("/tail-test", response_model=models.TailTestResponse)
def tail_test(req: models.TailTestRequest) -> models.TailTestResponse:
    return handlers.handle_tail_test(req)


@app.post("/jacobian-check", response_model=models.JacobianCheckResponse)
def jacobian_check(req: models.JacobianCheckRequest) -> models.JacobianCheckResponse:
    return handlers.handle_jacobian_check(req)


@app.post("/matrix", response_model=models.MatrixResponse)
def matrix(req: models.MatrixRequest) -> models.MatrixResponse:
    return handlers.handle_matrix(req)


@app.post("/bench", response_model=models.BenchResponse)
def bench(req: models.BenchRequest) -> models.BenchResponse:
    return handlers.handle_bench(req)
