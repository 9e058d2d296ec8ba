"""Request handlers shared by the HTTP service and the CLI.

Each handler takes a request model and returns a response model, raising
KernelError subclasses on failure.  The FastAPI app maps those errors to
HTTP responses and the CLI maps them to exit codes; the handlers
themselves stay transport-free so the CLI can call them in process.
"""

from __future__ import annotations

import math
import random
import time

from ..autolab import (
    ResourceCaps,
    from_truncated,
    jacobian_form_check,
    tail_vanishing_test,
)
from ..errors import VerificationError
from ..gradedmatrix import dump_entries, from_series, sym_exp
from ..inversion import INVERSION_METHODS, DifferenceSequence, require_unit_tangent
from ..multiindex import SeriesContext, sort_key
from ..series import (
    TruncatedSeriesMap,
    compose,
    identity_map,
    iterate,
    order,
    random_map,
    recap,
)
from . import models
from .models import (
    map_to_payload,
    payload_to_map,
    payload_to_poly,
    poly_to_payload,
)


def _working_map(payload: models.SeriesPayload, degree: int | None) -> TruncatedSeriesMap:
    f = payload_to_map(payload)
    if degree is not None and degree != f.ctx.degree_cap:
        f = recap(f, degree)
    return f


def handle_invert(req: models.InvertRequest) -> models.InvertResponse:
    f = _working_map(req.series, req.degree)
    require_unit_tangent(f)
    if req.method == "all":
        results = [(name, fn(f)) for name, fn in INVERSION_METHODS.items()]
        first = results[0][1]
        for name, got in results[1:]:
            if got != first:
                raise VerificationError(
                    f"method {name} disagrees with {results[0][0]}"
                )
        inv = first
        methods_agree = True
    else:
        inv = INVERSION_METHODS[req.method](f)
        methods_agree = None
    ident = identity_map(f.ctx)
    if compose(f, inv) != ident or compose(inv, f) != ident:
        raise VerificationError("inverse failed the two-sided composition check")
    return models.InvertResponse(
        inverse=map_to_payload(inv),
        method=req.method,
        methods_agree=methods_agree,
        composition_verified=True,
    )


def handle_compose(req: models.ComposeRequest) -> models.SeriesResponse:
    outer = _working_map(req.outer, req.degree)
    inner = _working_map(req.inner, req.degree)
    return models.SeriesResponse(series=map_to_payload(compose(outer, inner)))


def handle_iterate(req: models.IterateRequest) -> models.SeriesResponse:
    f = _working_map(req.series, req.degree)
    return models.SeriesResponse(series=map_to_payload(iterate(f, req.times)))


def handle_difference_terms(
    req: models.DifferenceTermsRequest,
) -> models.DifferenceTermsResponse:
    f = _working_map(req.series, req.degree)
    seq = DifferenceSequence(f)
    records = []
    for m in range(req.m + 1):
        t = seq.term(m)
        o = order(t)
        records.append(
            models.DifferenceTermRecord(
                m=m,
                order=None if o == math.inf else o,
                series=map_to_payload(t),
            )
        )
    return models.DifferenceTermsResponse(terms=records)


def handle_tail_test(req: models.TailTestRequest) -> models.TailTestResponse:
    poly = payload_to_poly(req.series)
    caps = ResourceCaps(max_degree=req.max_degree, max_terms=req.max_terms)
    report = tail_vanishing_test(poly, req.max_m, caps)
    return models.TailTestResponse(
        searched_upto=report.searched_upto,
        vanishing_m0=report.vanishing_m0,
        records=[
            models.TailRecord(m=m, degree=d, terms=t, zero=z)
            for m, d, t, z in report.records()
        ],
        certificate_inverse=(
            None
            if report.certificate_inverse is None
            else poly_to_payload(report.certificate_inverse)
        ),
        certificate_verified=(None if report.certificate_inverse is None else True),
    )


def handle_jacobian_check(
    req: models.JacobianCheckRequest,
) -> models.JacobianCheckResponse:
    f = payload_to_map(req.series)
    cap = req.degree if req.degree is not None else f.ctx.degree_cap
    poly = from_truncated(f)
    holds, residual = jacobian_form_check(poly, req.m, cap)
    entries = []
    for i, row in enumerate(residual.entries, start=1):
        for j, cell in enumerate(row, start=1):
            for e in sorted(cell, key=sort_key):
                entries.append(
                    models.ResidualEntry(
                        row=i,
                        col=j,
                        exponents=list(e),
                        coefficient=str(cell[e]),
                    )
                )
    return models.JacobianCheckResponse(
        holds=holds, m=req.m, degree=cap, residual=entries
    )


def handle_matrix(req: models.MatrixRequest) -> models.MatrixResponse:
    f = _working_map(req.series, req.degree)
    M = from_series(f)
    if req.exponential:
        M = sym_exp(M)
    entries = [
        models.MatrixEntry(
            row_weight=rw,
            col_weight=cw,
            row_index=list(ar),
            col_index=list(ac),
            value=str(v),
        )
        for rw, cw, ar, ac, v in dump_entries(M)
    ]
    return models.MatrixResponse(entries=entries)


def handle_bench(req: models.BenchRequest) -> models.BenchResponse:
    ctx = SeriesContext(req.nvars, req.degree)
    f = random_map(ctx, random.Random(req.seed))
    runs = []
    results = []
    for name, fn in INVERSION_METHODS.items():
        t0 = time.perf_counter()
        inv = fn(f)
        dt = time.perf_counter() - t0
        results.append(inv)
        runs.append(
            models.BenchRun(
                method=name,
                seconds=dt,
                peak_terms=max(f.term_count(), inv.term_count()),
            )
        )
    agree = all(r == results[0] for r in results[1:])
    ident = identity_map(ctx)
    verified = (
        agree
        and compose(f, results[0]) == ident
        and compose(results[0], f) == ident
    )
    return models.BenchResponse(
        nvars=req.nvars,
        degree=req.degree,
        seed=req.seed,
        input_terms=f.term_count(),
        runs=runs,
        methods_agree=agree,
        composition_verified=verified,
    )


HANDLERS = {
    "/invert": (models.InvertRequest, handle_invert, models.InvertResponse),
    "/compose": (models.ComposeRequest, handle_compose, models.SeriesResponse),
    "/iterate": (models.IterateRequest, handle_iterate, models.SeriesResponse),
    "/difference-terms": (
        models.DifferenceTermsRequest,
        handle_difference_terms,
        models.DifferenceTermsResponse,
    ),
    "/tail-test": (models.TailTestRequest, handle_tail_test, models.TailTestResponse),
    "/jacobian-check": (
        models.JacobianCheckRequest,
        handle_jacobian_check,
        models.JacobianCheckResponse,
    ),
    "/matrix": (models.MatrixRequest, handle_matrix, models.MatrixResponse),
    "/bench": (models.BenchRequest, handle_bench, models.BenchResponse),
}
