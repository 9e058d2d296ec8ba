"""Request and response models for the HTTP service.

Coefficients travel as canonical rational strings ("p/q" or "p"), never
as floats, so exactness survives serialization.  Term lists are emitted
in canonical order (component, then graded exponent order), which makes
responses deterministic byte for byte.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..autolab import PolynomialMap, polynomial_map
from ..coefficients import format_scalar, parse_scalar
from ..errors import DegreeOverflowError, DuplicateTermError, FormatError
from ..multiindex import SeriesContext, sort_key
from ..series import TruncatedSeriesMap, series_map

Method = Literal["neumann", "recurrence", "fixpoint", "all"]


class SeriesTerm(BaseModel):
    component: int = Field(ge=1)
    exponents: list[int]
    coefficient: str


class SeriesPayload(BaseModel):
    nvars: int = Field(ge=1)
    degree: int = Field(ge=1)
    terms: list[SeriesTerm] = Field(default_factory=list)


class PolynomialPayload(BaseModel):
    nvars: int = Field(ge=1)
    terms: list[SeriesTerm] = Field(default_factory=list)


def _terms_to_components(nvars: int, degree: Optional[int], terms: list[SeriesTerm]):
    comps: list = [dict() for _ in range(nvars)]
    for t in terms:
        if not 1 <= t.component <= nvars:
            raise FormatError(f"component {t.component} out of range 1..{nvars}")
        if len(t.exponents) != nvars or any(e < 0 for e in t.exponents):
            raise FormatError(
                f"expected {nvars} nonnegative exponents, got {t.exponents}"
            )
        alpha = tuple(t.exponents)
        w = sum(alpha)
        if w == 0:
            raise FormatError("constant term forbidden")
        if degree is not None and w > degree:
            raise DegreeOverflowError(
                f"term of degree {w} exceeds declared degree {degree}"
            )
        try:
            c = parse_scalar(t.coefficient)
        except ValueError as exc:
            raise FormatError(str(exc)) from None
        if alpha in comps[t.component - 1]:
            raise DuplicateTermError(
                f"duplicate term for component {t.component}, exponent {alpha}"
            )
        comps[t.component - 1][alpha] = c
    return comps


def payload_to_map(p: SeriesPayload) -> TruncatedSeriesMap:
    ctx = SeriesContext(p.nvars, p.degree)
    return series_map(ctx, _terms_to_components(p.nvars, p.degree, p.terms))


def map_to_payload(f: TruncatedSeriesMap) -> SeriesPayload:
    terms = []
    for j, comp in enumerate(f.components, start=1):
        for e in sorted(comp, key=sort_key):
            terms.append(
                SeriesTerm(
                    component=j,
                    exponents=list(e),
                    coefficient=format_scalar(comp[e]),
                )
            )
    return SeriesPayload(nvars=f.ctx.nvars, degree=f.ctx.degree_cap, terms=terms)


def payload_to_poly(p: PolynomialPayload) -> PolynomialMap:
    return polynomial_map(p.nvars, _terms_to_components(p.nvars, None, p.terms))


def poly_to_payload(f: PolynomialMap) -> PolynomialPayload:
    terms = []
    for j, comp in enumerate(f.components, start=1):
        for e in sorted(comp, key=sort_key):
            terms.append(
                SeriesTerm(
                    component=j,
                    exponents=list(e),
                    coefficient=format_scalar(comp[e]),
                )
            )
    return PolynomialPayload(nvars=f.nvars, terms=terms)


class InvertRequest(BaseModel):
    series: SeriesPayload
    degree: Optional[int] = Field(default=None, ge=1)
    method: Method = "all"


class InvertResponse(BaseModel):
    inverse: SeriesPayload
    method: Method
    methods_agree: Optional[bool] = None
    composition_verified: bool


class ComposeRequest(BaseModel):
    outer: SeriesPayload
    inner: SeriesPayload
    degree: Optional[int] = Field(default=None, ge=1)


class SeriesResponse(BaseModel):
    series: SeriesPayload


class IterateRequest(BaseModel):
    series: SeriesPayload
    times: int = Field(ge=0)
    degree: Optional[int] = Field(default=None, ge=1)


class DifferenceTermsRequest(BaseModel):
    series: SeriesPayload
    m: int = Field(ge=0)
    degree: Optional[int] = Field(default=None, ge=1)


class DifferenceTermRecord(BaseModel):
    m: int
    order: Optional[int]  # None marks the zero map
    series: SeriesPayload


class DifferenceTermsResponse(BaseModel):
    terms: list[DifferenceTermRecord]


class TailTestRequest(BaseModel):
    series: PolynomialPayload
    max_m: int = Field(ge=1)
    max_degree: int = Field(default=512, ge=1)
    max_terms: int = Field(default=200_000, ge=1)


class TailRecord(BaseModel):
    m: int
    degree: Optional[int]
    terms: int
    zero: bool


class TailTestResponse(BaseModel):
    searched_upto: int
    vanishing_m0: Optional[int]
    records: list[TailRecord]
    certificate_inverse: Optional[PolynomialPayload]
    certificate_verified: Optional[bool]


class JacobianCheckRequest(BaseModel):
    series: SeriesPayload
    m: int = Field(ge=1)
    degree: Optional[int] = Field(default=None, ge=1)


class ResidualEntry(BaseModel):
    row: int
    col: int
    exponents: list[int]
    coefficient: str


class JacobianCheckResponse(BaseModel):
    holds: bool
    m: int
    degree: int
    residual: list[ResidualEntry]


class MatrixRequest(BaseModel):
    series: SeriesPayload
    degree: Optional[int] = Field(default=None, ge=1)
    exponential: bool = False


class MatrixEntry(BaseModel):
    row_weight: int
    col_weight: int
    row_index: list[int]
    col_index: list[int]
    value: str


class MatrixResponse(BaseModel):
    entries: list[MatrixEntry]


class BenchRequest(BaseModel):
    nvars: int = Field(ge=1)
    degree: int = Field(ge=1)
    seed: int = 0


class BenchRun(BaseModel):
    method: str
    seconds: float
    peak_terms: int  # densest map held during the run (input or inverse)


class BenchResponse(BaseModel):
    nvars: int
    degree: int
    seed: int
    input_terms: int
    runs: list[BenchRun]
    methods_agree: bool
    composition_verified: bool


class HealthResponse(BaseModel):
    status: str
    version: str
