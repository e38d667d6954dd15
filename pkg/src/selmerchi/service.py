"""FastAPI service wrapping the core package.

Domain outcomes (hypothesis failures, undefined Euler characteristics) are
HTTP 200 with a status field; malformed inputs are 400/422.  The service owns
the local-data cache, so a long-running instance serves repeated curves from
warm files.
"""

from __future__ import annotations

from pathlib import Path
from typing import Literal

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field, field_validator, model_validator

from . import __version__
from .cache import LocalDataCache, default_cache_dir
from .curves import parse_curve
from .errors import (
    NonFiniteInvariants,
    PrecisionExhausted,
    SelmerchiError,
)
from .euler import (
    FieldLocalData,
    LambdaSeries,
    PlaceAboveP,
    lambda_euler_char,
    p_power_exponent,
)
from .local import ReductionType, local_data
from .reports import analyze_curve, analyze_field_data, run_batch

_REDUCTION_VALUES = {r.value for r in ReductionType}


class AnalyzeRequest(BaseModel):
    curve: str = Field(description="a1,a2,a3,a4,a6 with integer or p/q entries")
    p: int
    signs: str = ""
    sha_p: str = "1"
    assert_selmer_finite: bool = False
    override_hypotheses: bool = False
    label: str | None = None


class ReportResponse(BaseModel):
    status: Literal["ok", "hypothesis_failure"]
    report: dict
    warnings: list[str] = []


class LocalRequest(BaseModel):
    curve: str
    q: int
    p: int | None = None


class LocalResponse(BaseModel):
    local: dict


class BatchRequest(BaseModel):
    csv_text: str
    p: int
    sha_p: str = "1"
    assert_selmer_finite: bool = False
    jobs: int = Field(default=1, ge=1, le=64)


class BatchResponse(BaseModel):
    reports: list[dict]
    summary: dict


class PlaceAbovePModel(BaseModel):
    e: int = Field(ge=1)
    f: int = Field(ge=1)
    reduction: str
    a: int | None = None
    d_p_part: str | None = None
    base_is_qp: bool
    unramified: bool
    label: str | None = None

    @field_validator("reduction")
    @classmethod
    def _known_reduction(cls, v):
        if v not in _REDUCTION_VALUES:
            raise ValueError(f"unknown reduction type {v!r}")
        return v


class AwayTamagawaModel(BaseModel):
    label: str
    value: str


class FieldLocalDataModel(BaseModel):
    p: int
    primes_above_p: list[PlaceAbovePModel]
    away_tamagawa_p_parts: list[AwayTamagawaModel]
    torsion_p_part: str
    sha_p_order: str
    selmer_finite: bool

    @model_validator(mode="after")
    def _validate_powers(self):
        def as_p_power(text: str, what: str) -> int:
            try:
                value = int(text)
                p_power_exponent(value, self.p)
            except (ValueError, SelmerchiError) as exc:
                raise ValueError(f"{what} must be a decimal power of {self.p}: {exc}")
            return value

        as_p_power(self.torsion_p_part, "torsion_p_part")
        as_p_power(self.sha_p_order, "sha_p_order")
        for place in self.primes_above_p:
            good = place.reduction in ("good_ordinary", "good_supersingular")
            if good != (place.d_p_part is not None):
                raise ValueError("d_p_part must be present exactly for good reduction")
            if place.d_p_part is not None:
                as_p_power(place.d_p_part, "d_p_part")
        for away in self.away_tamagawa_p_parts:
            as_p_power(away.value, f"away_tamagawa_p_parts[{away.label}]")
        return self

    def to_domain(self) -> FieldLocalData:
        places = tuple(
            PlaceAboveP(
                label=w.label or f"w{i + 1}",
                ramification=w.e,
                residue_degree=w.f,
                reduction=ReductionType(w.reduction),
                a=w.a,
                d_p_part=None if w.d_p_part is None else int(w.d_p_part),
                base_is_qp=w.base_is_qp,
                unramified_over_base=w.unramified,
            )
            for i, w in enumerate(self.primes_above_p)
        )
        away = tuple((a.label, int(a.value)) for a in self.away_tamagawa_p_parts)
        return FieldLocalData(
            p=self.p,
            primes_above_p=places,
            away_tamagawa_p_parts=away,
            torsion_p_part=int(self.torsion_p_part),
            sha_p_order=int(self.sha_p_order),
            selmer_finite_asserted=self.selmer_finite,
        )


class FieldRequest(BaseModel):
    local_data: FieldLocalDataModel
    signs: str = ""
    p: int | None = None  # optional cross-check against local_data.p


class LambdaRequest(BaseModel):
    p: int
    coeffs: list[int]
    precision: int = Field(default=64, ge=1)


class LambdaResponse(BaseModel):
    status: Literal["ok", "undefined"]
    value: str | None = None
    exponent: int | None = None
    detail: str | None = None


class HealthResponse(BaseModel):
    status: str
    version: str


def _sha_as_int(text: str, p: int) -> int:
    try:
        value = int(text)
    except ValueError:
        raise HTTPException(400, detail=f"sha_p must be a decimal integer, got {text!r}")
    try:
        p_power_exponent(value, p)
    except SelmerchiError as exc:
        raise HTTPException(400, detail=str(exc))
    return value


def build_app(cache_dir: str | Path | None = "default") -> FastAPI:
    """App factory; cache_dir=None disables the cache entirely."""
    if cache_dir == "default":
        cache_dir = default_cache_dir()
    cache = LocalDataCache(cache_dir)

    app = FastAPI(
        title="selmerchi",
        description="Local invariants and Euler characteristics of signed Selmer groups",
        version=__version__,
    )

    @app.get("/healthz", response_model=HealthResponse)
    def healthz():
        return HealthResponse(status="ok", version=__version__)

    @app.post("/analyze", response_model=ReportResponse)
    def analyze(req: AnalyzeRequest):
        sha = _sha_as_int(req.sha_p, req.p)
        warnings = []
        if "sha_p" not in req.model_fields_set:
            warnings.append(
                "sha_p defaulted to 1; the p-part of Sha is an input assumption,"
                " not a computed value"
            )
        try:
            report = analyze_curve(
                req.curve,
                req.p,
                signs=req.signs,
                sha_p_order=sha,
                selmer_finite_asserted=req.assert_selmer_finite,
                override_hypotheses=req.override_hypotheses,
                cache=cache,
                sha_defaulted="sha_p" not in req.model_fields_set,
                label=req.label,
            )
        except (SelmerchiError, ValueError) as exc:
            raise HTTPException(400, detail=str(exc))
        return ReportResponse(status=report["status"], report=report, warnings=warnings)

    @app.post("/local", response_model=LocalResponse)
    def local(req: LocalRequest):
        try:
            curve = parse_curve(req.curve)
            data = local_data(curve, req.q)
            row = data.to_dict()
            if req.p is not None:
                row["tamagawa_p_part"] = data.tamagawa_p_part(req.p)
                row["d_p_part"] = data.d_p_part(req.p)
        except (SelmerchiError, ValueError) as exc:
            raise HTTPException(400, detail=str(exc))
        return LocalResponse(local=row)

    @app.post("/batch", response_model=BatchResponse)
    def batch(req: BatchRequest):
        sha = _sha_as_int(req.sha_p, req.p)
        try:
            result = run_batch(
                req.csv_text,
                req.p,
                sha_default=sha,
                selmer_finite_asserted=req.assert_selmer_finite,
                jobs=req.jobs,
                cache=cache,
            )
        except (SelmerchiError, ValueError) as exc:
            raise HTTPException(400, detail=str(exc))
        return BatchResponse(**result)

    @app.post("/field", response_model=ReportResponse)
    def field(req: FieldRequest):
        if req.p is not None and req.p != req.local_data.p:
            raise HTTPException(
                400, detail=f"p={req.p} disagrees with local_data.p={req.local_data.p}"
            )
        try:
            fd = req.local_data.to_domain()
            report = analyze_field_data(fd, req.signs)
        except (SelmerchiError, ValueError) as exc:
            raise HTTPException(400, detail=str(exc))
        return ReportResponse(status=report["status"], report=report, warnings=[])

    @app.post("/lambda", response_model=LambdaResponse)
    def lambda_endpoint(req: LambdaRequest):
        try:
            series = LambdaSeries(req.p, tuple(req.coeffs), req.precision)
        except (SelmerchiError, ValueError) as exc:
            raise HTTPException(400, detail=str(exc))
        try:
            value = lambda_euler_char(series)
        except (NonFiniteInvariants, PrecisionExhausted) as exc:
            return LambdaResponse(status="undefined", detail=f"{type(exc).__name__}: {exc}")
        exponent = 0
        v = value
        while v > 1:
            v //= req.p
            exponent += 1
        return LambdaResponse(status="ok", value=str(value), exponent=exponent)

    return app


app = build_app()
