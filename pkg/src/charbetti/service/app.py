"""FastAPI service wrapping the engine.

One long-running process can serve many clients while keeping the power
and Betti caches warm; every endpoint is a pure function of its request
plus the cache directory configured at startup.  Engine errors map to
HTTP 400 with a stable ``code`` the CLI translates into exit codes.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..betti import (
    betti_at,
    betti_tables_auto,
    betti_tables_bounded,
    check_splitting,
    formula_check,
)
from ..cache import TableCache
from ..complexes import (
    alexander_dual,
    complex_of_ideal,
    parse_complex_text,
    stanley_reisner_ideal,
)
from ..constructions import PROBE_TEMPLATES, construct
from ..errors import ArgumentError, CharbettiError
from ..fields import FieldSpec
from ..guards import GuardConfig
from ..homology import homology_dims, integer_homology
from ..ideals import MonomialIdeal, parse_ideal_text, parse_monomial
from ..scan import ProbeSpec, regularity_profile, save_report, scan_dependence
from . import models


def _guards(options: models.GuardOptions) -> GuardConfig:
    return GuardConfig(
        max_generators=options.max_generators,
        max_lattice_elements=options.max_lattice_elements,
        max_faces=options.max_faces,
        max_snf_entry_bits=options.max_snf_entry_bits,
    )


def _fields(tags: list[str]) -> list[FieldSpec]:
    if not tags:
        raise ArgumentError("at least one field is required")
    return [FieldSpec.parse(tag) for tag in tags]


def _resolve_ideal(payload: models.IdealInput, guards: GuardConfig) -> MonomialIdeal:
    if payload.corpus is not None:
        obj = construct(payload.corpus, p=payload.p, emit="ideal")
        ideal = obj
    else:
        ideal = parse_ideal_text(payload.ideal)
    if payload.power != 1:
        ideal = ideal.power(payload.power, guards)
    return ideal


def create_app(
    cache_dir: str | None = None, results_dir: str | None = None
) -> FastAPI:
    app = FastAPI(title="charbetti", version=__version__)
    app.state.table_cache = TableCache(cache_dir)
    app.state.results_dir = results_dir or os.environ.get(
        "CHARBETTI_RESULTS_DIR", "results"
    )

    @app.exception_handler(CharbettiError)
    async def _engine_error(_: Request, exc: CharbettiError):
        return JSONResponse(
            status_code=400,
            content={"detail": {"code": exc.code, "message": str(exc)}},
        )

    @app.get("/v1/health", response_model=models.HealthResponse)
    def health():
        return models.HealthResponse(status="ok", version=__version__)

    @app.post("/v1/betti", response_model=models.BettiResponse)
    def betti(req: models.BettiRequest):
        guards = _guards(req.guards)
        ideal = _resolve_ideal(req, guards)
        fields = _fields(req.fields)
        if req.i_max is not None:
            tables = betti_tables_bounded(ideal, fields, req.i_max, guards, req.jobs)
        else:
            tables = betti_tables_auto(
                ideal, fields, guards, req.jobs, app.state.table_cache
            )
        return models.BettiResponse(
            ideal_sha=ideal.sha(),
            tables=[
                tables[f.tag].to_json(shift_to_quotient=req.quotient_indexing)
                for f in fields
            ],
        )

    @app.post("/v1/betti-at", response_model=models.BettiAtResponse)
    def betti_at_endpoint(req: models.BettiAtRequest):
        guards = _guards(req.guards)
        ideal = _resolve_ideal(req, guards)
        m = parse_monomial(req.multidegree, ideal.context)
        values = {
            f.tag: betti_at(ideal, m, req.index, f, guards)
            for f in _fields(req.fields)
        }
        return models.BettiAtResponse(
            multidegree=str(m), index=req.index, values=values
        )

    @app.post("/v1/homology", response_model=models.HomologyResponse)
    def homology(req: models.HomologyRequest):
        guards = _guards(req.guards)
        if req.corpus is not None:
            obj = construct(req.corpus, p=req.p, emit="complex")
            complex_ = obj
        else:
            complex_ = parse_complex_text(req.complex)
        if req.field == "Z":
            result = integer_homology(complex_, guards)
            torsion = {d: list(t) for d, t in (result.torsion or {}).items()}
            return models.HomologyResponse(
                field="Z", dims=result.dims, torsion=torsion
            )
        result = homology_dims(complex_, FieldSpec.parse(req.field), guards)
        return models.HomologyResponse(field=result.field, dims=result.dims)

    @app.post("/v1/power", response_model=models.TextResponse)
    def power(req: models.PowerRequest):
        guards = _guards(req.guards)
        ideal = _resolve_ideal(req, guards)
        return models.TextResponse(text=ideal.power(req.h, guards).canonical_text())

    @app.post("/v1/construct", response_model=models.TextResponse)
    def construct_endpoint(req: models.ConstructRequest):
        obj = construct(req.name, p=req.p, emit=req.emit)
        if isinstance(obj, MonomialIdeal):
            return models.TextResponse(text=obj.canonical_text())
        return models.TextResponse(text=obj.to_text())

    @app.post("/v1/scan", response_model=models.ScanResponse)
    def scan(req: models.ScanRequest):
        guards = _guards(req.guards)
        ideal = _resolve_ideal(req, guards)
        probes = None
        if req.probe_indices and req.probe_exponents:
            probes = ProbeSpec(tuple(req.probe_indices), tuple(req.probe_exponents))
        elif req.corpus is not None and req.corpus in PROBE_TEMPLATES:
            template = PROBE_TEMPLATES[req.corpus]
            probes = ProbeSpec(
                tuple(template["indices"]), tuple(template["exponents"])
            )
        report = scan_dependence(
            ideal,
            req.primes,
            req.max_power,
            i_max=req.i_max,
            guards=guards,
            probes=probes,
            jobs=req.jobs,
            corpus_name=req.corpus,
        )
        saved_to = None
        if req.persist:
            saved_to = str(save_report(report, app.state.results_dir))
        return models.ScanResponse(report=report.to_json(), saved_to=saved_to)

    @app.post("/v1/splitting", response_model=models.SplittingResponse)
    def splitting(req: models.SplittingRequest):
        guards = _guards(req.guards)
        ideal = parse_ideal_text(req.ideal)
        j_part = parse_ideal_text(req.j_part)
        k_part = parse_ideal_text(req.k_part)
        results = []
        for f in _fields(req.fields):
            report = check_splitting(ideal, j_part, k_part, f, guards, req.jobs)
            results.append(
                {
                    "field": f.tag,
                    "holds": report.holds,
                    "lhs": list(report.lhs),
                    "rhs": list(report.rhs),
                    "discrepancy": list(report.discrepancy),
                }
            )
        return models.SplittingResponse(results=results)

    @app.post("/v1/formula", response_model=models.FormulaResponse)
    def formula(req: models.FormulaRequest):
        guards = _guards(req.guards)
        ideal = _resolve_ideal(req, guards)
        w = parse_monomial(req.w)
        results = [
            formula_check(ideal, w, req.h, f, guards, req.jobs)
            for f in _fields(req.fields)
        ]
        return models.FormulaResponse(results=results)

    @app.post("/v1/regularity", response_model=models.RegularityResponse)
    def regularity(req: models.RegularityRequest):
        guards = _guards(req.guards)
        ideal = _resolve_ideal(req, guards)
        profile = regularity_profile(
            ideal, _fields(req.fields), req.max_power, guards, req.jobs
        )
        return models.RegularityResponse(profile=profile.to_json())

    @app.post("/v1/dual", response_model=models.TextResponse)
    def dual(req: models.DualRequest):
        complex_ = parse_complex_text(req.complex)
        return models.TextResponse(text=alexander_dual(complex_).to_text())

    @app.post("/v1/polarize", response_model=models.TextResponse)
    def polarize(req: models.PolarizeRequest):
        guards = _guards(req.guards)
        ideal = _resolve_ideal(req, guards)
        return models.TextResponse(text=ideal.polarize().canonical_text())

    return app
