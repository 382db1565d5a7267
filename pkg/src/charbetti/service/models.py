"""Pydantic request/response models for the HTTP service.

Requests carry ideals/complexes in the plain text formats (or a corpus
name); responses carry the fixed JSON forms produced by the engine, so a
thin client can round-trip everything without knowing engine internals.
"""

from __future__ import annotations

from pydantic import BaseModel, Field, model_validator


class GuardOptions(BaseModel):
    max_generators: int = Field(default=50_000, ge=1)
    max_lattice_elements: int = Field(default=2_000_000, ge=1)
    max_faces: int = Field(default=2_000_000, ge=1)
    max_snf_entry_bits: int = Field(default=4096, ge=64)


class IdealInput(BaseModel):
    """One monomial ideal: inline text, or a corpus name (with p for the
    parametrized construction), optionally raised to a power."""

    ideal: str | None = None
    corpus: str | None = None
    p: int | None = None
    power: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _one_source(self):
        if (self.ideal is None) == (self.corpus is None):
            raise ValueError("provide exactly one of 'ideal' or 'corpus'")
        return self


class EngineOptions(BaseModel):
    jobs: int = Field(default=1, ge=1, le=64)
    guards: GuardOptions = Field(default_factory=GuardOptions)


class BettiRequest(IdealInput, EngineOptions):
    fields: list[str] = Field(default_factory=lambda: ["Q"])
    quotient_indexing: bool = False
    i_max: int | None = Field(default=None, ge=0)


class BettiResponse(BaseModel):
    ideal_sha: str
    tables: list[dict]


class BettiAtRequest(IdealInput, EngineOptions):
    multidegree: str
    index: int = Field(ge=0)
    fields: list[str] = Field(default_factory=lambda: ["Q"])


class BettiAtResponse(BaseModel):
    multidegree: str
    index: int
    values: dict[str, int]


class HomologyRequest(EngineOptions):
    complex: str | None = None
    corpus: str | None = None
    p: int | None = None
    field: str = "Z"  # Q, F<p>, or Z for integer homology

    @model_validator(mode="after")
    def _one_source(self):
        if (self.complex is None) == (self.corpus is None):
            raise ValueError("provide exactly one of 'complex' or 'corpus'")
        return self


class HomologyResponse(BaseModel):
    field: str
    dims: dict[int, int]
    torsion: dict[int, list[int]] | None = None


class PowerRequest(IdealInput, EngineOptions):
    h: int = Field(ge=0)


class TextResponse(BaseModel):
    text: str


class ConstructRequest(BaseModel):
    name: str
    p: int | None = None
    emit: str | None = None  # ideal | complex | graph


class ScanRequest(IdealInput, EngineOptions):
    primes: list[int] = Field(default_factory=lambda: [2])
    max_power: int = Field(default=1, ge=1)
    i_max: int | None = Field(default=None, ge=0)
    probe_indices: list[int] | None = None
    probe_exponents: list[str] | None = None
    persist: bool = False


class ScanResponse(BaseModel):
    report: dict
    saved_to: str | None = None


class SplittingRequest(EngineOptions):
    ideal: str
    j_part: str
    k_part: str
    fields: list[str] = Field(default_factory=lambda: ["Q"])


class SplittingResponse(BaseModel):
    results: list[dict]


class FormulaRequest(IdealInput, EngineOptions):
    w: str
    h: int = Field(default=1, ge=1)
    fields: list[str] = Field(default_factory=lambda: ["Q"])


class FormulaResponse(BaseModel):
    results: list[dict]


class RegularityRequest(IdealInput, EngineOptions):
    fields: list[str] = Field(default_factory=lambda: ["Q"])
    max_power: int = Field(default=2, ge=1)


class RegularityResponse(BaseModel):
    profile: dict


class DualRequest(BaseModel):
    complex: str


class PolarizeRequest(IdealInput, EngineOptions):
    pass


class HealthResponse(BaseModel):
    status: str
    version: str
