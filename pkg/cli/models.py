"""Pydantic models for mesh documents, vector documents and command reports."""
from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from tmesh_spline.mesh.hierarchy import HierSpec, Rational

MESH_FORMAT = "tmesh/1"
VECTORS_FORMAT = "tmesh-vectors/1"


class SegmentModel(BaseModel):
    orientation: Literal["horizontal", "vertical"]
    fixed: Rational
    lo: Rational
    hi: Rational
    level: Optional[int] = None
    provenance: Literal["original", "boundary-copy", "extended"] = "original"


class RectModel(BaseModel):
    xmin: Rational
    xmax: Rational
    ymin: Rational
    ymax: Rational


class MeshDocument(BaseModel):
    """Self-describing mesh file: degrees, pairing, and either a refinement script or segments."""
    format: Literal["tmesh/1"] = MESH_FORMAT
    m: int = Field(ge=1)
    n: int = Field(ge=1)
    extension_pairing: Literal["algebraic", "literal"] = "algebraic"
    kind: Literal["hierarchical", "segments"]
    spec: Optional[HierSpec] = None
    segments: Optional[list[SegmentModel]] = None
    inner_domain: Optional[RectModel] = None

    @model_validator(mode="after")
    def _check_body(self) -> "MeshDocument":
        if self.kind == "hierarchical":
            if self.spec is None:
                raise ValueError("a hierarchical document needs a spec")
            if (self.spec.m, self.spec.n) != (self.m, self.n):
                raise ValueError(f"header degrees ({self.m}, {self.n}) differ from spec ({self.spec.m}, {self.spec.n})")
        elif not self.segments:
            raise ValueError("a segments document needs at least the four boundary segments")
        return self


class VectorEntry(BaseModel):
    label: str
    provenance: dict = Field(default_factory=dict)
    # "x,y" -> factor
    entries: dict[str, Rational]


class VectorsDocument(BaseModel):
    format: Literal["tmesh-vectors/1"] = VECTORS_FORMAT
    m: int = Field(ge=1)
    n: int = Field(ge=1)
    mesh: MeshDocument
    vectors: list[VectorEntry]


class CensusModel(BaseModel):
    Vplus: int
    E_H: int
    E_V: int
    delta: int
    delta_per_level: list[int]


class DimensionReportModel(BaseModel):
    status: Literal["ok", "disagreement"]
    m: int
    n: int
    pairing: str
    census: Optional[CensusModel] = None
    formula: Optional[int] = None
    conformality: Optional[int] = None
    cellwise: Optional[int] = None
    formula_error: Optional[str] = None
    skipped: list[str] = Field(default_factory=list)
    agreement: bool
    # seconds, as decimal strings
    timings: dict[str, str] = Field(default_factory=dict)
    ledger: Optional[list[dict]] = None


class VerificationReportModel(BaseModel):
    status: Literal["ok", "failed"]
    count: int
    expected: int
    count_ok: bool
    independent: bool
    conformal: bool
    span_ok: bool
    per_level: dict[str, int]
    corrections: int
