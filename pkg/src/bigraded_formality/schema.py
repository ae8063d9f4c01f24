from __future__ import annotations

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

Verdict = Optional[bool]


class ExtensionSpec(BaseModel):
    """Input of ``lefschetz-extend``: references are paths or ``corpus:NAME``."""

    model_config = ConfigDict(extra="forbid")
    name: Optional[str] = None
    model: str
    target: str
    restriction: Dict[str, str] = Field(default_factory=dict)
    n: int = Field(..., ge=1)
    truncation: Optional[int] = Field(None, ge=3)


class CompletionSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")
    partial: str
    target: str
    assignment: Dict[str, str] = Field(default_factory=dict)
    truncation: int = Field(..., ge=3)


# -- report pieces ---------------------------------------------------------------

class WitnessReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    condition: Literal["BC", "A"]
    bidegree: str
    element: str
    primitive: Optional[str] = None  # ∂∂̄-primitive for BC
    alpha: Optional[str] = None  # element = ∂alpha + ∂̄beta for A
    beta: Optional[str] = None


class CertificateReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    algebra: str
    s: int
    scope: str
    closed: Dict[str, List[str]] = Field(default_factory=dict)
    nonclosed: Dict[str, List[str]] = Field(default_factory=dict)
    adjustments: Dict[str, str] = Field(default_factory=dict)
    witnesses: List[WitnessReport] = Field(default_factory=list)


class ValidateReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["free", "finite"]
    name: str
    generators: int
    truncation: Optional[int] = None
    minimal: Optional[bool] = None
    euler: Optional[bool] = None


class CohomologyReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: str
    dims: Dict[str, int] = Field(default_factory=dict)
    representatives: Dict[str, List[str]] = Field(default_factory=dict)


class DimsReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    dims: Dict[str, Dict[str, int]]


class ShapeReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: Literal["dot", "square", "zigzag"]
    anchor: str
    cells: List[str]


class ZigzagReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    dots: int
    squares: int
    zigzags: int
    shapes: List[ShapeReport] = Field(default_factory=list)
    predicted: Dict[str, List[int]] = Field(default_factory=dict)


class DdbarReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    scope: str
    holds: bool
    bidegree: Optional[str] = None
    witness: Optional[str] = None
    table: Dict[str, str] = Field(default_factory=dict)
    bc_to_a: Dict[str, bool] = Field(default_factory=dict)
    notes: List[str] = Field(default_factory=list)


class PairingBlockReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    bidegree: str
    rows: int
    cols: int
    rank: int
    matrix: List[List[str]] = Field(default_factory=list)


class PairingReportModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    n: int
    holds: bool
    omega: Optional[str] = None
    blocks: List[PairingBlockReport] = Field(default_factory=list)
    failure: Optional[str] = None
    bidegree: Optional[str] = None
    witness: Optional[str] = None


class VerifyReportModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    passed: bool
    scope: int
    failures: List[str] = Field(default_factory=list)
    bidegree: Optional[str] = None
    witness: Optional[str] = None
    slices_checked: int = 0
    remark_checked: int = 0


class StrongReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    s: int
    holds: bool
    status: Literal["certified", "refuted", "not certified"]
    scope: str
    message: Optional[str] = None
    bidegree: Optional[str] = None
    witness: Optional[str] = None
    certificate: Optional[CertificateReport] = None


class NormalFormReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    case: Literal["1.1", "1.2", "1.3", "2.1", "2.2"]
    eta0: str
    tau: str
    alpha: str
    beta: str


class AdjustmentReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    generator: str
    bidegree: str
    psi: str
    lambdas: List[str] = Field(default_factory=list)


class PromotionReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    n: int
    normal_forms: List[NormalFormReport] = Field(default_factory=list)
    adjustments: List[AdjustmentReport] = Field(default_factory=list)
    verification: VerifyReportModel
    certificate: CertificateReport


class CompletionReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    presentation: str
    triples: List[Dict[str, str]] = Field(default_factory=list)
    closed_added: List[str] = Field(default_factory=list)
    comparison: Dict[str, Dict[str, List[int]]] = Field(default_factory=dict)
    matches: bool
    minimal: bool
    passes: int = 0


class CentralModelReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    presentation: str
    strong: StrongReport
    completion: CompletionReport
    promotion: PromotionReport


class RelationsReportModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    n: int
    holds: bool
    failing_degree: Optional[int] = None
    bidegree: Optional[str] = None
    witness: Optional[str] = None
    checked: Dict[str, List[int]] = Field(default_factory=dict)


class RelationsModelReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    relations: RelationsReportModel
    completion: CompletionReport
    strong: StrongReport
    promotion: PromotionReport


class ErrorReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    error: str
    message: str
    bidegree: Optional[str] = None
    witness: Optional[str] = None


class ExtensionReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    name: str
    presentation: str
    verification: VerifyReportModel
    added_closed: List[str] = Field(default_factory=list)
    added_triples: List[Dict[str, str]] = Field(default_factory=list)
    frozen_ideal: Dict[str, int] = Field(default_factory=dict)
    normal_forms: List[NormalFormReport] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)
    passes: int = 0
    promotion: Optional[PromotionReport] = None
    obstruction: Optional[ErrorReport] = None


class CorpusListing(BaseModel):
    model_config = ConfigDict(extra="forbid")
    name: str
    kind: Literal["presentation", "hodge", "extension"]
    command: str
    description: str


class Report(BaseModel):
    """Envelope written for every command."""

    model_config = ConfigDict(extra="forbid")
    tool: str = "bigraded-formality"
    version: str
    command: str
    input: Optional[str] = None
    sha256: Optional[str] = None
    verdict: Verdict = None
    exit_code: int = Field(..., ge=0, le=2)
    result: Dict[str, Any] = Field(default_factory=dict)
