from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from app.core.config import FORMAT_VERSION
from app.schemas.quiver import RelationSchema


class Provenance(BaseModel):
    seed: int
    samples: int
    field: str


class ReportBase(BaseModel):
    format: int = FORMAT_VERSION
    provenance: Provenance


class RootRow(BaseModel):
    index: int
    name: str
    dims: List[int]


class RootsReport(ReportBase):
    type: str
    count: int
    roots: List[RootRow]


class RelationsReport(ReportBase):
    type: str
    relations: List[RelationSchema]


class HomReport(ReportBase):
    field: str
    dim: int


class ExtReport(ReportBase):
    field: str
    direct: int
    cb: Optional[int] = None
    agree: Optional[bool] = None


class SummandRow(BaseModel):
    dims: List[int]
    label: Optional[List[int]] = None
    name: Optional[str] = None


class DecomposeReport(ReportBase):
    summands: List[SummandRow]
    certified: bool


class LabelReport(ReportBase):
    type: str
    alpha: List[int]
    name: str


class ComponentValueReport(ReportBase):
    type: str
    quantity: str = Field(..., examples=["mu_g", "ext"])
    labels: List[List[int]]
    value: int


class SumComponentReport(ReportBase):
    type: str
    a: List[int]
    b: List[int]
    sum: Optional[List[int]]


class CanonicalEvidenceRow(BaseModel):
    index: int
    end_dim: int
    parts: List[List[int]]
    sums_to_label: bool
    excluded: bool = False


class CanonicalReport(ReportBase):
    type: str
    alpha: List[int]
    status: str
    parts: List[List[int]]
    names: List[str]
    evidence: List[CanonicalEvidenceRow]


class NodeRow(BaseModel):
    alpha: List[int]
    name: str
    mu: int


class CliqueRow(BaseModel):
    members: List[str]
    size: int
    mu_sum: int
    roots: int
    conjecture_holds: Optional[bool]
    mu_one_members: int
    within_bound: bool
    note: str


class SearchReport(ReportBase):
    type: str
    max_label_sum: int
    nodes: List[NodeRow]
    edges: List[List[str]]
    rejected: Dict[str, str]
    cliques: List[CliqueRow]
    max_clique_size: int
    bound_holds: bool
    partial: bool
    frontier: List[str]


class WitnessReport(ReportBase):
    delta: List[List[int]]
    z: List[int]
    m: List[int]
    l: List[int]
    d: List[int]
    branch: str


class CheckRow(BaseModel):
    check: str
    expect: Any
    got: Any
    passed: bool = Field(..., alias="pass")
    detail: Dict[str, Any] = Field(default_factory=dict)

    model_config = {"populate_by_name": True}


class SuiteReportSchema(ReportBase):
    passed: bool
    checks: List[CheckRow]


class CensusRow(BaseModel):
    class_: List[str] = Field(..., alias="class")
    source: str
    dims: List[int]
    summand_dims: List[List[int]]
    summand_labels: List[List[int]]
    indecomposable: bool

    model_config = {"populate_by_name": True}


class CensusReportSchema(ReportBase):
    ext_dim: int
    entries: List[CensusRow]
    types: List[List[int]]


class RigidReport(ReportBase):
    status: str
    summands: int
    distinct: int
    bound: int
    within_bound: Optional[bool]
    labels: List[List[int]]


class MetadataReport(ReportBase):
    record: Dict[str, Any]
