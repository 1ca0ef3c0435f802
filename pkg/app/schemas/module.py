from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, Field

from app.core.config import FORMAT_VERSION
from app.schemas.label import LabelSchema
from app.schemas.quiver import AlgebraSchema

ScalarText = Union[str, int]


class ShapedMatrixSchema(BaseModel):
    shape: Tuple[int, int]
    rows: List[List[ScalarText]] = Field(default_factory=list)


MatrixSchema = Union[ShapedMatrixSchema, List[List[ScalarText]]]


class ModuleSchema(BaseModel):
    format: int = FORMAT_VERSION
    algebra: AlgebraSchema
    field: str = Field("Q", examples=["Q", "fp:1073741827"])
    dims: List[int] = Field(..., examples=[[1, 2, 2, 2, 1]])
    mats: Dict[str, MatrixSchema]


class GenericSampleSchema(ModuleSchema):
    label: LabelSchema
    seed: int
    index: int = 0
    provenance: Optional[Dict[str, Union[int, str]]] = None
