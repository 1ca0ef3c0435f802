from typing import List

from pydantic import BaseModel, Field

from app.core.config import FORMAT_VERSION


class LabelSchema(BaseModel):
    format: int = FORMAT_VERSION
    type: str = Field(..., examples=["A5"])
    alpha: List[int] = Field(..., examples=[[0, 1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0]])


class LabelSetSchema(BaseModel):
    format: int = FORMAT_VERSION
    type: str = Field(..., examples=["A2"])
    labels: List[List[int]]
