from typing import List, Literal, Optional

from pydantic import BaseModel, Field


class ArrowSchema(BaseModel):
    id: str
    s: int = Field(..., ge=1)
    e: int = Field(..., ge=1)


class QuiverSchema(BaseModel):
    type: str = Field("explicit", examples=["A5", "D4", "explicit"])
    vertices: int = Field(..., ge=0)
    arrows: List[ArrowSchema]


class RelationTermSchema(BaseModel):
    coeff: str = Field(..., examples=["1", "-1", "1/2"])
    path: List[str] = Field(..., examples=[["abar1", "a1"]])


class RelationSchema(BaseModel):
    s: int
    e: int
    terms: List[RelationTermSchema]


class AlgebraSchema(BaseModel):
    """The quiver is the base quiver; a preprojective algebra doubles it."""

    quiver: QuiverSchema
    kind: Literal["path", "preprojective"] = "preprojective"
    relations: Optional[List[RelationSchema]] = None
