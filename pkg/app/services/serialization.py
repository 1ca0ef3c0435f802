"""Conversion between domain objects and the versioned JSON schemas."""

import json
import logging
import os
from fractions import Fraction
from typing import Any, Dict, List, Optional, Type, TypeVar

from pydantic import BaseModel, ValidationError

from app.core.config import FORMAT_VERSION
from app.core.field import Field, FieldError
from app.schemas.label import LabelSchema, LabelSetSchema
from app.schemas.module import GenericSampleSchema, ModuleSchema, ShapedMatrixSchema
from app.schemas.quiver import AlgebraSchema, ArrowSchema, QuiverSchema, RelationSchema, RelationTermSchema
from app.services.components import GenericSample
from app.services.quiver import (
    AlgebraKind,
    AlgebraPresentation,
    Arrow,
    Quiver,
    QuiverError,
    Relation,
    build_algebra,
    dynkin_edges,
    quiver_from_type,
    relations_match_up_to_sign,
)
from app.services.representation import Representation, RepresentationError, check_relations
from app.services.roots import ComponentLabel, RootSystem, RootSystemError, parse_interval_sum

logger = logging.getLogger(__name__)

SchemaT = TypeVar("SchemaT", bound=BaseModel)


class SerializationError(Exception):
    pass


def dumps(model: BaseModel) -> str:
    return json.dumps(model.model_dump(mode="json", by_alias=True), indent=2, ensure_ascii=False) + "\n"


def load_json(path: str, schema: Type[SchemaT]) -> SchemaT:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError as e:
        raise SerializationError(f"{path}: file not found") from e
    except json.JSONDecodeError as e:
        raise SerializationError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}") from e
    try:
        model = schema.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(x) for x in first["loc"])
        raise SerializationError(f"{path}: {location}: {first['msg']}") from e
    version = getattr(model, "format", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise SerializationError(f"{path}: unsupported format {version}, expected {FORMAT_VERSION}")
    return model


# ============================================================================
# Quivers and algebras
# ============================================================================


def quiver_to_schema(q: Quiver) -> QuiverSchema:
    return QuiverSchema(
        type=q.dynkin_type or "explicit",
        vertices=q.n,
        arrows=[ArrowSchema(id=a.id, s=a.s, e=a.e) for a in q.arrows],
    )


def quiver_from_schema(schema: QuiverSchema) -> Quiver:
    try:
        arrows = tuple(Arrow(a.id, a.s, a.e) for a in schema.arrows)
        if schema.type == "explicit":
            return Quiver(schema.vertices, arrows)
        preset = quiver_from_type(schema.type)
        if preset.n != schema.vertices:
            raise SerializationError(f"Type {schema.type} has {preset.n} vertices, file says {schema.vertices}")
        kind, n = preset.dynkin_type[0], preset.n
        edges = sorted(tuple(sorted((a.s, a.e))) for a in arrows)
        if edges != sorted(dynkin_edges(kind, n)):
            raise SerializationError(f"Arrows do not orient the diagram {schema.type}")
        return Quiver(n, arrows, preset.dynkin_type)
    except QuiverError as e:
        raise SerializationError(f"Invalid quiver: {e}") from e


def relation_to_schema(rel: Relation) -> RelationSchema:
    return RelationSchema(
        s=rel.s,
        e=rel.e,
        terms=[RelationTermSchema(coeff=str(c), path=list(p)) for c, p in rel.terms],
    )


def _relation_from_schema(schema: RelationSchema) -> Relation:
    try:
        terms = tuple((Fraction(t.coeff), tuple(t.path)) for t in schema.terms)
    except (ValueError, ZeroDivisionError) as e:
        raise SerializationError(f"Bad relation coefficient: {e}") from e
    return Relation(schema.s, schema.e, terms)


def algebra_to_schema(algebra: AlgebraPresentation) -> AlgebraSchema:
    return AlgebraSchema(
        quiver=quiver_to_schema(algebra.base),
        kind=algebra.kind.value,
        relations=[relation_to_schema(r) for r in algebra.relations] or None,
    )


def algebra_from_schema(schema: AlgebraSchema) -> AlgebraPresentation:
    base = quiver_from_schema(schema.quiver)
    try:
        algebra = build_algebra(base, AlgebraKind(schema.kind))
    except QuiverError as e:
        raise SerializationError(f"Invalid algebra: {e}") from e
    if schema.relations is not None:
        given = [_relation_from_schema(r) for r in schema.relations]
        if not relations_match_up_to_sign(given, algebra.relations):
            raise SerializationError(f"Relations do not match the {schema.kind} relations of {base.name}")
    return algebra


# ============================================================================
# Modules
# ============================================================================


def _matrix_to_schema(field: Field, m) -> Any:
    rows = [[field.format_scalar(x) for x in row] for row in m]
    if m.shape[0] == 0 or m.shape[1] == 0:
        return ShapedMatrixSchema(shape=(int(m.shape[0]), int(m.shape[1])), rows=[])
    return rows


def _matrix_from_schema(field: Field, arrow_id: str, value: Any, shape) -> Any:
    if isinstance(value, ShapedMatrixSchema):
        if tuple(value.shape) != tuple(shape):
            raise SerializationError(f"mats.{arrow_id}: declared shape {value.shape}, expected {tuple(shape)}")
        rows = value.rows
    else:
        rows = value
    if 0 in tuple(shape) and not any(rows):
        return field.zeros(tuple(shape))
    try:
        return field.matrix([[_scalar(field, x) for x in row] for row in rows], tuple(shape))
    except FieldError as e:
        raise SerializationError(f"mats.{arrow_id}: {e}") from e


def _scalar(field: Field, x: Any):
    return field.convert(int(x)) if isinstance(x, int) else field.parse_scalar(x)


def module_to_schema(m: Representation) -> ModuleSchema:
    return ModuleSchema(
        algebra=algebra_to_schema(m.algebra),
        field=m.field.tag,
        dims=list(m.dims),
        mats={b: _matrix_to_schema(m.field, mat) for b, mat in m.mats.items()},
    )


def module_from_schema(schema: ModuleSchema, expected_field: Optional[Field] = None) -> Representation:
    try:
        field = Field.parse(schema.field)
    except FieldError as e:
        raise SerializationError(f"field: {e}") from e
    if expected_field is not None and field != expected_field:
        raise SerializationError(f"field: module is over {field.tag}, run is over {expected_field.tag}")
    algebra = algebra_from_schema(schema.algebra)
    q = algebra.quiver
    try:
        dims = q.check_dim(schema.dims)
    except QuiverError as e:
        raise SerializationError(f"dims: {e}") from e
    mats = {}
    for a in q.arrows:
        if a.id not in schema.mats:
            raise SerializationError(f"mats.{a.id}: missing")
        mats[a.id] = _matrix_from_schema(field, a.id, schema.mats[a.id], (dims[a.s - 1], dims[a.e - 1]))
    unknown = set(schema.mats) - set(q.arrow_ids)
    if unknown:
        raise SerializationError(f"mats: unknown arrows {sorted(unknown)}")
    try:
        m = Representation(algebra, field, dims, mats)
    except RepresentationError as e:
        raise SerializationError(str(e)) from e
    if not check_relations(m):
        raise SerializationError(f"mats: module violates the {algebra.kind.value} relations of {algebra.base.name}")
    return m


def load_module(path: str, expected_field: Optional[Field] = None) -> Representation:
    return module_from_schema(load_json(path, ModuleSchema), expected_field)


def sample_to_schema(sample: GenericSample, provenance: Dict[str, Any]) -> GenericSampleSchema:
    base = module_to_schema(sample.module)
    return GenericSampleSchema(
        **base.model_dump(),
        label=label_to_schema(sample.label),
        seed=sample.seed,
        index=sample.index,
        provenance=provenance,
    )


# ============================================================================
# Labels
# ============================================================================


def label_to_schema(label: ComponentLabel) -> LabelSchema:
    return LabelSchema(type=label.root_system.quiver.name, alpha=list(label.alpha))


def label_from_schema(schema: LabelSchema, rs: RootSystem) -> ComponentLabel:
    if schema.type != rs.quiver.name:
        raise SerializationError(f"Label is for {schema.type}, root system is {rs.quiver.name}")
    try:
        return rs.label(schema.alpha)
    except RootSystemError as e:
        raise SerializationError(f"alpha: {e}") from e


def parse_label(text: str, rs: RootSystem) -> ComponentLabel:
    """A label from a JSON file path, an interval sum like ``[1,2]+[3,3]`` or comma-separated coordinates."""
    try:
        if os.path.exists(text):
            return label_from_schema(load_json(text, LabelSchema), rs)
        if "[" in text:
            return parse_interval_sum(rs, text)
        return rs.label([int(x) for x in text.split(",")])
    except (ValueError, RootSystemError) as e:
        raise SerializationError(f"Cannot read label {text!r}: {e}") from e


def load_label_set(path: str) -> LabelSetSchema:
    return load_json(path, LabelSetSchema)


def labels_from_set(schema: LabelSetSchema, rs: RootSystem) -> List[ComponentLabel]:
    try:
        return [rs.label(alpha) for alpha in schema.labels]
    except RootSystemError as e:
        raise SerializationError(f"labels: {e}") from e
