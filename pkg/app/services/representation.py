"""Representations as tuples of matrices, acting on row vectors from the right.

For an arrow b the matrix M_b has shape d_{s(b)} x d_{e(b)} and a path
b1 b2 ... bl acts by M_{b1} M_{b2} ... M_{bl}. A homomorphism f: M -> N is a
family f_i of d^M_i x d^N_i matrices with M_b f_{e(b)} = f_{s(b)} N_b.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence

import numpy as np

from app.core.field import Field, QQ_FIELD
from app.core.linalg import (
    LinalgError,
    LinearSystem,
    block_diag,
    chain,
    coordinates,
    invert,
    is_zero,
    matmul,
    rank,
)
from app.services.quiver import (
    AlgebraKind,
    AlgebraPresentation,
    DimVector,
    Relation,
    build_algebra,
    gl_dim,
    path_algebra,
)

logger = logging.getLogger(__name__)

VertexMaps = Dict[int, np.ndarray]


class RepresentationError(Exception):
    pass


@dataclass(frozen=True, eq=False)
class Representation:
    algebra: AlgebraPresentation
    field: Field
    dims: DimVector
    mats: Mapping[str, np.ndarray]

    def __post_init__(self):
        q = self.algebra.quiver
        try:
            dims = q.check_dim(self.dims)
        except Exception as e:
            raise RepresentationError(f"Invalid dimension vector: {e}") from e
        missing = set(q.arrow_ids) - set(self.mats)
        extra = set(self.mats) - set(q.arrow_ids)
        if missing or extra:
            raise RepresentationError(f"Matrices do not match arrows (missing {sorted(missing)}, extra {sorted(extra)})")
        mats = {}
        for a in q.arrows:
            m = np.asarray(self.mats[a.id], dtype=object)
            expected = (dims[a.s - 1], dims[a.e - 1])
            if m.ndim != 2 or m.shape != expected:
                raise RepresentationError(f"Arrow {a.id} carries a {m.shape} matrix, expected {expected}")
            mats[a.id] = self.field.coerce(m)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "mats", mats)

    @property
    def quiver(self):
        return self.algebra.quiver

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def dim_at(self, i: int) -> int:
        return self.dims[i - 1]

    def path_matrix(self, start: int, path: Sequence[str]) -> np.ndarray:
        return chain(self.field, [self.mats[b] for b in path], self.dim_at(start))

    def relation_value(self, rel: Relation) -> np.ndarray:
        value = self.field.zeros((self.dim_at(rel.s), self.dim_at(rel.e)))
        for coeff, path in rel.terms:
            value = value + self.path_matrix(rel.s, path) * self.field.convert(coeff)
        return value


def check_relations(m: Representation) -> bool:
    for rel in m.algebra.relations:
        if not is_zero(m.relation_value(rel)):
            logger.debug(f"Relation at vertex {rel.s} fails", extra={"dims": m.dims})
            return False
    return True


def require_compatible(m: Representation, n: Representation) -> None:
    if m.field != n.field:
        raise RepresentationError(f"Field mismatch: {m.field.tag} vs {n.field.tag}")
    if m.algebra != n.algebra:
        raise RepresentationError(
            f"Algebra mismatch: {m.algebra.kind.value} over {m.quiver.name} vs "
            f"{n.algebra.kind.value} over {n.quiver.name}"
        )


# ============================================================================
# Constructors
# ============================================================================


def zero_module(algebra: AlgebraPresentation, field: Field = QQ_FIELD) -> Representation:
    q = algebra.quiver
    return Representation(algebra, field, (0,) * q.n, {a.id: field.zeros((0, 0)) for a in q.arrows})


def simple_module(algebra: AlgebraPresentation, i: int, field: Field = QQ_FIELD) -> Representation:
    q = algebra.quiver
    if i not in q.vertices:
        raise RepresentationError(f"No vertex {i} in {q.name}")
    dims = tuple(1 if v == i else 0 for v in q.vertices)
    mats = {a.id: field.zeros((dims[a.s - 1], dims[a.e - 1])) for a in q.arrows}
    return Representation(algebra, field, dims, mats)


def from_rows(algebra: AlgebraPresentation, dims: Sequence[int], rows: Mapping[str, Sequence[Sequence[object]]],
              field: Field = QQ_FIELD) -> Representation:
    """Build a module from plain nested lists; unlisted arrows act by zero."""
    q = algebra.quiver
    dims = q.check_dim(dims)
    mats = {}
    for a in q.arrows:
        shape = (dims[a.s - 1], dims[a.e - 1])
        mats[a.id] = field.matrix(rows[a.id], shape) if a.id in rows else field.zeros(shape)
    unknown = set(rows) - set(q.arrow_ids)
    if unknown:
        raise RepresentationError(f"Unknown arrows {sorted(unknown)}")
    return Representation(algebra, field, dims, mats)


def direct_sum(m: Representation, n: Representation) -> Representation:
    require_compatible(m, n)
    dims = tuple(x + y for x, y in zip(m.dims, n.dims))
    mats = {b: block_diag(m.field, m.mats[b], n.mats[b]) for b in m.quiver.arrow_ids}
    return Representation(m.algebra, m.field, dims, mats)


def direct_sum_all(parts: Sequence[Representation], algebra: AlgebraPresentation,
                   field: Field = QQ_FIELD) -> Representation:
    total = zero_module(algebra, field)
    for part in parts:
        total = direct_sum(total, part)
    return total


def act(g: VertexMaps, m: Representation) -> Representation:
    """Base change g·M with (g·M)_b = g_{s(b)} M_b g_{e(b)}^{-1}."""
    inverses = {}
    for i in m.quiver.vertices:
        try:
            inverses[i] = invert(m.field, g[i])
        except LinalgError as e:
            raise RepresentationError(f"Group element is not invertible at vertex {i}: {e}") from e
    mats = {
        a.id: matmul(m.field, matmul(m.field, m.field.coerce(g[a.s]), m.mats[a.id]), inverses[a.e])
        for a in m.quiver.arrows
    }
    return Representation(m.algebra, m.field, m.dims, mats)


def restrict(m: Representation, bases: VertexMaps) -> Representation:
    """Subrepresentation spanned per vertex by the rows of ``bases[i]``."""
    dims = tuple(bases[i].shape[0] for i in m.quiver.vertices)
    mats = {}
    for a in m.quiver.arrows:
        image = matmul(m.field, bases[a.s], m.mats[a.id])
        try:
            mats[a.id] = coordinates(m.field, bases[a.e], image)
        except LinalgError as e:
            raise RepresentationError(f"Subspaces are not stable under arrow {a.id}") from e
    return Representation(m.algebra, m.field, dims, mats)


def forward_part(m: Representation) -> Representation:
    """Forget the reversed arrows; the result lives over the path algebra of the base quiver."""
    base = m.algebra.base
    algebra = path_algebra(base)
    return Representation(algebra, m.field, m.dims, {b: m.mats[b] for b in base.arrow_ids})


def lift(mf: Representation, backward: Mapping[str, np.ndarray]) -> Representation:
    """Attach reversed-arrow matrices to a forward module over the preprojective algebra."""
    algebra = build_algebra(mf.algebra.base, AlgebraKind.PREPROJECTIVE)
    mats = dict(mf.mats)
    mats.update(backward)
    return Representation(algebra, mf.field, mf.dims, mats)


def zero_lift(mf: Representation) -> Representation:
    algebra = build_algebra(mf.algebra.base, AlgebraKind.PREPROJECTIVE)
    backward = {
        b: mf.field.zeros((mf.dim_at(algebra.quiver.arrow(b).s), mf.dim_at(algebra.quiver.arrow(b).e)))
        for b in algebra.backward_arrows
    }
    return lift(mf, backward)


# ============================================================================
# Homomorphisms
# ============================================================================


@dataclass
class HomBasis:
    source: Representation
    target: Representation
    basis: List[VertexMaps]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def combine(self, coeffs: Sequence[object]) -> VertexMaps:
        field = self.source.field
        out = {
            i: field.zeros((self.source.dim_at(i), self.target.dim_at(i)))
            for i in self.source.quiver.vertices
        }
        for c, f in zip(coeffs, self.basis):
            c = field.convert(c)
            if c == 0:
                continue
            for i in out:
                out[i] = out[i] + f[i] * c
        return out

    def random_element(self, rng: np.random.Generator, bound: int) -> VertexMaps:
        field = self.source.field
        return self.combine([field.random_scalar(rng, bound) for _ in self.basis])


def _hom_system(m: Representation, n: Representation) -> LinearSystem:
    field = m.field
    system = LinearSystem(field)
    for i in m.quiver.vertices:
        system.add_unknown(str(i), (m.dim_at(i), n.dim_at(i)))
    for a in m.quiver.arrows:
        system.add_equation([
            (1, m.mats[a.id], str(a.e), field.eye(n.dim_at(a.e))),
            (-1, field.eye(m.dim_at(a.s)), str(a.s), n.mats[a.id]),
        ])
    return system


def hom_basis(m: Representation, n: Representation) -> HomBasis:
    require_compatible(m, n)
    system = _hom_system(m, n)
    basis = [
        {int(k): v for k, v in system.unpack(vec).items()}
        for vec in system.solution_space()
    ]
    return HomBasis(m, n, basis)


def dim_hom(m: Representation, n: Representation) -> int:
    require_compatible(m, n)
    system = _hom_system(m, n)
    return system.size - rank(m.field, system.matrix())


def is_homomorphism(f: VertexMaps, m: Representation, n: Representation) -> bool:
    for a in m.quiver.arrows:
        lhs = matmul(m.field, m.mats[a.id], f[a.e])
        rhs = matmul(m.field, f[a.s], n.mats[a.id])
        if not is_zero(lhs - rhs):
            return False
    return True


def compose(f: VertexMaps, g: VertexMaps, field: Field) -> VertexMaps:
    """f then g, as row-vector maps."""
    return {i: matmul(field, f[i], g[i]) for i in f}


def is_vertexwise_invertible(f: VertexMaps, field: Field) -> bool:
    for mat in f.values():
        rows, cols = mat.shape
        if rows != cols or rank(field, mat) != rows:
            return False
    return True


def orbit_dim(m: Representation) -> int:
    return gl_dim(m.dims) - dim_hom(m, m)


def identity_map(m: Representation) -> VertexMaps:
    return {i: m.field.eye(m.dim_at(i)) for i in m.quiver.vertices}

