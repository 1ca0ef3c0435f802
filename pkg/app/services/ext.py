"""First extension groups by cocycles, the Hom-based identity for preprojective algebras,
generic ext between components and middle terms of extensions.

A cocycle for (m, n) is a family g_b of d^m_{s(b)} x d^n_{e(b)} matrices such
that E_b = [[N_b, 0], [g_b, M_b]] satisfies the relations; E then contains n
as a submodule with quotient m.
"""

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.linalg import (
    LinearSystem,
    chain,
    extend_to_complement,
    is_zero,
    rank,
    row_basis,
    solve,
)
from app.core.sampling import SamplingContext
from app.services.components import sample_component_point
from app.services.endomorphisms import Decomposition, decompose, is_isomorphic
from app.services.quiver import AlgebraKind, is_dynkin, sym_form
from app.services.representation import (
    Representation,
    dim_hom,
    forward_part,
    require_compatible,
    simple_module,
)
from app.services.roots import ComponentLabel, RootSystem, gabriel_label

logger = logging.getLogger(__name__)

CENSUS_GRID: Tuple[Fraction, ...] = tuple(
    Fraction(x) for x in ("0", "1", "-1", "2", "-2", "3", "-3", "1/2", "-1/2", "5", "7", "1/3")
)
MAX_CENSUS_DIM = 3


class ExtError(Exception):
    pass


def _cocycle_system(m: Representation, n: Representation) -> LinearSystem:
    field = m.field
    q = m.quiver
    system = LinearSystem(field)
    for a in q.arrows:
        system.add_unknown(a.id, (m.dim_at(a.s), n.dim_at(a.e)))
    for rel in m.algebra.relations:
        terms = []
        for coeff, path in rel.terms:
            for pos, b in enumerate(path):
                left = chain(field, [m.mats[x] for x in path[:pos]], m.dim_at(rel.s))
                right = chain(field, [n.mats[x] for x in path[pos + 1:]], n.dim_at(q.arrow(b).e))
                terms.append((coeff, left, b, right))
        system.add_equation(terms)
    return system


def _coboundary_matrix(m: Representation, n: Representation) -> np.ndarray:
    """Columns are the cocycles h_{s(b)} N_b − M_b h_{e(b)} of unit families h."""
    field = m.field
    system = LinearSystem(field)
    for i in m.quiver.vertices:
        system.add_unknown(str(i), (m.dim_at(i), n.dim_at(i)))
    for a in m.quiver.arrows:
        system.add_equation([
            (1, field.eye(m.dim_at(a.s)), str(a.s), n.mats[a.id]),
            (-1, m.mats[a.id], str(a.e), field.eye(n.dim_at(a.e))),
        ])
    return system.matrix()


@dataclass
class ExtCocycleSpace:
    source: Representation
    target: Representation
    system: LinearSystem
    cocycle_dim: int
    coboundary_rank: int
    basis: List[Dict[str, np.ndarray]] = dc_field(default_factory=list)
    coboundaries: Optional[np.ndarray] = None

    @property
    def ext_dim(self) -> int:
        return self.cocycle_dim - self.coboundary_rank

    def is_cocycle(self, g: Dict[str, np.ndarray]) -> bool:
        vec = self.system.pack(g)
        return is_zero(self.system.matrix().dot(vec)) if self.system.size else True

    def combine(self, coeffs: Sequence[object]) -> Dict[str, np.ndarray]:
        field = self.source.field
        vec = np.full(self.system.size, field.zero, dtype=object)
        for c, g in zip(coeffs, self.basis):
            c = field.convert(c)
            if c != 0:
                vec = vec + self.system.pack(g) * c
        return self.system.unpack(vec)

    def class_coordinates(self, g: Dict[str, np.ndarray]) -> List[object]:
        """Coordinates of the class of g in the chosen Ext basis."""
        if self.coboundaries is None:
            raise ExtError("Cocycle space was built without an Ext basis")
        field = self.source.field
        columns = [self.system.pack(b) for b in self.basis] + list(self.coboundaries)
        if not columns:
            return []
        spanning = field.zeros((self.system.size, len(columns)))
        for j, col in enumerate(columns):
            spanning[:, j] = col
        x = solve(field, spanning, self.system.pack(g))
        if x is None:
            raise ExtError("Family is not a cocycle")
        return list(x[: len(self.basis)])


def ext1_dim_direct(m: Representation, n: Representation) -> int:
    require_compatible(m, n)
    system = _cocycle_system(m, n)
    cocycles = system.size - rank(m.field, system.matrix())
    coboundaries = sum(x * y for x, y in zip(m.dims, n.dims)) - dim_hom(m, n)
    return cocycles - coboundaries


def ext_basis(m: Representation, n: Representation) -> ExtCocycleSpace:
    """Cocycles representing a basis of Ext¹(m, n)."""
    require_compatible(m, n)
    field = m.field
    system = _cocycle_system(m, n)
    cocycles = system.solution_space()
    image = _coboundary_matrix(m, n)
    coboundaries = row_basis(field, list(image.T), system.size)
    representatives = extend_to_complement(field, coboundaries, cocycles)
    return ExtCocycleSpace(
        m, n, system, len(cocycles), coboundaries.shape[0],
        [system.unpack(v) for v in representatives], coboundaries,
    )


def ext1_dim_cb(m: Representation, n: Representation) -> int:
    """dim Hom(m, n) + dim Hom(n, m) − (d_m, d_n) over a Dynkin preprojective algebra."""
    require_compatible(m, n)
    if m.algebra.kind != AlgebraKind.PREPROJECTIVE or not is_dynkin(m.algebra.base):
        raise ExtError("The Hom identity for Ext¹ needs a preprojective algebra of Dynkin type")
    return dim_hom(m, n) + dim_hom(n, m) - sym_form(m.algebra.base, m.dims, n.dims)


def is_projective(m: Representation) -> bool:
    if m.algebra.kind != AlgebraKind.PREPROJECTIVE:
        raise ExtError("Projectivity is tested over preprojective algebras")
    return all(
        ext1_dim_direct(m, simple_module(m.algebra, i, m.field)) == 0
        for i in m.quiver.vertices
    )


def extension_middle_term(m: Representation, n: Representation, g: Dict[str, np.ndarray]) -> Representation:
    require_compatible(m, n)
    field = m.field
    system = _cocycle_system(m, n)
    try:
        vec = system.pack({b: field.coerce(g[b]) for b in m.quiver.arrow_ids})
    except (KeyError, ValueError) as e:
        raise ExtError(f"Malformed extension class: {e}") from e
    if system.size and not is_zero(system.matrix().dot(vec)):
        raise ExtError("Extension class is not a cocycle")
    dims = tuple(x + y for x, y in zip(n.dims, m.dims))
    mats = {}
    for a in m.quiver.arrows:
        block = field.zeros((dims[a.s - 1], dims[a.e - 1]))
        ns, ne = n.dim_at(a.s), n.dim_at(a.e)
        block[:ns, :ne] = n.mats[a.id]
        block[ns:, :ne] = field.coerce(g[a.id])
        block[ns:, ne:] = m.mats[a.id]
        mats[a.id] = block
    return Representation(m.algebra, field, dims, mats)


# ============================================================================
# Generic ext between components
# ============================================================================


def generic_ext(a: ComponentLabel, b: ComponentLabel, ctx: SamplingContext, method: str = "direct") -> int:
    """min over independent sample pairs of dim Ext¹(x, y) with x ∈ C_a, y ∈ C_b."""
    compute = ext1_dim_direct if method == "direct" else ext1_dim_cb
    values = []
    for i in range(ctx.samples):
        x = sample_component_point(a, ctx, i, "ext-left").module
        y = sample_component_point(b, ctx, i, "ext-right").module
        values.append(compute(x, y))
    value = min(values)
    logger.info(f"ext({a.describe()}, {b.describe()}) = {value}", extra=ctx.provenance())
    return value


# ============================================================================
# Self-extension census
# ============================================================================


@dataclass
class CensusEntry:
    coefficients: List[object]
    source: str
    middle: Representation
    decomposition: Decomposition
    labels: List[ComponentLabel] = dc_field(default_factory=list)

    @property
    def part_dims(self) -> List[tuple]:
        return self.decomposition.dims

    @property
    def indecomposable(self) -> bool:
        return len(self.decomposition.parts) == 1


@dataclass
class CensusReport:
    module: Representation
    ext_dim: int
    entries: List[CensusEntry]
    types: List[List[int]]

    def contains(self, target: Representation, ctx: SamplingContext) -> bool:
        return any(is_isomorphic(e.middle, target, ctx) for e in self.entries)


def _grid_classes(dim: int) -> List[Tuple[Fraction, ...]]:
    one, zero = Fraction(1), Fraction(0)
    if dim == 1:
        return [(one,)]
    if dim == 2:
        return [(one, t) for t in CENSUS_GRID] + [(zero, one)]
    coarse = CENSUS_GRID[:6]
    return ([(one, s, t) for s in coarse for t in coarse]
            + [(zero, one, t) for t in coarse] + [(zero, zero, one)])


def self_extension_census(m: Representation, ctx: SamplingContext, rs: Optional[RootSystem] = None,
                          probes: Optional[Dict[str, Dict[str, np.ndarray]]] = None) -> CensusReport:
    """Middle terms of self-extensions along a grid of lines in Ext¹(m, m), plus probe classes."""
    space = ext_basis(m, m)
    if space.ext_dim > MAX_CENSUS_DIM:
        raise ExtError(f"Census needs dim Ext¹ ≤ {MAX_CENSUS_DIM}, got {space.ext_dim}")
    classes: List[Tuple[str, List[object], Dict[str, np.ndarray]]] = []
    if space.ext_dim:
        for coeffs in _grid_classes(space.ext_dim):
            classes.append(("grid", list(coeffs), space.combine(coeffs)))
    for name, g in (probes or {}).items():
        classes.append((name, space.class_coordinates(g), g))

    entries = []
    for source, coeffs, g in classes:
        middle = extension_middle_term(m, m, g)
        parts = decompose(middle, ctx)
        labels = []
        if rs is not None:
            labels = [gabriel_label(forward_part(p), rs, ctx) for p in parts.parts]
        entries.append(CensusEntry(coeffs, source, middle, parts, labels))

    types: List[List[int]] = []
    for idx, entry in enumerate(entries):
        for group in types:
            if is_isomorphic(entries[group[0]].middle, entry.middle, ctx):
                group.append(idx)
                break
        else:
            types.append([idx])
    logger.info(f"Census found {len(types)} middle-term types over {len(entries)} classes")
    return CensusReport(m, space.ext_dim, entries, types)
