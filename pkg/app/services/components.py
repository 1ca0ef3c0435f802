"""Irreducible components of nilpotent varieties: fibers of the forgetful map and generic points.

A component C_α is the closure of the set of preprojective modules whose
forward part lies in the orbit of M_α. Generic points keep the forward part
equal to M_α and draw the reversed arrows from the (linear) fiber over it.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional

import numpy as np

from app.core.config import FIBER_COEFF_BOUND
from app.core.field import Field
from app.core.linalg import LinearSystem, chain
from app.core.sampling import SamplingContext
from app.services.endomorphisms import IndecomposabilityReport, Verdict, assess_indecomposable
from app.services.quiver import AlgebraKind, build_algebra, euler_form, rep_space_dim
from app.services.representation import Representation, dim_hom, lift, orbit_dim
from app.services.roots import ComponentLabel, build_M_alpha

logger = logging.getLogger(__name__)


class ComponentError(Exception):
    pass


@dataclass
class FiberSpace:
    base: Representation
    basis: List[Dict[str, np.ndarray]]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def point(self, coeffs) -> Dict[str, np.ndarray]:
        field = self.base.field
        algebra = build_algebra(self.base.algebra.base, AlgebraKind.PREPROJECTIVE)
        out = {}
        for b in algebra.backward_arrows:
            arrow = algebra.quiver.arrow(b)
            out[b] = field.zeros((self.base.dim_at(arrow.s), self.base.dim_at(arrow.e)))
        for c, element in zip(coeffs, self.basis):
            c = field.convert(c)
            if c == 0:
                continue
            for b in out:
                out[b] = out[b] + element[b] * c
        return out

    def random_point(self, rng: np.random.Generator, bound: int = FIBER_COEFF_BOUND) -> Dict[str, np.ndarray]:
        field = self.base.field
        return self.point([field.random_scalar(rng, bound) for _ in self.basis])


def fiber_basis(mf: Representation) -> FiberSpace:
    if mf.algebra.kind != AlgebraKind.PATH:
        raise ComponentError("Fibers are taken over path-algebra modules")
    field = mf.field
    algebra = build_algebra(mf.algebra.base, AlgebraKind.PREPROJECTIVE)
    q = algebra.quiver
    backward = set(algebra.backward_arrows)
    system = LinearSystem(field)
    for b in algebra.backward_arrows:
        arrow = q.arrow(b)
        system.add_unknown(b, (mf.dim_at(arrow.s), mf.dim_at(arrow.e)))

    for rel in algebra.relations:
        terms = []
        for coeff, path in rel.terms:
            slots = [pos for pos, b in enumerate(path) if b in backward]
            if len(slots) != 1:
                raise ComponentError(f"Relation path {path} is not linear in the reversed arrows")
            pos = slots[0]
            unknown = q.arrow(path[pos])
            left = chain(field, [mf.mats[b] for b in path[:pos]], mf.dim_at(rel.s))
            right = chain(field, [mf.mats[b] for b in path[pos + 1:]], mf.dim_at(unknown.e))
            terms.append((coeff, left, path[pos], right))
        system.add_equation(terms)

    basis = [system.unpack(vec) for vec in system.solution_space()]
    logger.debug(f"Fiber over dims {mf.dims} has dimension {len(basis)}")
    return FiberSpace(mf, basis)


def expected_fiber_dim(mf: Representation) -> int:
    """dim End_kQ(mf) − ⟨d, d⟩, the dimension of the dual of Ext¹_kQ(mf, mf)."""
    return dim_hom(mf, mf) - euler_form(mf.algebra.base, mf.dims, mf.dims)


@lru_cache(maxsize=256)
def _forward_fiber(label: ComponentLabel, field: Field) -> FiberSpace:
    return fiber_basis(build_M_alpha(label, field))


@dataclass
class GenericSample:
    module: Representation
    label: ComponentLabel
    seed: int
    index: int

    @property
    def field(self) -> Field:
        return self.module.field


def sample_component_point(label: ComponentLabel, ctx: SamplingContext, index: int = 0,
                           stream: str = "component") -> GenericSample:
    """Point of C_α with forward part M_α; ``index`` and ``stream`` select independent draws."""
    fiber = _forward_fiber(label, ctx.field)
    rng = ctx.rng(stream, index, *label.alpha)
    module = lift(fiber.base, fiber.random_point(rng))
    return GenericSample(module, label, ctx.seed, index)


def sample_points(label: ComponentLabel, ctx: SamplingContext, stream: str = "component") -> List[GenericSample]:
    return [sample_component_point(label, ctx, i, stream) for i in range(ctx.samples)]


def component_dim(label: ComponentLabel) -> int:
    return rep_space_dim(label.root_system.quiver, label.dim_vector)


def generic_orbit_dim(label: ComponentLabel, ctx: SamplingContext) -> int:
    return max(orbit_dim(s.module) for s in sample_points(label, ctx))


def generic_end_dim(label: ComponentLabel, ctx: SamplingContext) -> int:
    return min(dim_hom(s.module, s.module) for s in sample_points(label, ctx))


def mu_g(label: ComponentLabel, ctx: SamplingContext) -> int:
    if ctx.samples < 1:
        raise ComponentError("At least one sample is needed")
    value = component_dim(label) - generic_orbit_dim(label, ctx)
    logger.info(f"mu_g({label.describe()}) = {value}", extra=ctx.provenance())
    return value


def generic_representative(label: ComponentLabel, ctx: SamplingContext) -> GenericSample:
    """The sample with the smallest endomorphism ring."""
    samples = sample_points(label, ctx)
    return min(samples, key=lambda s: dim_hom(s.module, s.module))


def component_indecomposability(label: ComponentLabel, ctx: SamplingContext,
                                 sample: Optional[GenericSample] = None) -> IndecomposabilityReport:
    if label.is_zero:
        raise ComponentError("The zero label has no indecomposability status")
    sample = sample or generic_representative(label, ctx)
    return assess_indecomposable(sample.module, ctx)


def component_is_indecomposable(label: ComponentLabel, ctx: SamplingContext) -> bool:
    return component_indecomposability(label, ctx).verdict == Verdict.INDECOMPOSABLE
