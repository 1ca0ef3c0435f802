"""Endomorphism rings: radical, indecomposability, Fitting splitting and isomorphism tests."""

import logging
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import List, Optional

import numpy as np

from app.core.config import ENDO_COEFF_BOUND, ISO_TRIALS, SPLIT_RETRY_BUDGET
from app.core.linalg import kernel_basis, left_kernel_basis, matmul, rank, row_basis
from app.core.polynomials import charpoly, coprime_split, evaluate_at
from app.core.sampling import SamplingContext
from app.services.representation import (
    HomBasis,
    Representation,
    VertexMaps,
    compose,
    dim_hom,
    direct_sum_all,
    hom_basis,
    identity_map,
    is_homomorphism,
    is_vertexwise_invertible,
    require_compatible,
    restrict,
)

logger = logging.getLogger(__name__)


class DecompositionError(Exception):
    pass


# ============================================================================
# Radical and indecomposability
# ============================================================================


def _trace_gram(end: HomBasis) -> np.ndarray:
    field = end.source.field
    k = end.dim
    gram = field.zeros((k, k))
    for j, f in enumerate(end.basis):
        for l, g in enumerate(end.basis[j:], start=j):
            total = field.zero
            for product in compose(f, g, field).values():
                for r in range(product.shape[0]):
                    total = total + product[r, r]
            gram[j, l] = total
            gram[l, j] = total
    return gram


def endo_radical_dim(m: Representation, end: Optional[HomBasis] = None) -> int:
    """Dimension of rad End(m) as the kernel of the trace form (f, g) ↦ Σ_i tr(f_i g_i)."""
    if not m.field.is_rational:
        raise DecompositionError(
            f"Trace-form radical is only certified in characteristic 0, field is {m.field.tag}"
        )
    end = end or hom_basis(m, m)
    if end.dim == 0:
        return 0
    return end.dim - rank(m.field, _trace_gram(end))


class Verdict(str, Enum):
    INDECOMPOSABLE = "indecomposable"
    DECOMPOSABLE = "decomposable"
    UNKNOWN = "unknown"


@dataclass
class IndecomposabilityReport:
    verdict: Verdict
    end_dim: int
    radical_dim: Optional[int]
    certified: bool
    note: str = ""

    @property
    def top_dim(self) -> Optional[int]:
        return None if self.radical_dim is None else self.end_dim - self.radical_dim


# ============================================================================
# Fitting splitting
# ============================================================================


def _global_matrix(m: Representation, phi: VertexMaps) -> np.ndarray:
    n = m.total_dim
    out = m.field.zeros((n, n))
    offset = 0
    for i in m.quiver.vertices:
        d = m.dim_at(i)
        out[offset:offset + d, offset:offset + d] = phi[i]
        offset += d
    return out


class FittingDecomposer:
    """Krull–Remak–Schmidt decomposition by repeated Fitting splits.

    Random endomorphisms alternate between unconstrained draws and draws that
    kill a random vector at one vertex; the latter are never invertible, so on
    a decomposable module they eventually have eigenvalue 0 with a proper
    generalized eigenspace.
    """

    def __init__(self, retries: int = SPLIT_RETRY_BUDGET, bound: int = ENDO_COEFF_BOUND):
        self.retries = retries
        self.bound = bound

    def draw(self, end: HomBasis, rng: np.random.Generator, constrained: bool) -> Optional[VertexMaps]:
        m = end.source
        field = m.field
        if not constrained:
            return end.random_element(rng, self.bound)
        support = [i for i in m.quiver.vertices if m.dim_at(i)]
        i = support[int(rng.integers(0, len(support)))]
        v = field.random_matrix(rng, (1, m.dim_at(i)), self.bound)
        if all(x == 0 for x in v.flat):
            return None
        # columns: images v·f_i for each basis element
        images = field.zeros((m.dim_at(i), end.dim))
        for j, f in enumerate(end.basis):
            images[:, j] = matmul(field, v, f[i])[0]
        kernel = kernel_basis(field, images)
        if not kernel:
            return None
        coeffs = np.full(end.dim, field.zero, dtype=object)
        for vec in kernel:
            coeffs = coeffs + vec * field.random_scalar(rng, self.bound)
        return end.combine(list(coeffs))

    def split(self, m: Representation, phi: VertexMaps) -> Optional[List[Representation]]:
        field = m.field
        factors = coprime_split(field, charpoly(field, _global_matrix(m, phi)))
        if len(factors) < 2:
            return None
        parts = []
        for factor in factors:
            bases = {}
            for i in m.quiver.vertices:
                d = m.dim_at(i)
                if d == 0:
                    bases[i] = field.zeros((0, 0))
                    continue
                power = evaluate_at(field, factor ** d, phi[i])
                bases[i] = row_basis(field, left_kernel_basis(field, power), d)
            parts.append(restrict(m, bases))
        if sum(p.total_dim for p in parts) != m.total_dim:
            raise DecompositionError("Fitting summands do not add up to the module")
        return [p for p in parts if p.total_dim]

    def try_split(self, m: Representation, rng: np.random.Generator,
                  end: Optional[HomBasis] = None) -> Optional[List[Representation]]:
        end = end or hom_basis(m, m)
        if end.dim <= 1:
            return None
        for attempt in range(self.retries):
            phi = self.draw(end, rng, constrained=attempt % 2 == 1)
            if phi is None:
                continue
            parts = self.split(m, phi)
            if parts:
                return parts
        return None

    def assess(self, m: Representation, rng: np.random.Generator) -> IndecomposabilityReport:
        if m.total_dim == 0:
            raise DecompositionError("The zero module is neither decomposable nor indecomposable")
        end = hom_basis(m, m)
        if m.field.is_rational:
            radical = endo_radical_dim(m, end)
            top = end.dim - radical
            if top == 1:
                return IndecomposabilityReport(Verdict.INDECOMPOSABLE, end.dim, radical, True)
            if self.try_split(m, rng, end):
                return IndecomposabilityReport(Verdict.DECOMPOSABLE, end.dim, radical, True)
            logger.warning(
                f"End/rad has dimension {top} but no splitting was found",
                extra={"dims": m.dims},
            )
            return IndecomposabilityReport(
                Verdict.UNKNOWN, end.dim, radical, False,
                "indecomposable over the algebraic closure: unknown",
            )
        if end.dim == 1:
            return IndecomposabilityReport(Verdict.INDECOMPOSABLE, 1, None, True)
        if self.try_split(m, rng, end):
            return IndecomposabilityReport(Verdict.DECOMPOSABLE, end.dim, None, True)
        logger.warning(f"Indecomposability over {m.field.tag} is heuristic", extra={"dims": m.dims})
        return IndecomposabilityReport(
            Verdict.INDECOMPOSABLE, end.dim, None, False, f"no split found over {m.field.tag}",
        )

    def decompose(self, m: Representation, rng: np.random.Generator) -> "Decomposition":
        pending = [m] if m.total_dim else []
        parts: List[Representation] = []
        certified = True
        while pending:
            current = pending.pop()
            end = hom_basis(current, current)
            if current.field.is_rational and end.dim - endo_radical_dim(current, end) == 1:
                parts.append(current)
                continue
            if not current.field.is_rational and end.dim == 1:
                parts.append(current)
                continue
            pieces = self.try_split(current, rng, end)
            if pieces:
                pending.extend(pieces)
                continue
            if current.field.is_rational:
                raise DecompositionError(
                    f"Splitting stalled after {self.retries} endomorphisms on a module of dims "
                    f"{current.dims} that is not certified indecomposable"
                )
            certified = False
            parts.append(current)
        parts.sort(key=lambda p: (p.total_dim, p.dims), reverse=True)
        logger.info(f"Decomposed module into {len(parts)} summands", extra={"dims": m.dims})
        return Decomposition(m, parts, certified)


@dataclass
class Decomposition:
    module: Representation
    parts: List[Representation] = dc_field(default_factory=list)
    certified: bool = True

    @property
    def dims(self) -> List[tuple]:
        return [p.dims for p in self.parts]

    def reassemble(self) -> Representation:
        return direct_sum_all(self.parts, self.module.algebra, self.module.field)


_decomposer = FittingDecomposer()


def _stream(ctx: Optional[SamplingContext], rng: Optional[np.random.Generator], key: str) -> np.random.Generator:
    if rng is not None:
        return rng
    return (ctx or SamplingContext()).rng(key)


def assess_indecomposable(m: Representation, ctx: Optional[SamplingContext] = None,
                          rng: Optional[np.random.Generator] = None) -> IndecomposabilityReport:
    return _decomposer.assess(m, _stream(ctx, rng, "indecomposable"))


def is_indecomposable(m: Representation, ctx: Optional[SamplingContext] = None,
                      rng: Optional[np.random.Generator] = None) -> bool:
    return assess_indecomposable(m, ctx, rng).verdict == Verdict.INDECOMPOSABLE


def krs_decompose(m: Representation, ctx: Optional[SamplingContext] = None,
                  rng: Optional[np.random.Generator] = None) -> List[Representation]:
    return _decomposer.decompose(m, _stream(ctx, rng, "krs")).parts


def decompose(m: Representation, ctx: Optional[SamplingContext] = None,
              rng: Optional[np.random.Generator] = None) -> Decomposition:
    return _decomposer.decompose(m, _stream(ctx, rng, "krs"))


# ============================================================================
# Isomorphism
# ============================================================================


class IsoStatus(str, Enum):
    ISOMORPHIC = "isomorphic"
    NONISOMORPHIC = "certified-nonisomorphic"
    NO_WITNESS = "no-witness"


@dataclass
class IsomorphismReport:
    status: IsoStatus
    reason: str
    trials: int = 0
    witness: Optional[VertexMaps] = None

    @property
    def isomorphic(self) -> bool:
        return self.status == IsoStatus.ISOMORPHIC


def isomorphism_report(m: Representation, n: Representation, ctx: Optional[SamplingContext] = None,
                       rng: Optional[np.random.Generator] = None,
                       trials: int = ISO_TRIALS) -> IsomorphismReport:
    require_compatible(m, n)
    if m.dims != n.dims:
        return IsomorphismReport(IsoStatus.NONISOMORPHIC, f"dimension vectors differ: {m.dims} vs {n.dims}")
    if m is n:
        return IsomorphismReport(IsoStatus.ISOMORPHIC, "same module", 0, identity_map(m))
    hom_mn, hom_nm = dim_hom(m, n), dim_hom(n, m)
    end_m, end_n = dim_hom(m, m), dim_hom(n, n)
    if len({hom_mn, hom_nm, end_m, end_n}) > 1:
        return IsomorphismReport(
            IsoStatus.NONISOMORPHIC,
            f"Hom dimensions disagree: Hom(m,n)={hom_mn}, Hom(n,m)={hom_nm}, End(m)={end_m}, End(n)={end_n}",
        )
    if m.total_dim == 0:
        return IsomorphismReport(IsoStatus.ISOMORPHIC, "zero modules", 0, identity_map(m))
    basis = hom_basis(m, n)
    stream = _stream(ctx, rng, "isomorphism")
    for trial in range(1, trials + 1):
        f = basis.random_element(stream, ENDO_COEFF_BOUND)
        if is_vertexwise_invertible(f, m.field) and is_homomorphism(f, m, n):
            return IsomorphismReport(IsoStatus.ISOMORPHIC, "invertible homomorphism found", trial, f)
    logger.warning(f"No isomorphism witness in {trials} trials", extra={"dims": m.dims})
    return IsomorphismReport(IsoStatus.NO_WITNESS, f"no invertible homomorphism in {trials} trials", trials)


def is_isomorphic(m: Representation, n: Representation, ctx: Optional[SamplingContext] = None,
                  rng: Optional[np.random.Generator] = None, trials: int = ISO_TRIALS) -> bool:
    return isomorphism_report(m, n, ctx, rng, trials).isomorphic


def distinct_representatives(parts: List[Representation], ctx: Optional[SamplingContext] = None) -> List[Representation]:
    """One representative per isomorphism class, in input order."""
    reps: List[Representation] = []
    for p in parts:
        if not any(is_isomorphic(p, r, ctx) for r in reps):
            reps.append(p)
    return reps
