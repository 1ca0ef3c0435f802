"""Executable forms of the component calculus: canonical decompositions, sums of
components, parameter additivity, the orthogonal-set bound and its witnesses.
"""

import logging
from dataclasses import dataclass, field as dc_field
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx

from app.core.config import SEARCH_NODE_BUDGET
from app.core.linalg import integer_nullvector
from app.core.sampling import SamplingContext
from app.services.components import (
    GenericSample,
    component_indecomposability,
    mu_g,
    sample_component_point,
)
from app.services.endomorphisms import Verdict, decompose, distinct_representatives
from app.services.ext import ext1_dim_direct, generic_ext
from app.services.quiver import AlgebraKind, Quiver
from app.services.representation import Representation, dim_hom, forward_part
from app.services.roots import ComponentLabel, RootSystem, gabriel_label, positive_roots

logger = logging.getLogger(__name__)


class CalculusError(Exception):
    pass


# ============================================================================
# Canonical decomposition
# ============================================================================


@dataclass
class SampleEvidence:
    index: int
    end_dim: int
    parts: List[Tuple[int, ...]] = dc_field(default_factory=list)
    sums_to_label: bool = False
    excluded: bool = False


@dataclass
class CanonicalDecomposition:
    label: ComponentLabel
    parts: List[ComponentLabel]
    determined: bool
    evidence: List[SampleEvidence]
    provenance: Dict[str, object]

    @property
    def status(self) -> str:
        return "determined" if self.determined else "undetermined"


def _draw_samples(label: ComponentLabel, ctx: SamplingContext, indices: range) -> List[Tuple[GenericSample, SampleEvidence]]:
    drawn = []
    for i in indices:
        sample = sample_component_point(label, ctx, i, "canonical")
        drawn.append((sample, SampleEvidence(i, dim_hom(sample.module, sample.module))))
    return drawn


def _decompose_generic(label: ComponentLabel, ctx: SamplingContext,
                       drawn: List[Tuple[GenericSample, SampleEvidence]]) -> List[SampleEvidence]:
    """Decompose the samples of minimal End dimension; the others lie on a proper closed subset."""
    rs = label.root_system
    generic_end = min(e.end_dim for _, e in drawn)
    for sample, e in drawn:
        e.excluded = e.end_dim > generic_end
        if e.excluded or e.parts:
            continue
        pieces = decompose(sample.module, ctx).parts
        e.parts = sorted(gabriel_label(forward_part(p), rs, ctx).alpha for p in pieces)
        total = tuple(sum(col) for col in zip(*e.parts)) if e.parts else label.alpha
        e.sums_to_label = total == label.alpha
    return [e for _, e in drawn if not e.excluded]


def canonical_decomposition(label: ComponentLabel, ctx: SamplingContext) -> CanonicalDecomposition:
    if label.is_zero:
        raise CalculusError("The zero label has no canonical decomposition")
    drawn = _draw_samples(label, ctx, range(ctx.samples))
    generic = _decompose_generic(label, ctx, drawn)
    if len({tuple(e.parts) for e in generic}) > 1:
        logger.warning(
            f"Samples disagree on the decomposition of {label.describe()}, drawing {ctx.samples} more",
            extra=ctx.provenance(),
        )
        drawn += _draw_samples(label, ctx, range(ctx.samples, 2 * ctx.samples))
        generic = _decompose_generic(label, ctx, drawn)
    evidence = [e for _, e in drawn]
    excluded = [e.index for e in evidence if e.excluded]
    if excluded:
        logger.info(f"Samples {excluded} of {label.describe()} have a larger End and were skipped",
                    extra=ctx.provenance())
    determined = len({tuple(e.parts) for e in generic}) == 1
    rs = label.root_system
    parts = [rs.label(a) for a in generic[0].parts] if determined else []
    if not determined:
        logger.warning(f"Canonical decomposition of {label.describe()} is undetermined", extra=ctx.provenance())
    return CanonicalDecomposition(label, parts, determined, evidence, ctx.provenance())


# ============================================================================
# Sums of components and μ_g additivity
# ============================================================================


def direct_sum_is_component(a: ComponentLabel, b: ComponentLabel, ctx: SamplingContext) -> Optional[ComponentLabel]:
    if generic_ext(a, b, ctx) == 0 and generic_ext(b, a, ctx) == 0:
        return a + b
    return None


@dataclass
class MuAdditivityReport:
    parts: List[ComponentLabel]
    skipped: bool
    note: str = ""
    total_mu: Optional[int] = None
    part_mus: List[int] = dc_field(default_factory=list)

    @property
    def holds(self) -> Optional[bool]:
        if self.skipped:
            return None
        return self.total_mu == sum(self.part_mus)


def mu_additivity_check(parts: Sequence[ComponentLabel], ctx: SamplingContext) -> MuAdditivityReport:
    parts = list(parts)
    if not parts:
        raise CalculusError("Need at least one component")
    distinct = list(dict.fromkeys(parts))
    for a in distinct:
        for b in distinct:
            if generic_ext(a, b, ctx) != 0:
                return MuAdditivityReport(
                    parts, True, f"ext({a.describe()}, {b.describe()}) does not vanish",
                )
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    mus = {p: mu_g(p, ctx) for p in distinct}
    return MuAdditivityReport(parts, False, "", mu_g(total, ctx), [mus[p] for p in parts])


# ============================================================================
# Witnesses for the orthogonal-set bound
# ============================================================================


@dataclass
class TheoremOneWitness:
    delta: List[List[int]]
    z: List[int]
    m: List[int]
    l: List[int]
    d: List[int]
    branch: str


def _apply(delta: List[List[int]], v: Sequence[int]) -> List[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in delta]


def theorem1_witness(labels: Sequence[ComponentLabel]) -> TheoremOneWitness:
    """Two distinct natural combinations of N+1 labels with the same sum."""
    if not labels:
        raise CalculusError("No labels given")
    rs = labels[0].root_system
    n = rs.size
    if len(labels) != n + 1:
        raise CalculusError(f"Expected {n + 1} labels for a root system with {n} roots, got {len(labels)}")
    if any(lab.root_system != rs for lab in labels):
        raise CalculusError("Labels belong to different root systems")
    if any(lab.is_zero for lab in labels):
        raise CalculusError("Labels must be nonzero")
    if len({lab.alpha for lab in labels}) != len(labels):
        raise CalculusError("Labels must be pairwise distinct")

    delta = [[lab.alpha[row] for lab in labels] for row in range(n)]
    z = integer_nullvector(delta)
    if all(x >= 0 for x in z):
        branch = "nonnegative"
        m = [1] * len(z)
    else:
        branch = "mixed"
        lam = -min(z)
        m = [lam] * len(z)
    l = [x + y for x, y in zip(m, z)]
    d = _apply(delta, m)
    if _apply(delta, l) != d or m == l or min(l) < 0:
        raise CalculusError(f"Witness construction failed for z = {z}")
    if branch == "nonnegative":
        logger.error("Null vector without negative entries for nonzero natural columns")
    return TheoremOneWitness(delta, z, m, l, d, branch)


# ============================================================================
# Orthogonal sets
# ============================================================================


@dataclass
class ConjectureReport:
    size: int
    mu_sum: int
    roots: int
    holds: Optional[bool]
    note: str = "maximality only relative to search bounds"


@dataclass
class CliqueObservation:
    members: List[ComponentLabel]
    conjecture: ConjectureReport
    mu_one_members: int
    within_bound: bool


@dataclass
class OrthogonalityGraph:
    root_system: RootSystem
    nodes: List[ComponentLabel]
    mu: Dict[ComponentLabel, int]
    graph: nx.Graph
    rejected: Dict[ComponentLabel, str] = dc_field(default_factory=dict)
    frontier: List[ComponentLabel] = dc_field(default_factory=list)

    @property
    def partial(self) -> bool:
        return bool(self.frontier)

    def edges(self) -> List[Tuple[ComponentLabel, ComponentLabel]]:
        order = {lab: i for i, lab in enumerate(self.nodes)}
        pairs = [tuple(sorted(e, key=order.get)) for e in self.graph.edges]
        return sorted(pairs, key=lambda e: (order[e[0]], order[e[1]]))


@dataclass
class SearchResult:
    graph: OrthogonalityGraph
    cliques: List[List[ComponentLabel]]
    observations: List[CliqueObservation]

    @property
    def max_clique_size(self) -> int:
        return max((len(c) for c in self.cliques), default=0)

    @property
    def bound_holds(self) -> bool:
        return all(o.within_bound for o in self.observations)


def enumerate_labels(rs: RootSystem, max_label_sum: int,
                     max_dim: Optional[Union[int, Sequence[int]]] = None) -> List[ComponentLabel]:
    if max_dim is None:
        cap = None
    elif isinstance(max_dim, int):
        cap = (max_dim,) * rs.quiver.n
    else:
        cap = tuple(max_dim)
    labels = []
    for total in range(1, max_label_sum + 1):
        for combo in combinations_with_replacement(range(rs.size), total):
            alpha = [0] * rs.size
            for idx in combo:
                alpha[idx] += 1
            label = rs.label(alpha)
            if cap is None or all(x <= c for x, c in zip(label.dim_vector, cap)):
                labels.append(label)
    labels.sort(key=lambda lab: (lab.coordinate_sum, tuple(-x for x in lab.alpha)))
    return labels


def conjecture7_check(clique: Sequence[ComponentLabel], graph: OrthogonalityGraph) -> ConjectureReport:
    size = len(clique)
    mu_sum = sum(graph.mu[c] for c in clique)
    roots = graph.root_system.size
    if len(graph.nodes) <= 1:
        return ConjectureReport(size, mu_sum, roots, None, "single-node frontier, no equality claimed")
    return ConjectureReport(size, mu_sum, roots, size == roots - mu_sum)


def orthogonal_set_search(q: Quiver, max_label_sum: int, ctx: SamplingContext,
                          max_dim: Optional[Union[int, Sequence[int]]] = None,
                          node_budget: int = SEARCH_NODE_BUDGET) -> SearchResult:
    rs = positive_roots(q)
    candidates = enumerate_labels(rs, max_label_sum, max_dim)
    frontier = candidates[node_budget:]
    if frontier:
        logger.warning(
            f"Search over {q.name} truncated at {node_budget} labels, {len(frontier)} left unexplored",
            extra=ctx.provenance(),
        )
    nodes, rejected = [], {}
    for label in candidates[:node_budget]:
        verdict = component_indecomposability(label, ctx).verdict
        if verdict != Verdict.INDECOMPOSABLE:
            rejected[label] = verdict.value
        elif generic_ext(label, label, ctx) != 0:
            rejected[label] = "self-extensions"
        else:
            nodes.append(label)

    graph = nx.Graph()
    graph.add_nodes_from(nodes)
    for i, a in enumerate(nodes):
        for b in nodes[i + 1:]:
            if generic_ext(a, b, ctx) == 0 and generic_ext(b, a, ctx) == 0:
                graph.add_edge(a, b)
    mu = {lab: mu_g(lab, ctx) for lab in nodes}
    ortho = OrthogonalityGraph(rs, nodes, mu, graph, rejected, frontier)

    order = {lab: i for i, lab in enumerate(nodes)}
    cliques = [sorted(c, key=order.get) for c in nx.find_cliques(graph)]
    cliques.sort(key=lambda c: (-len(c), [order[x] for x in c]))

    observations = []
    for clique in cliques:
        within = len(clique) <= rs.size
        if not within:
            logger.error(
                f"Orthogonal set of size {len(clique)} exceeds {rs.size} positive roots",
                extra={"labels": [c.describe() for c in clique]},
            )
        observations.append(CliqueObservation(
            clique, conjecture7_check(clique, ortho), sum(1 for c in clique if mu[c] == 1), within,
        ))
    logger.info(f"Found {len(cliques)} maximal orthogonal sets over {q.name}", extra=ctx.provenance())
    return SearchResult(ortho, cliques, observations)


# ============================================================================
# Rigid modules
# ============================================================================


@dataclass
class RigidSummandReport:
    rigid: bool
    summands: int = 0
    distinct: int = 0
    bound: int = 0
    labels: List[ComponentLabel] = dc_field(default_factory=list)

    @property
    def status(self) -> str:
        return "rigid" if self.rigid else "not rigid"

    @property
    def within_bound(self) -> Optional[bool]:
        return self.distinct <= self.bound if self.rigid else None


def rigid_summand_bound(m: Representation, ctx: SamplingContext) -> RigidSummandReport:
    rs = positive_roots(m.algebra.base)
    if ext1_dim_direct(m, m) != 0:
        return RigidSummandReport(False, bound=rs.size)
    parts = decompose(m, ctx).parts
    distinct = distinct_representatives(parts, ctx)
    labels = []
    if m.algebra.kind == AlgebraKind.PREPROJECTIVE:
        labels = [gabriel_label(forward_part(p), rs, ctx) for p in distinct]
    report = RigidSummandReport(True, len(parts), len(distinct), rs.size, labels)
    if not report.within_bound:
        logger.error(f"Rigid module has {len(distinct)} distinct summands, more than {rs.size}")
    return report
