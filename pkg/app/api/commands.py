import logging
from argparse import Namespace
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

from pydantic import BaseModel

from app.core.sampling import SamplingContext
from app.schemas.quiver import RelationSchema
from app.schemas.report import (
    CanonicalEvidenceRow,
    CanonicalReport,
    CensusReportSchema,
    CensusRow,
    CheckRow,
    CliqueRow,
    ComponentValueReport,
    DecomposeReport,
    ExtReport,
    HomReport,
    LabelReport,
    MetadataReport,
    NodeRow,
    Provenance,
    RelationsReport,
    RigidReport,
    RootRow,
    RootsReport,
    SearchReport,
    SumComponentReport,
    SuiteReportSchema,
    SummandRow,
    WitnessReport,
)
from app.services.calculus import (
    canonical_decomposition,
    direct_sum_is_component,
    orthogonal_set_search,
    rigid_summand_bound,
    theorem1_witness,
)
from app.services.components import mu_g, sample_component_point
from app.services.endomorphisms import decompose
from app.services.ext import ext1_dim_cb, ext1_dim_direct, generic_ext, self_extension_census
from app.services.leclerc import leclerc_metadata, verify_proposition
from app.services.quiver import AlgebraKind, Quiver, is_dynkin, preprojective_relations, quiver_from_type
from app.services.representation import Representation, dim_hom, forward_part
from app.services.roots import RootSystem, gabriel_label, positive_roots
from app.services.serialization import (
    labels_from_set,
    load_label_set,
    load_module,
    parse_label,
    relation_to_schema,
    sample_to_schema,
)

logger = logging.getLogger(__name__)


@dataclass
class CommandResult:
    report: BaseModel
    ok: bool = True


Handler = Callable[[Namespace, SamplingContext], CommandResult]


class CommandRouter:
    def __init__(self):
        self.handlers: Dict[str, Handler] = {}

    def command(self, name: str) -> Callable[[Handler], Handler]:
        def register(fn: Handler) -> Handler:
            self.handlers[name] = fn
            return fn
        return register

    def dispatch(self, name: str, args: Namespace, ctx: SamplingContext) -> CommandResult:
        if name not in self.handlers:
            raise KeyError(f"Unknown command {name!r}")
        logger.info(f"Running {name}", extra=ctx.provenance())
        return self.handlers[name](args, ctx)


router = CommandRouter()


def _provenance(ctx: SamplingContext) -> Provenance:
    return Provenance(**ctx.provenance())


def _type_and_roots(name: str) -> Tuple[Quiver, RootSystem]:
    q = quiver_from_type(name)
    return q, positive_roots(q)


def _module_label(m: Representation, ctx: SamplingContext) -> Tuple[List[int], str]:
    rs = positive_roots(m.algebra.base)
    part = m if m.algebra.kind == AlgebraKind.PATH else forward_part(m)
    label = gabriel_label(part, rs, ctx)
    return list(label.alpha), label.describe()


# ============================================================================
# Quivers and roots
# ============================================================================


@router.command("roots")
def roots_command(args: Namespace, ctx: SamplingContext) -> CommandResult:
    q, rs = _type_and_roots(args.type)
    rows = [RootRow(index=i + 1, name=rs.root_name(r), dims=list(r)) for i, r in enumerate(rs.roots)]
    return CommandResult(RootsReport(type=q.name, count=rs.size, roots=rows, provenance=_provenance(ctx)))


@router.command("relations")
def relations_command(args: Namespace, ctx: SamplingContext) -> CommandResult:
    q = quiver_from_type(args.type)
    algebra = preprojective_relations(q)
    relations: List[RelationSchema] = [relation_to_schema(r) for r in algebra.relations]
    return CommandResult(RelationsReport(type=q.name, relations=relations, provenance=_provenance(ctx)))


# ============================================================================
# Modules
# ============================================================================


@router.command("hom")
def hom_command(args: Namespace, ctx: SamplingContext) -> CommandResult:
    m, n = load_module(args.a, ctx.field), load_module(args.b, ctx.field)
    return CommandResult(HomReport(field=ctx.field.tag, dim=dim_hom(m, n), provenance=_provenance(ctx)))


@router.command("ext")
def ext_command(args: Namespace, ctx: SamplingContext) -> CommandResult:
    m, n = load_module(args.a, ctx.field), load_module(args.b, ctx.field)
    direct = ext1_dim_direct(m, n)
    cb = None
    if m.algebra.kind == AlgebraKind.PREPROJECTIVE and is_dynkin(m.algebra.base):
        cb = ext1_dim_cb(m, n)
    agree = None if cb is None else cb == direct
    report = ExtReport(field=ctx.field.tag, direct=direct, cb=cb, agree=agree, provenance=_provenance(ctx))
    return CommandResult(report, agree is not False)


@router.command("decompose")
def decompose_command(args: Namespace, ctx: SamplingContext) -> CommandResult:
    m = load_module(args.a, ctx.field)
    result = decompose(m, ctx)
    labelled = is_dynkin(m.algebra.base)
    rows = []
    for part in result.parts:
        alpha, name = _module_label(part, ctx) if labelled else (None, None)
        rows.append(SummandRow(dims=list(part.dims), label=alpha, name=name))
    return CommandResult(DecomposeReport(summands=rows, certified=result.certified, provenance=_provenance(ctx)))


@router.command("label")
def label_command(args: Namespace, ctx: SamplingContext) -> CommandResult:
    m = load_module(args.a, ctx.field)
    alpha, name = _module_label(m, ctx)
    return CommandResult(LabelReport(type=m.algebra.base.name, alpha=alpha, name=name, provenance=_provenance(ctx)))


@router.command("census")
def census_command(args: Namespace, ctx: SamplingContext) -> CommandResult:
    m = load_module(args.a, ctx.field)
    rs = positive_roots(m.algebra.base) if is_dynkin(m.algebra.base) else None
    report = self_extension_census(m, ctx, rs)
    rows = [
        CensusRow(
            class_=[ctx.field.format_scalar(c) for c in entry.coefficients],
            source=entry.source,
            dims=list(entry.middle.dims),
            summand_dims=[list(d) for d in entry.part_dims],
            summand_labels=[list(lab.alpha) for lab in entry.labels],
            indecomposable=entry.indecomposable,
        )
        for entry in report.entries
    ]
    return CommandResult(CensusReportSchema(
        ext_dim=report.ext_dim, entries=rows, types=report.types, provenance=_provenance(ctx),
    ))


@router.command("rigid")
def rigid_command(args: Namespace, ctx: SamplingContext) -> CommandResult:
    m = load_module(args.a, ctx.field)
    report = rigid_summand_bound(m, ctx)
    return CommandResult(
        RigidReport(
            status=report.status,
            summands=report.summands,
            distinct=report.distinct,
            bound=report.bound,
            within_bound=report.within_bound,
            labels=[list(lab.alpha) for lab in report.labels],
            provenance=_provenance(ctx),
        ),
        report.within_bound is not False,
    )


# ============================================================================
# Components
# ============================================================================


@router.command("sample")
def sample_command(args: Namespace, ctx: SamplingContext) -> CommandResult:
    _, rs = _type_and_roots(args.type)
    sample = sample_component_point(parse_label(args.alpha, rs), ctx, args.index)
    return CommandResult(sample_to_schema(sample, ctx.provenance()))


@router.command("component-ext")
def component_ext_command(args: Namespace, ctx: SamplingContext) -> CommandResult:
    q, rs = _type_and_roots(args.type)
    a, b = parse_label(args.alpha, rs), parse_label(args.beta, rs)
    return CommandResult(ComponentValueReport(
        type=q.name, quantity="ext", labels=[list(a.alpha), list(b.alpha)],
        value=generic_ext(a, b, ctx), provenance=_provenance(ctx),
    ))


@router.command("mu")
def mu_command(args: Namespace, ctx: SamplingContext) -> CommandResult:
    q, rs = _type_and_roots(args.type)
    a = parse_label(args.alpha, rs)
    return CommandResult(ComponentValueReport(
        type=q.name, quantity="mu_g", labels=[list(a.alpha)], value=mu_g(a, ctx), provenance=_provenance(ctx),
    ))


@router.command("sum-component")
def sum_component_command(args: Namespace, ctx: SamplingContext) -> CommandResult:
    q, rs = _type_and_roots(args.type)
    a, b = parse_label(args.alpha, rs), parse_label(args.beta, rs)
    total = direct_sum_is_component(a, b, ctx)
    return CommandResult(SumComponentReport(
        type=q.name, a=list(a.alpha), b=list(b.alpha),
        sum=list(total.alpha) if total else None, provenance=_provenance(ctx),
    ))


@router.command("canonical")
def canonical_command(args: Namespace, ctx: SamplingContext) -> CommandResult:
    q, rs = _type_and_roots(args.type)
    result = canonical_decomposition(parse_label(args.alpha, rs), ctx)
    return CommandResult(
        CanonicalReport(
            type=q.name,
            alpha=list(result.label.alpha),
            status=result.status,
            parts=[list(p.alpha) for p in result.parts],
            names=[p.describe() for p in result.parts],
            evidence=[
                CanonicalEvidenceRow(
                    index=e.index, end_dim=e.end_dim, parts=[list(p) for p in e.parts],
                    sums_to_label=e.sums_to_label, excluded=e.excluded,
                )
                for e in result.evidence
            ],
            provenance=_provenance(ctx),
        ),
        result.determined,
    )


@router.command("search")
def search_command(args: Namespace, ctx: SamplingContext) -> CommandResult:
    q = quiver_from_type(args.type)
    result = orthogonal_set_search(q, args.max_sum, ctx, args.max_dim)
    graph = result.graph
    cliques = [
        CliqueRow(
            members=[c.describe() for c in obs.members],
            size=len(obs.members),
            mu_sum=obs.conjecture.mu_sum,
            roots=obs.conjecture.roots,
            conjecture_holds=obs.conjecture.holds,
            mu_one_members=obs.mu_one_members,
            within_bound=obs.within_bound,
            note=obs.conjecture.note,
        )
        for obs in result.observations
    ]
    report = SearchReport(
        type=q.name,
        max_label_sum=args.max_sum,
        nodes=[NodeRow(alpha=list(n.alpha), name=n.describe(), mu=graph.mu[n]) for n in graph.nodes],
        edges=[[a.describe(), b.describe()] for a, b in graph.edges()],
        rejected={lab.describe(): reason for lab, reason in graph.rejected.items()},
        cliques=cliques,
        max_clique_size=result.max_clique_size,
        bound_holds=result.bound_holds,
        partial=graph.partial,
        frontier=[lab.describe() for lab in graph.frontier],
        provenance=_provenance(ctx),
    )
    return CommandResult(report, result.bound_holds)


@router.command("theorem1")
def theorem1_command(args: Namespace, ctx: SamplingContext) -> CommandResult:
    schema = load_label_set(args.labels)
    _, rs = _type_and_roots(schema.type)
    witness = theorem1_witness(labels_from_set(schema, rs))
    return CommandResult(WitnessReport(
        delta=witness.delta, z=witness.z, m=witness.m, l=witness.l, d=witness.d, branch=witness.branch,
        provenance=_provenance(ctx),
    ))


# ============================================================================
# The A5 example
# ============================================================================


def _plain(value):
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    return str(value)


@router.command("verify-leclerc")
def verify_leclerc_command(args: Namespace, ctx: SamplingContext) -> CommandResult:
    report = verify_proposition(ctx, args.lambdas)
    rows = [
        CheckRow(check=c.check, expect=_plain(c.expect), got=_plain(c.got), passed=c.passed,
                 detail={k: _plain(v) for k, v in c.detail.items()})
        for c in report.checks
    ]
    return CommandResult(
        SuiteReportSchema(passed=report.passed, checks=rows, provenance=_provenance(ctx)),
        report.passed,
    )


@router.command("metadata")
def metadata_command(args: Namespace, ctx: SamplingContext) -> CommandResult:
    return CommandResult(MetadataReport(record=leclerc_metadata(), provenance=_provenance(ctx)))
