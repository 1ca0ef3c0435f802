"""The family M_λ over the preprojective algebra of type A5 and the checks around it.

All modules use the vertex bases v1:{1}, v2:{2,3}, v3:{4,5}, v4:{6,7}, v5:{8}
with arrows a_i: i+1 -> i and their reversals.
"""

import logging
from dataclasses import dataclass, field as dc_field
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np

from app.core.field import Field, QQ_FIELD
from app.core.sampling import SamplingContext
from app.services.calculus import canonical_decomposition, direct_sum_is_component
from app.services.components import component_dim, mu_g
from app.services.endomorphisms import is_indecomposable, is_isomorphic
from app.services.ext import ext1_dim_cb, ext1_dim_direct, is_projective, self_extension_census
from app.services.quiver import dynkin_quiver, gl_dim, preprojective_relations
from app.services.representation import (
    Representation,
    check_relations,
    dim_hom,
    direct_sum,
    forward_part,
    from_rows,
    orbit_dim,
)
from app.services.roots import ComponentLabel, RootSystem, gabriel_label, positive_roots

logger = logging.getLogger(__name__)

ALPHA = (0, 1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0)
BETA = (0, 1, 0, 1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0)
BETA_1 = (0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1, 0)
BETA_2 = (0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0)
DIMS = (1, 2, 2, 2, 1)
DEFAULT_LAMBDAS = (2, 3, 5)

P2_ROWS = {
    "a1": [[1], [0]],
    "abar1": [[0, 1]],
    "a2": [[0, 1], [0, 0]],
    "abar2": [[1, 0], [0, 1]],
    "a3": [[0, 1], [0, 0]],
    "abar3": [[1, 0], [0, 1]],
    "a4": [[0, 1]],
    "abar4": [[1], [0]],
}

P4_ROWS = {
    "a1": [[1], [0]],
    "abar1": [[0, 1]],
    "a2": [[1, 0], [0, 1]],
    "abar2": [[0, 1], [0, 0]],
    "a3": [[1, 0], [0, 1]],
    "abar3": [[0, 1], [0, 0]],
    "a4": [[0, 1]],
    "abar4": [[1], [0]],
}


class FixtureError(Exception):
    pass


def _m_lambda_rows(lam) -> Dict[str, List[List[Any]]]:
    return {
        "a1": [[1], [0]],
        "abar1": [[0, 1]],
        "a2": [[0, 1], [0, 0]],
        "abar2": [[1, lam], [0, 0]],
        "a3": [[1, 1], [0, 0]],
        "abar3": [[0, 0], [0, 1]],
        "a4": [[0, 1]],
        "abar4": [[1], [0]],
    }


@dataclass
class LeclercFixture:
    lam: Any
    root_system: RootSystem
    m_lambda: Representation
    p2: Representation
    p4: Representation
    alpha: ComponentLabel
    beta: ComponentLabel
    beta1: ComponentLabel
    beta2: ComponentLabel

    @property
    def field(self) -> Field:
        return self.m_lambda.field

    def deformation_class(self) -> Dict[str, np.ndarray]:
        """d/dλ of the family M_λ, a self-extension class of M_λ."""
        field = self.field
        out = {b: field.zeros(m.shape) for b, m in self.m_lambda.mats.items()}
        out["abar2"] = field.matrix([[0, 1], [0, 0]])
        return out


def build_fixture(lam: Any, field: Field = QQ_FIELD) -> LeclercFixture:
    value = field.convert(lam)
    if value == 0 or value == 1:
        raise FixtureError(f"λ must avoid 0 and 1, got {field.format_scalar(value)}")
    q = dynkin_quiver("A", 5)
    algebra = preprojective_relations(q)
    rs = positive_roots(q)
    fixture = LeclercFixture(
        lam=value,
        root_system=rs,
        m_lambda=from_rows(algebra, DIMS, _m_lambda_rows(value), field),
        p2=from_rows(algebra, DIMS, P2_ROWS, field),
        p4=from_rows(algebra, DIMS, P4_ROWS, field),
        alpha=rs.label(ALPHA),
        beta=rs.label(BETA),
        beta1=rs.label(BETA_1),
        beta2=rs.label(BETA_2),
    )
    for name in ("m_lambda", "p2", "p4"):
        if not check_relations(getattr(fixture, name)):
            raise FixtureError(f"Fixture module {name} violates the preprojective relations")
    return fixture


# ============================================================================
# Verification suite
# ============================================================================


@dataclass
class CheckResult:
    check: str
    expect: Any
    got: Any
    passed: bool
    detail: Dict[str, Any] = dc_field(default_factory=dict)


@dataclass
class SuiteReport:
    checks: List[CheckResult]
    provenance: Dict[str, object]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]


class PropositionVerifier:
    def __init__(self, ctx: SamplingContext, lambdas: Sequence[Any] = DEFAULT_LAMBDAS):
        self.ctx = ctx
        self.fixtures = [build_fixture(lam, ctx.field) for lam in lambdas]
        self.checks: List[CheckResult] = []

    def record(self, check: str, expect: Any, got: Any, **detail) -> None:
        passed = expect == got
        self.checks.append(CheckResult(check, expect, got, passed, detail))
        if not passed:
            logger.error(f"Check {check} failed: expected {expect}, got {got}", extra={"check": check})

    def _tag(self, fx: LeclercFixture) -> str:
        return f"[λ={self.ctx.field.format_scalar(fx.lam)}]"

    def run(self) -> SuiteReport:
        self.check_endomorphisms()
        self.check_dimensions()
        self.check_self_extensions()
        self.check_cross_extensions()
        self.check_labels()
        self.check_projectives()
        self.check_parameters()
        self.check_canonical_decomposition()
        self.check_sum_component()
        self.check_census()
        return SuiteReport(self.checks, self.ctx.provenance())

    def check_endomorphisms(self) -> None:
        for fx in self.fixtures:
            self.record(f"end_dim{self._tag(fx)}", 3, dim_hom(fx.m_lambda, fx.m_lambda))
            self.record(f"indecomposable{self._tag(fx)}", True, is_indecomposable(fx.m_lambda, self.ctx))
            self.record(f"orbit_dim{self._tag(fx)}", 11, orbit_dim(fx.m_lambda))

    def check_dimensions(self) -> None:
        fx = self.fixtures[0]
        self.record("component_dim", 12, component_dim(fx.alpha))
        self.record("gl_dim", 14, gl_dim(fx.alpha.dim_vector))

    def check_self_extensions(self) -> None:
        for fx in self.fixtures:
            self.record(f"ext_self_direct{self._tag(fx)}", 2, ext1_dim_direct(fx.m_lambda, fx.m_lambda))
            self.record(f"ext_self_cb{self._tag(fx)}", 2, ext1_dim_cb(fx.m_lambda, fx.m_lambda))

    def check_cross_extensions(self) -> None:
        for i, fx in enumerate(self.fixtures):
            for other in self.fixtures[i + 1:]:
                tag = f"[λ={self.ctx.field.format_scalar(fx.lam)},μ={self.ctx.field.format_scalar(other.lam)}]"
                self.record(f"ext_cross{tag}", 0, ext1_dim_direct(fx.m_lambda, other.m_lambda))
                self.record(f"ext_cross_reverse{tag}", 0, ext1_dim_direct(other.m_lambda, fx.m_lambda))
                self.record(f"nonisomorphic{tag}", False, is_isomorphic(fx.m_lambda, other.m_lambda, self.ctx))

    def check_labels(self) -> None:
        for fx in self.fixtures:
            label = gabriel_label(forward_part(fx.m_lambda), fx.root_system, self.ctx)
            self.record(f"label_M{self._tag(fx)}", list(ALPHA), list(label.alpha))
        fx = self.fixtures[0]
        for name, module, expected in (("P2", fx.p2, BETA_1), ("P4", fx.p4, BETA_2)):
            label = gabriel_label(forward_part(module), fx.root_system, self.ctx)
            self.record(f"label_{name}", list(expected), list(label.alpha))

    def check_projectives(self) -> None:
        fx = self.fixtures[0]
        self.record("projective_P2", True, is_projective(fx.p2))
        self.record("projective_P4", True, is_projective(fx.p4))
        for a_name, a in (("P2", fx.p2), ("P4", fx.p4)):
            for b_name, b in (("P2", fx.p2), ("P4", fx.p4)):
                self.record(f"ext_{a_name}_{b_name}", 0, ext1_dim_direct(a, b))

    def check_parameters(self) -> None:
        fx = self.fixtures[0]
        self.record("mu_alpha", 1, mu_g(fx.alpha, self.ctx))
        self.record("mu_beta1", 0, mu_g(fx.beta1, self.ctx))
        self.record("mu_beta2", 0, mu_g(fx.beta2, self.ctx))

    def check_canonical_decomposition(self) -> None:
        fx = self.fixtures[0]
        result = canonical_decomposition(fx.beta, self.ctx)
        got = sorted(list(p.alpha) for p in result.parts) if result.determined else result.status
        excluded = [e.index for e in result.evidence if e.excluded]
        self.record("canonical_beta", sorted([list(BETA_1), list(BETA_2)]), got, excluded_samples=excluded)

    def check_sum_component(self) -> None:
        fx = self.fixtures[0]
        total = direct_sum_is_component(fx.alpha, fx.alpha, self.ctx)
        self.record("sum_alpha_alpha", list(fx.alpha.scaled(2).alpha), list(total.alpha) if total else None)

    def check_census(self) -> None:
        fx = self.fixtures[0]
        target = direct_sum(fx.p2, fx.p4)
        report = self_extension_census(
            fx.m_lambda, self.ctx, fx.root_system, probes={"deformation": fx.deformation_class()},
        )
        has_projective = report.contains(target, self.ctx)
        has_indecomposable = any(e.indecomposable and e.middle.dims == (2, 4, 4, 4, 2) for e in report.entries)
        self.record(f"census_projective{self._tag(fx)}", True, has_projective, types=len(report.types))
        self.record(f"census_indecomposable{self._tag(fx)}", True, has_indecomposable, types=len(report.types))


def verify_proposition(ctx: SamplingContext, lambdas: Iterable[Any] = DEFAULT_LAMBDAS) -> SuiteReport:
    return PropositionVerifier(ctx, list(lambdas)).run()


def leclerc_metadata() -> Dict[str, Any]:
    """Inert record of the quantum identity attached to the example; nothing here is computed."""
    return {
        "identity": "b*(C_alpha)^2 = v^-2 (b*(C_{alpha+alpha}) + b*(C_beta))",
        "labels": {
            "alpha": list(ALPHA),
            "2alpha": [2 * x for x in ALPHA],
            "beta": list(BETA),
        },
        "coefficient": "v^-2",
        "counterexample": True,
        "counterexample_to": "squares of quasi-commuting dual canonical basis elements stay in v^Z times the basis",
        "note": "quantum side is recorded only; no computation is attached",
    }
