import numpy as np
import pytest

from app.core.field import QQ_FIELD
from app.core.sampling import SamplingContext
from app.services.components import (
    ComponentError,
    component_dim,
    component_indecomposability,
    expected_fiber_dim,
    fiber_basis,
    generic_end_dim,
    mu_g,
    sample_component_point,
)
from app.services.endomorphisms import Verdict
from app.services.quiver import path_algebra, quiver_from_type
from app.services.representation import (
    Representation,
    check_relations,
    dim_hom,
    direct_sum,
    forward_part,
    simple_module,
)
from app.services.roots import gabriel_label, indec_kq_module, positive_roots

FIBER_TYPES = ["A2", "A3", "A4", "A5", "D4"]


def _random_forward_module(q, rng, field, max_dim=2):
    algebra = path_algebra(q)
    dims = tuple(int(x) for x in rng.integers(0, max_dim + 1, q.n))
    mats = {}
    for a in q.arrows:
        shape = (dims[a.s - 1], dims[a.e - 1])
        # sparse entries keep the sample away from generic points
        dense = field.random_matrix(rng, shape, 2)
        mask = rng.integers(0, 3, shape) == 0
        for idx in np.ndindex(shape):
            if mask[idx]:
                dense[idx] = field.zero
        mats[a.id] = dense
    return Representation(algebra, field, dims, mats)


def test_fiber_of_a_single_root_is_trivial():
    rs = positive_roots(quiver_from_type("A5"))
    mf = indec_kq_module(rs, (1, 1, 0, 0, 0))
    assert fiber_basis(mf).dim == 0
    assert expected_fiber_dim(mf) == 0


def test_fiber_over_semisimple_a2():
    kq = path_algebra(quiver_from_type("A2"))
    mf = direct_sum(simple_module(kq, 1), simple_module(kq, 2))
    fiber = fiber_basis(mf)
    assert fiber.dim == 1
    point = fiber.point([3])
    assert point["abar1"][0, 0] == 3


def test_fiber_needs_a_forward_module(leclerc):
    with pytest.raises(ComponentError):
        fiber_basis(leclerc.m_lambda)


@pytest.mark.parametrize("name", FIBER_TYPES)
def test_fiber_dimension_law(name):
    q = quiver_from_type(name)
    rng = np.random.default_rng(len(name) * 17 + q.n)
    field = QQ_FIELD
    for _ in range(10):
        mf = _random_forward_module(q, rng, field)
        assert fiber_basis(mf).dim == expected_fiber_dim(mf)


@pytest.mark.slow
@pytest.mark.parametrize("name", FIBER_TYPES)
def test_fiber_dimension_law_many(name):
    q = quiver_from_type(name)
    rng = np.random.default_rng(1000 + q.n)
    field = QQ_FIELD
    for _ in range(50):
        mf = _random_forward_module(q, rng, field, max_dim=3)
        assert fiber_basis(mf).dim == expected_fiber_dim(mf)


def test_component_dimensions(leclerc):
    assert component_dim(leclerc.alpha) == 12
    assert component_dim(leclerc.beta) == 48


def test_sampled_point_lies_on_the_component(leclerc, ctx):
    sample = sample_component_point(leclerc.alpha, ctx)
    m = sample.module
    assert check_relations(m)
    assert m.dims == (1, 2, 2, 2, 1)
    assert gabriel_label(forward_part(m), leclerc.root_system, ctx) == leclerc.alpha
    assert dim_hom(m, m) == 3
    assert (sample.seed, sample.index) == (ctx.seed, 0)


def test_sampling_is_reproducible(leclerc):
    first = sample_component_point(leclerc.beta, SamplingContext(seed=11), 2).module
    second = sample_component_point(leclerc.beta, SamplingContext(seed=11), 2).module
    assert all((first.mats[b] == second.mats[b]).all() for b in first.quiver.arrow_ids)


def test_generic_parameters(leclerc, ctx):
    assert mu_g(leclerc.alpha, ctx) == 1
    assert mu_g(leclerc.beta1, ctx) == 0
    assert mu_g(leclerc.beta2, ctx) == 0
    assert generic_end_dim(leclerc.alpha, ctx) == 3


def test_component_indecomposability(leclerc, ctx):
    assert component_indecomposability(leclerc.alpha, ctx).verdict == Verdict.INDECOMPOSABLE
    assert component_indecomposability(leclerc.beta, ctx).verdict == Verdict.DECOMPOSABLE
    with pytest.raises(ComponentError):
        component_indecomposability(leclerc.root_system.zero_label(), ctx)
