import numpy as np
import pytest

from app.core.linalg import rank
from app.core.sampling import SamplingContext
from app.services.quiver import Arrow, Quiver, dynkin_quiver, euler_form, quiver_from_type
from app.services.representation import act, dim_hom, direct_sum
from app.services.roots import (
    RootSystemError,
    build_M_alpha,
    gabriel_label,
    indec_kq_module,
    parse_interval_sum,
    positive_roots,
)

ROOT_COUNTS = [("A2", 3), ("A3", 6), ("A4", 10), ("A5", 15), ("D4", 12), ("E6", 36)]


@pytest.mark.parametrize("name, count", ROOT_COUNTS)
def test_root_counts(name, count):
    assert positive_roots(quiver_from_type(name)).size == count


@pytest.mark.parametrize("name", ["A3", "D4", "D5", "E6"])
def test_roots_have_euler_form_one(name):
    q = quiver_from_type(name)
    for root in positive_roots(q).roots:
        assert euler_form(q, root, root) == 1


def test_a5_interval_order():
    rs = positive_roots(quiver_from_type("A5"))
    names = [rs.root_name(r) for r in rs.roots]
    assert names == [
        "[1,1]", "[1,2]", "[1,3]", "[1,4]", "[1,5]",
        "[2,2]", "[2,3]", "[2,4]", "[2,5]",
        "[3,3]", "[3,4]", "[3,5]",
        "[4,4]", "[4,5]",
        "[5,5]",
    ]
    assert rs.roots[7] == (0, 1, 1, 1, 0)


def test_labels_and_interval_sums():
    rs = positive_roots(quiver_from_type("A5"))
    alpha = parse_interval_sum(rs, "[1,2]+[2,4]+[3,3]+[4,5]")
    assert alpha.dim_vector == (1, 2, 2, 2, 1)
    assert alpha.describe() == "[1,2]+[2,4]+[3,3]+[4,5]"
    assert parse_interval_sum(rs, "2[3,3]").scaled(2).alpha[9] == 4
    assert rs.zero_label().is_zero
    assert (alpha + alpha).coordinate_sum == 8
    with pytest.raises(RootSystemError):
        parse_interval_sum(rs, "[3,1]")
    with pytest.raises(RootSystemError):
        rs.label([1] * 14)
    with pytest.raises(RootSystemError):
        rs.label([-1] + [0] * 14)


def test_non_dynkin_has_no_root_system():
    with pytest.raises(RootSystemError):
        positive_roots(Quiver(2, (Arrow("a", 2, 1), Arrow("b", 2, 1))))


@pytest.mark.parametrize("name", ["A4", "D4", "D5", "E6"])
def test_indecomposables_are_labelled_by_their_root(name):
    rs = positive_roots(quiver_from_type(name))
    for root in rs.roots:
        m = indec_kq_module(rs, root)
        assert m.dims == root
        assert dim_hom(m, m) == 1
        assert gabriel_label(m, rs) == rs.root_label(root)


def test_reflection_functors_on_another_orientation():
    q = dynkin_quiver("D", 4, [(4, 1), (2, 4), (4, 3)])
    rs = positive_roots(q)
    for root in rs.roots:
        m = indec_kq_module(rs, root)
        assert m.dims == root
        assert dim_hom(m, m) == 1


def test_gabriel_label_survives_base_change():
    ctx = SamplingContext(seed=3)
    rs = positive_roots(quiver_from_type("D4"))
    label = rs.label([1, 0, 2, 0, 0, 0, 1, 0, 0, 0, 0, 1])
    m = build_M_alpha(label)
    rng = np.random.default_rng(5)
    g = {}
    for i in m.quiver.vertices:
        d = m.dim_at(i)
        while True:
            candidate = m.field.random_matrix(rng, (d, d), 4)
            if rank(m.field, candidate) == d:
                g[i] = candidate
                break
    assert gabriel_label(act(g, m), rs, ctx) == label


def test_gabriel_label_is_additive():
    rs = positive_roots(quiver_from_type("A3"))
    a, b = rs.label([1, 0, 0, 0, 1, 0]), rs.label([0, 1, 0, 0, 0, 1])
    assert gabriel_label(direct_sum(build_M_alpha(a), build_M_alpha(b)), rs) == a + b
