from fractions import Fraction
from math import gcd
from functools import reduce

import numpy as np
import pytest
import sympy

from app.core.field import QQ_FIELD, Field, FieldError
from app.core.linalg import (
    LinalgError,
    LinearSystem,
    extend_to_complement,
    integer_nullvector,
    invert,
    is_zero,
    kernel_basis,
    matmul,
    rank,
    row_basis,
    solve,
)
from app.core.polynomials import X, charpoly, coprime_split, evaluate_at, rational_roots

FIELDS = [QQ_FIELD, Field.prime(2 ** 31 - 1)]


@pytest.mark.parametrize("field", FIELDS, ids=lambda f: f.tag)
def test_rank_and_kernel_agree(field):
    rng = np.random.default_rng(3)
    for _ in range(10):
        rows, cols = int(rng.integers(1, 5)), int(rng.integers(1, 6))
        a = field.random_matrix(rng, (rows, cols), 3)
        basis = kernel_basis(field, a)
        assert rank(field, a) + len(basis) == cols
        for v in basis:
            assert all(x == 0 for x in a.dot(v))


def test_rank_of_empty_matrix_is_zero():
    assert rank(QQ_FIELD, QQ_FIELD.zeros((0, 3))) == 0
    assert rank(QQ_FIELD, QQ_FIELD.zeros((2, 0))) == 0


def test_solve_returns_none_on_inconsistent_system():
    a = QQ_FIELD.matrix([[1, 1], [2, 2]])
    assert solve(QQ_FIELD, a, QQ_FIELD.vector([1, 3])) is None
    x = solve(QQ_FIELD, a, QQ_FIELD.vector([1, 2]))
    assert list(a.dot(x)) == [1, 2]


def test_invert_round_trip_and_singular():
    a = QQ_FIELD.matrix([[2, 1], [1, 1]])
    assert is_zero(matmul(QQ_FIELD, a, invert(QQ_FIELD, a)) - QQ_FIELD.eye(2))
    with pytest.raises(LinalgError):
        invert(QQ_FIELD, QQ_FIELD.matrix([[1, 2], [2, 4]]))


def test_matmul_shape_mismatch():
    with pytest.raises(LinalgError):
        matmul(QQ_FIELD, QQ_FIELD.zeros((2, 3)), QQ_FIELD.zeros((2, 3)))


def test_extend_to_complement_skips_dependent_candidates():
    base = row_basis(QQ_FIELD, [QQ_FIELD.vector([1, 0, 0])], 3)
    chosen = extend_to_complement(
        QQ_FIELD, base,
        [QQ_FIELD.vector([2, 0, 0]), QQ_FIELD.vector([0, 1, 0]), QQ_FIELD.vector([1, 1, 0])],
    )
    assert len(chosen) == 1
    assert list(chosen[0]) == [0, 1, 0]


@pytest.mark.parametrize("m", [
    [[1, 2]],
    [[1, 1, 0], [0, 1, 1]],
    [[2, 4, 6], [1, 0, 3]],
    [[1, 0, 1, 0], [0, 1, 0, 1], [1, 1, 1, 1]],
])
def test_integer_nullvector(m):
    z = integer_nullvector(m)
    assert any(z)
    assert all(sum(a * b for a, b in zip(row, z)) == 0 for row in m)
    assert reduce(gcd, (abs(x) for x in z)) == 1


def test_integer_nullvector_trivial_kernel():
    with pytest.raises(LinalgError):
        integer_nullvector([[1, 0], [0, 1]])


def test_linear_system_matches_commutation_equation():
    # X with A·X − X·A = 0 for a single Jordan block: the commutant has dimension 2
    field = QQ_FIELD
    a = field.matrix([[1, 1], [0, 1]])
    system = LinearSystem(field)
    system.add_unknown("x", (2, 2))
    system.add_equation([(1, a, "x", field.eye(2)), (-1, field.eye(2), "x", a)])
    space = system.solution_space()
    assert len(space) == 2
    for vec in space:
        x = system.unpack(vec)["x"]
        assert is_zero(matmul(field, a, x) - matmul(field, x, a))
    assert list(system.pack(system.unpack(space[0]))) == list(space[0])


def test_linear_system_rejects_unregistered_unknown():
    system = LinearSystem(QQ_FIELD)
    with pytest.raises(LinalgError):
        system.add_equation([(1, QQ_FIELD.eye(1), "y", QQ_FIELD.eye(1))])


# ============================================================================
# Fields
# ============================================================================


def test_field_parse_and_tags():
    assert Field.parse("q") == QQ_FIELD
    fp = Field.parse("fp:2147483647")
    assert fp.tag == "fp:2147483647"
    with pytest.raises(FieldError):
        Field.parse("fp:101")
    with pytest.raises(FieldError):
        Field.parse("fp:2147483648")
    with pytest.raises(FieldError):
        Field.parse("reals")


def test_scalar_formats():
    assert QQ_FIELD.parse_scalar("-3/6") == Fraction(-1, 2)
    assert QQ_FIELD.format_scalar(Fraction(4, 2)) == "2"
    fp = Field.prime(2 ** 31 - 1)
    half = fp.parse_scalar("1/2")
    assert fp.format_scalar(half * 2) == f"1 mod {2 ** 31 - 1}"
    with pytest.raises(FieldError):
        QQ_FIELD.parse_scalar("1/0")


# ============================================================================
# Polynomials
# ============================================================================


@pytest.mark.parametrize("field", FIELDS, ids=lambda f: f.tag)
def test_coprime_split_factors_are_coprime(field):
    a = field.matrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 0]])
    p = charpoly(field, a)
    factors = coprime_split(field, p)
    assert len(factors) == 3
    for i, f in enumerate(factors):
        for g in factors[i + 1:]:
            assert f.gcd(g).degree() == 0
    product = factors[0]
    for f in factors[1:]:
        product = product * f
    assert product == p.monic()


def test_coprime_split_keeps_irreducible_part_whole():
    # x^2 + 1 has no rational roots
    a = QQ_FIELD.matrix([[0, -1], [1, 0]])
    factors = coprime_split(QQ_FIELD, charpoly(QQ_FIELD, a))
    assert len(factors) == 1
    assert factors[0].as_expr() == X ** 2 + 1


def test_rational_roots_and_evaluation():
    a = QQ_FIELD.matrix([[3, 0], [0, Fraction(1, 2)]])
    p = charpoly(QQ_FIELD, a)
    assert rational_roots(QQ_FIELD, p) == [Fraction(1, 2), Fraction(3)]
    assert is_zero(evaluate_at(QQ_FIELD, p, a))
    assert p.as_expr() == sympy.expand((X - 3) * (X - sympy.Rational(1, 2)))
