import pytest

from app.core.field import QQ_FIELD, Field
from app.core.sampling import SamplingContext
from app.services.leclerc import build_fixture
from app.services.quiver import path_algebra, preprojective_relations, quiver_from_type
from app.services.representation import from_rows, simple_module

LARGE_PRIME = 2 ** 31 - 1


@pytest.fixture
def ctx():
    return SamplingContext(QQ_FIELD, 7, 5)


@pytest.fixture
def fp_field():
    return Field.prime(LARGE_PRIME)


@pytest.fixture
def lambda_a2():
    return preprojective_relations(quiver_from_type("A2"))


@pytest.fixture
def kq_a2():
    return path_algebra(quiver_from_type("A2"))


@pytest.fixture
def a2_modules(lambda_a2):
    """S1, S2 and the two 2-dimensional indecomposables B (a=1) and B' (ā=1) over Λ(A2)."""
    return {
        "S1": simple_module(lambda_a2, 1),
        "S2": simple_module(lambda_a2, 2),
        "B": from_rows(lambda_a2, (1, 1), {"a1": [[1]]}),
        "B'": from_rows(lambda_a2, (1, 1), {"abar1": [[1]]}),
    }


@pytest.fixture(scope="session")
def leclerc():
    return build_fixture(2)


@pytest.fixture(scope="session")
def leclerc_family():
    return {lam: build_fixture(lam) for lam in (2, 3, 5)}
