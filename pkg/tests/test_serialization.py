import json

import pytest

from app.core.field import QQ_FIELD, Field
from app.schemas.label import LabelSetSchema
from app.services.quiver import quiver_from_type
from app.services.representation import simple_module
from app.services.roots import positive_roots
from app.services.serialization import (
    SerializationError,
    dumps,
    label_to_schema,
    labels_from_set,
    load_module,
    module_from_schema,
    module_to_schema,
    parse_label,
)


def _write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload), encoding="utf-8")
    return str(path)


def test_module_file_round_trip(tmp_path, leclerc):
    text = dumps(module_to_schema(leclerc.m_lambda))
    raw = json.loads(text)
    assert raw["format"] == 1
    assert raw["field"] == "Q"
    assert raw["algebra"]["quiver"]["type"] == "A5"
    assert raw["mats"]["abar2"] == [["1", "2"], ["0", "0"]]
    m = load_module(_write(tmp_path, "m.json", text))
    assert m.dims == leclerc.m_lambda.dims
    assert all((m.mats[b] == leclerc.m_lambda.mats[b]).all() for b in m.quiver.arrow_ids)


def test_empty_matrices_carry_their_shape(lambda_a2):
    raw = module_to_schema(simple_module(lambda_a2, 1)).model_dump(mode="json")
    assert raw["mats"]["a1"] == {"shape": [0, 1], "rows": []}
    m = module_from_schema(module_to_schema(simple_module(lambda_a2, 1)))
    assert m.mats["a1"].shape == (0, 1)


def test_hand_written_module(tmp_path):
    payload = {
        "format": 1,
        "algebra": {
            "quiver": {"type": "A2", "vertices": 2, "arrows": [{"id": "a1", "s": 2, "e": 1}]},
            "kind": "preprojective",
        },
        "field": "Q",
        "dims": [1, 1],
        "mats": {"a1": [["1/2"]], "abar1": [[0]]},
    }
    m = load_module(_write(tmp_path, "b.json", payload))
    assert str(m.mats["a1"][0, 0]) == "1/2"


@pytest.mark.parametrize("mutate, message", [
    (lambda p: p.update(format=2), "unsupported format"),
    (lambda p: p["mats"].pop("abar1"), "mats.abar1: missing"),
    (lambda p: p["mats"].update(a1=[["1", "2"]]), "mats.a1"),
    (lambda p: p["mats"].update(zz=[["1"]]), "unknown arrows"),
    (lambda p: p.update(dims=[1]), "dims"),
    (lambda p: p["algebra"]["quiver"]["arrows"][0].update(s=1, e=1), "orient"),
    (lambda p: p.update(field="fp:7"), "field"),
    (lambda p: p.pop("mats"), "mats"),
    (lambda p: p["mats"].update(a1=[["x"]]), "Malformed scalar"),
    (lambda p: p["mats"].update(a1=[["1"]], abar1=[["1"]]), "relations"),
])
def test_malformed_modules_report_a_location(tmp_path, mutate, message):
    payload = {
        "format": 1,
        "algebra": {
            "quiver": {"type": "A2", "vertices": 2, "arrows": [{"id": "a1", "s": 2, "e": 1}]},
            "kind": "preprojective",
        },
        "field": "Q",
        "dims": [1, 1],
        "mats": {"a1": [["1"]], "abar1": [["0"]]},
    }
    mutate(payload)
    with pytest.raises(SerializationError, match=message):
        load_module(_write(tmp_path, "bad.json", payload))


def test_bad_json_and_missing_files(tmp_path):
    with pytest.raises(SerializationError, match="invalid JSON"):
        load_module(_write(tmp_path, "broken.json", "{"))
    with pytest.raises(SerializationError, match="not found"):
        load_module(str(tmp_path / "absent.json"))


def test_field_mismatch(tmp_path, lambda_a2):
    path = _write(tmp_path, "s.json", dumps(module_to_schema(simple_module(lambda_a2, 1))))
    with pytest.raises(SerializationError, match="field"):
        load_module(path, Field.prime(2 ** 31 - 1))
    assert load_module(path, QQ_FIELD).dims == (1, 0)


def test_prime_field_scalars_round_trip(tmp_path, lambda_a2, fp_field):
    m = simple_module(lambda_a2, 2, fp_field)
    loaded = load_module(_write(tmp_path, "p.json", dumps(module_to_schema(m))), fp_field)
    assert loaded.field == fp_field


def test_label_parsing(tmp_path):
    rs = positive_roots(quiver_from_type("A5"))
    alpha = parse_label("[1,2]+[2,4]+[3,3]+[4,5]", rs)
    assert parse_label(",".join(str(x) for x in alpha.alpha), rs) == alpha
    path = _write(tmp_path, "alpha.json", dumps(label_to_schema(alpha)))
    assert parse_label(path, rs) == alpha
    with pytest.raises(SerializationError):
        parse_label("1,2", rs)
    with pytest.raises(SerializationError):
        parse_label("[6,6]", rs)


def test_label_sets():
    rs = positive_roots(quiver_from_type("A2"))
    schema = LabelSetSchema(type="A2", labels=[[1, 0, 0], [0, 1, 0]])
    assert [lab.alpha for lab in labels_from_set(schema, rs)] == [(1, 0, 0), (0, 1, 0)]
    with pytest.raises(SerializationError):
        labels_from_set(LabelSetSchema(type="A2", labels=[[1, 0]]), rs)
