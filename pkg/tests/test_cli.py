import json
import logging
import sys

import pytest
from pydantic import ValidationError

from app.api import commands
from app.main import EXIT_FAILED_CHECK, EXIT_OK, EXIT_USAGE, RunConfig, run
from app.services.endomorphisms import DecompositionError
from app.services.leclerc import CheckResult, SuiteReport
from app.services.representation import direct_sum
from app.services.serialization import dumps, module_to_schema


@pytest.fixture
def m2_file(tmp_path, leclerc):
    path = tmp_path / "m2.json"
    path.write_text(dumps(module_to_schema(leclerc.m_lambda)), encoding="utf-8")
    return str(path)


def _run_json(capsys, argv):
    code = run(argv)
    return code, json.loads(capsys.readouterr().out)


def test_roots(capsys):
    code, report = _run_json(capsys, ["roots", "A5"])
    assert code == EXIT_OK
    assert report["count"] == 15
    assert report["roots"][0] == {"index": 1, "name": "[1,1]", "dims": [1, 0, 0, 0, 0]}
    assert report["format"] == 1


def test_relations(capsys):
    code, report = _run_json(capsys, ["relations", "A3"])
    assert code == EXIT_OK
    assert [r["s"] for r in report["relations"]] == [1, 2, 3]


def test_ext_on_m2(capsys, m2_file):
    code, report = _run_json(capsys, ["ext", m2_file, m2_file])
    assert code == EXIT_OK
    assert (report["direct"], report["cb"], report["agree"]) == (2, 2, True)


def test_hom_and_label(capsys, m2_file):
    assert _run_json(capsys, ["hom", m2_file, m2_file])[1]["dim"] == 3
    code, report = _run_json(capsys, ["label", m2_file])
    assert code == EXIT_OK
    assert report["name"] == "[1,2]+[2,4]+[3,3]+[4,5]"
    assert report["provenance"] == {"seed": 7, "samples": 5, "field": "Q"}


def test_decompose_and_rigid(capsys, tmp_path, leclerc):
    path = tmp_path / "p.json"
    path.write_text(dumps(module_to_schema(direct_sum(leclerc.p2, leclerc.p4))), encoding="utf-8")
    code, report = _run_json(capsys, ["decompose", str(path)])
    assert code == EXIT_OK
    assert len(report["summands"]) == 2
    code, report = _run_json(capsys, ["rigid", str(path)])
    assert code == EXIT_OK
    assert (report["status"], report["distinct"], report["bound"]) == ("rigid", 2, 15)


def test_component_commands(capsys):
    alpha = "[1,2]+[2,4]+[3,3]+[4,5]"
    code, report = _run_json(capsys, ["mu", "A5", alpha])
    assert (code, report["value"]) == (EXIT_OK, 1)
    code, report = _run_json(capsys, ["component-ext", "A5", alpha, alpha])
    assert (code, report["value"]) == (EXIT_OK, 0)
    code, report = _run_json(capsys, ["sum-component", "A2", "[1,1]", "[2,2]"])
    assert (code, report["sum"]) == (EXIT_OK, None)
    code, report = _run_json(capsys, ["sample", "A5", alpha, "--index", "2"])
    assert code == EXIT_OK
    assert report["dims"] == [1, 2, 2, 2, 1]
    assert (report["seed"], report["index"]) == (7, 2)


def test_search_a2(capsys):
    code, report = _run_json(capsys, ["search", "A2", "--max-sum", "2"])
    assert code == EXIT_OK
    assert report["max_clique_size"] == 3
    assert report["bound_holds"]
    assert all(c["conjecture_holds"] for c in report["cliques"])


def test_theorem1(capsys, tmp_path):
    path = tmp_path / "labels.json"
    path.write_text(json.dumps({"format": 1, "type": "A1", "labels": [[1], [2]]}), encoding="utf-8")
    code, report = _run_json(capsys, ["theorem1", str(path)])
    assert code == EXIT_OK
    assert (report["m"], report["l"], report["d"]) == ([1, 1], [3, 0], [3])


def test_verify_leclerc(capsys):
    code, report = _run_json(capsys, ["verify-leclerc", "--seed", "7", "--lambdas", "2", "3"])
    assert code == EXIT_OK
    assert report["passed"]
    assert all(c["pass"] for c in report["checks"])


def test_metadata(capsys):
    code, report = _run_json(capsys, ["metadata"])
    assert code == EXIT_OK
    assert report["record"]["counterexample"] is True


def test_output_is_deterministic(capsys):
    argv = ["canonical", "A5", "[1,2]+[1,4]+[2,3]+[2,5]+[3,4]+[4,5]", "--seed", "11"]
    first = (run(argv), capsys.readouterr().out)
    second = (run(argv), capsys.readouterr().out)
    assert first == second
    assert json.loads(first[1])["status"] == "determined"


def test_table_format_and_out_file(capsys, tmp_path):
    out = tmp_path / "roots.txt"
    assert run(["roots", "A2", "--format", "table", "--out", str(out)]) == EXIT_OK
    assert capsys.readouterr().out == ""
    lines = out.read_text(encoding="utf-8").splitlines()
    assert "count\t3" in lines
    assert "roots[1].name\t[1,2]" in lines


@pytest.mark.parametrize("argv", [
    ["hom", "missing.json", "missing.json"],
    ["roots", "F4"],
    ["mu", "A5", "1,2,3"],
    ["roots", "A2", "--field", "fp:7"],
    ["roots", "A2", "--samples", "0"],
    ["verify-leclerc", "--lambdas", "1"],
])
def test_input_errors_exit_with_two(capsys, argv):
    assert run(argv) == EXIT_USAGE


def test_field_mismatch_exits_with_two(capsys, m2_file):
    assert run(["hom", m2_file, m2_file, "--field", "fp:2147483647"]) == EXIT_USAGE
    assert "run is over" in capsys.readouterr().err


def test_usage_errors_come_from_argparse():
    with pytest.raises(SystemExit) as info:
        run([])
    assert info.value.code == EXIT_USAGE


@pytest.mark.parametrize("argv", [
    ["roots", "A2", "--seed", "19"],
    ["relations", "A2", "--seed", "19"],
    ["metadata", "--seed", "19"],
    ["mu", "A2", "[1,1]", "--seed", "19"],
])
def test_every_report_echoes_the_seed(capsys, argv):
    code, report = _run_json(capsys, argv)
    assert code == EXIT_OK
    assert report["provenance"] == {"seed": 19, "samples": 5, "field": "Q"}


def test_module_and_label_set_reports_echo_the_seed(capsys, tmp_path, m2_file):
    for argv in (["hom", m2_file, m2_file], ["ext", m2_file, m2_file]):
        assert _run_json(capsys, argv + ["--seed", "4"])[1]["provenance"]["seed"] == 4
    path = tmp_path / "labels.json"
    path.write_text(json.dumps({"format": 1, "type": "A1", "labels": [[1], [2]]}), encoding="utf-8")
    assert _run_json(capsys, ["theorem1", str(path), "--seed", "4"])[1]["provenance"]["seed"] == 4


def test_failed_check_exits_with_one(capsys, monkeypatch):
    def failing_suite(ctx, lambdas):
        return SuiteReport([CheckResult("end_dim[λ=2]", 3, 4, False)], ctx.provenance())

    monkeypatch.setattr(commands, "verify_proposition", failing_suite)
    code, report = _run_json(capsys, ["verify-leclerc"])
    assert code == EXIT_FAILED_CHECK
    assert not report["passed"]
    assert report["checks"][0]["pass"] is False


def test_decomposition_failure_exits_with_one(capsys, monkeypatch, m2_file):
    def give_up(m, ctx):
        raise DecompositionError("no splitting found")

    monkeypatch.setattr(commands, "decompose", give_up)
    assert run(["decompose", m2_file]) == EXIT_FAILED_CHECK
    assert "no splitting found" in capsys.readouterr().err


@pytest.mark.parametrize("overrides", [{"samples": 0}, {"format": "xml"}, {"field": "fp:7"}, {"field": "reals"}])
def test_run_config_validates_its_fields(overrides):
    with pytest.raises(ValidationError):
        RunConfig(command="roots", **overrides)


def test_logging_follows_the_current_stderr(capsys):
    assert run(["roots", "A2"]) == EXIT_OK
    assert run(["roots", "A2"]) == EXIT_OK
    capsys.readouterr()
    root = logging.getLogger()
    handlers = [h for h in root.handlers if type(h).__name__ == "_StderrHandler"]
    assert len(handlers) == 1
    assert handlers[0].stream is sys.stderr
    logging.getLogger("app").error("written after the run")
    assert "written after the run" in capsys.readouterr().err
