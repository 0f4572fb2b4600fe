import json

import pytest

from cli import EXIT_INPUT, EXIT_INTERNAL, EXIT_OK, build_parser, exit_code_for, main
from commands import selftest
from kummer import KummerCoords
from errors import FactorizationTimeout, InvalidPoint, KummerHeightError, ValidationFailure


def run_json(capsys, *argv):
    code = main(list(argv) + ["--json"])
    out = capsys.readouterr().out
    return code, (json.loads(out) if code == EXIT_OK else None)


def test_exit_codes():
    assert exit_code_for(InvalidPoint("x")) == EXIT_INPUT
    assert exit_code_for(ValidationFailure("x")) == EXIT_INTERNAL
    assert exit_code_for(FactorizationTimeout("x")) == EXIT_INTERNAL
    assert exit_code_for(KummerHeightError("x")) == EXIT_INTERNAL


def test_parser_requires_a_curve():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["height", "--point", "p.json"])
    args = build_parser().parse_args(["selftest", "--samples", "3"])
    assert args.samples == 3


def test_precision_floor():
    with pytest.raises(SystemExit):
        main(["bound", "--curve", "record_curve.json", "--prec", "3"])


def test_missing_file_is_an_input_error(capsys):
    code, _ = run_json(capsys, "invariants", "--curve", "no_such_curve.json")
    assert code == EXIT_INPUT


def test_point_off_the_curve(tmp_path, capsys):
    point = tmp_path / "point.json"
    point.write_text(json.dumps({"a": ["0", "0", "1"], "b": ["1", "0"]}))
    code, _ = run_json(capsys, "height", "--curve", "ex1_curve.json", "--point", str(point))
    assert code == EXIT_INPUT


def test_mu_on_cusp_point(capsys):
    code, report = run_json(capsys, "mu", "--curve", "cusp_curve_3.json", "--point", "cusp_point_3.json",
                            "--place", "3")
    assert code == EXIT_OK
    assert report["command"] == "mu"
    assert report["results"]["mu"] == "2"
    assert report["results"]["eps_trace"][0] == 6
    assert report["inputs"]["place"] == "3"


def test_invariants(capsys):
    code, report = run_json(capsys, "invariants", "--curve", "record_curve.json", "--torsion-primes", "10")
    assert code == EXIT_OK
    rows = {row["p"]: row for row in report["results"]["bad_primes"]}
    assert rows[3]["type"] == "I0-IV-0"
    assert rows[5]["type"] == "[I_{4-3-2}]"
    assert report["results"]["torsion_primes"] == [7]


def test_height_with_cross_check(capsys):
    code, report = run_json(capsys, "height", "--curve", "ex1_curve.json", "--point", "ex1_point.json",
                            "--cross-check", "--prec", "20")
    assert code == EXIT_OK
    results = report["results"]
    assert report["digits"] == 20
    assert float(results["hhat"]) >= -1e-12
    assert "finite_part_simple" in results


def test_selftest_dumps_forms(tmp_path, capsys):
    path = tmp_path / "forms.json"
    code, report = run_json(capsys, "selftest", "--samples", "2", "--skip-arch", "--dump-forms", str(path))
    assert code == EXIT_OK
    assert path.exists()
    assert [g["status"] for g in report["results"]["gates"]] == ["passed", "passed"]


def test_table_output(capsys):
    code = main(["mu", "--curve", "cusp_curve_3.json", "--point", "cusp_point_3.json", "--place", "3"])
    assert code == EXIT_OK
    assert "== local correction ==" in capsys.readouterr().out


@pytest.fixture
def reset_gate():
    selftest.exact_gate.cache_clear()
    yield
    selftest.exact_gate.cache_clear()


def test_broken_duplication_aborts_height(monkeypatch, reset_gate):
    monkeypatch.setattr(selftest, "duplicate", lambda x, model: KummerCoords.of((1, 2, 3, 4)))
    code = main(["height", "--curve", "ex1_curve.json", "--point", "ex1_point.json"])
    assert code == EXIT_INTERNAL


def test_gate_runs_before_other_commands(monkeypatch, capsys):
    calls = []
    monkeypatch.setattr(selftest, "exact_gate", lambda samples, seed: calls.append((samples, seed)))
    assert main(["invariants", "--curve", "record_curve.json", "--torsion-primes", "10"]) == EXIT_OK
    assert calls == [(100, 20240519)]
