import json
from fractions import Fraction

import pytest

from arith.interval import Interval
from cli import commands
from cli.commands import (
    EXIT_CERTIFICATION,
    EXIT_NOT_FOUND,
    EXIT_OK,
    EXIT_PRECONDITION,
    execute,
    run,
)
from cli.serialize import ReportRenderer, dumps_json, error_bound, flatten, interval_pair, jsonable
from models.report import SCHEMA_VERSION, RunReport


def test_interval_pair_rounds_outward():
    assert interval_pair(Interval.from_number(Fraction(1, 3), 64), 5) == ["0.33333", "0.33334"]
    assert interval_pair(Interval.from_number(2, 64), 2) == ["2.00", "2.00"]
    assert interval_pair(None) is None


@pytest.mark.parametrize(
    "error, text",
    [(Fraction(1, 1000), "1e-3"), (Fraction(3, 1000), "1e-2"), (Fraction(0), "0"), (Fraction(7), "1e1")],
)
def test_error_bound(error, text):
    assert error_bound(error) == text


def test_jsonable_protects_big_integers():
    assert jsonable(2 ** 60) == str(2 ** 60)
    assert jsonable(12) == 12
    assert jsonable({"x": Fraction(1, 2), 3: [True, None]}) == {"x": "1/2", "3": [True, None]}


def test_flatten():
    assert flatten({"b": {"c": 1}, "a": [1, 2], "d": [{"e": None}]}) == [
        ("a", "[1, 2]"),
        ("b.c", "1"),
        ("d[0].e", ""),
    ]


def test_json_is_sorted_and_versioned():
    report = RunReport(command=["gaps"], result={"zeta": 1, "alpha": 2})
    document = json.loads(dumps_json(report))
    assert document["schema"] == SCHEMA_VERSION
    assert list(document["result"]) == ["alpha", "zeta"]
    assert "rows" not in document


def test_csv_rendering_quotes_cells():
    report = RunReport(command=["x"], rows=[{"a": "1", "b": "x,y"}])
    out = ReportRenderer().render(report, "csv")
    assert out.splitlines() == ["a,b", '1,"x,y"']


def test_text_rendering():
    report = RunReport(command=["gaps", "--limit", "5"], config={"limit": "5"}, result={"count": 3})
    out = ReportRenderer().render(report, "text")
    assert "gaps --limit 5" in out
    assert "count: 3" in out
    assert "exit code 0" in out


def test_unknown_format():
    with pytest.raises(ValueError):
        ReportRenderer().render(RunReport(command=[]), "xml")


def test_gaps_command():
    report = execute(["gaps", "--gen", "primes(50)", "--limit", "50", "--delta", "1"])
    assert report.exit_code == EXIT_OK
    assert report.result["count"] == 50
    assert report.result["violations"] == []
    assert report.result["min_gap"] == ["1." + "0" * 20, "1." + "0" * 20]
    assert report.config["max_precision_bits"] == 4096


def test_enumerate_command():
    report = execute(["--digits", "3", "enumerate", "--gen", "list:[3/2]", "--limit", "4"])
    assert report.exit_code == EXIT_OK
    assert [e["decimal"] for e in report.result["elements"]] == ["1.000", "1.500", "2.250", "3.375"]


def test_precision_flag_wins_over_environment(monkeypatch):
    monkeypatch.setenv("BEURLING_MAX_PRECISION_BITS", "256")
    report = execute(["--max-precision-bits", "512", "enumerate", "--gen", "primes(10)", "--limit", "10"])
    assert report.config["max_precision_bits"] == 512
    report = execute(["enumerate", "--gen", "primes(10)", "--limit", "10"])
    assert report.config["max_precision_bits"] == 256


def test_construct_with_certificates():
    report = execute(["construct", "quadalpha", "--limit", "50", "--certify-pairs", "3"])
    assert report.exit_code == EXIT_OK
    assert len(report.result["certificates"]) == 3
    assert all(c["passes"] for c in report.result["certificates"])
    assert report.result["system"]["kind"] == "quadalpha"


def test_construct_cpow_has_no_pair_certificates():
    report = execute(["construct", "cpow", "--c", "3/2", "--limit", "50", "--certify-pairs", "2"])
    assert report.exit_code == EXIT_PRECONDITION
    assert report.error["type"] == "PreconditionError"


def test_rational_attack_command():
    report = execute(["attack", "rational", "--alpha", "5/2", "--exclude", "3", "--delta", "0.1"])
    assert report.exit_code == EXIT_OK
    assert (report.result["n_prime"], report.result["m_prime"]) == ("61", "5957")
    assert report.result["exact_gap"] == "1/32"
    assert report.result["density"]["suggested_t"] == 3


def test_rational_attack_rejects_integer_alpha():
    report = execute(["attack", "rational", "--alpha", "4/2", "--delta", "0.1"])
    assert report.exit_code == EXIT_PRECONDITION


def test_irrational_attack_command():
    report = execute(["attack", "irrational", "--alpha", "1+sqrt(2)", "--exclude", "3", "--delta", "1/100"])
    assert report.exit_code == EXIT_OK
    assert (report.result["n_prime"], report.result["m_prime"]) == ("239", "577")


def test_cpow_attack_command():
    report = execute(["attack", "cpow", "--alpha", "2", "--c", "3/2", "--eps", "0.1", "--bmax", "100"])
    assert report.exit_code == EXIT_OK
    assert (report.result["best"]["a"], report.result["best"]["b"]) == ("100", "63")


def test_not_found_exit_code_and_diagnostics():
    report = execute(["attack", "cpow", "--alpha", "2", "--c", "3/2", "--eps", "1e-9", "--bmax", "10"])
    assert report.exit_code == EXIT_NOT_FOUND
    assert report.error["diagnostics"]["bmax"] == 10


def test_metric_command_without_generators():
    report = execute(["metric", "find-alpha", "--delta", "1/2", "--verify", "1000"])
    assert report.exit_code == EXIT_OK
    assert report.result["t"] == 5
    assert report.result["beta"] == "15/2"


def test_syntax_error_reports_position():
    report = execute(["gaps", "--gen", "primes(50", "--limit", "50", "--delta", "1"])
    assert report.exit_code == EXIT_PRECONDITION
    assert report.error["type"] == "GenSpecSyntaxError"
    assert report.error["position"] == 9


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["gaps", "--gen", "primes(50)", "--limit", "50"],
        ["gaps", "--gen", "primes(50)", "--limit", "fifty", "--delta", "1"],
        ["attack", "rational", "--alpha", "5/2", "--exclude", "4", "--delta", "0.1"],
    ],
)
def test_usage_errors_exit_three(argv):
    assert execute(argv).exit_code == EXIT_PRECONDITION


def test_run_writes_json_to_stdout(capsys):
    code = run(["gaps", "--gen", "primes(20)", "--limit", "20", "--delta", "1"])
    document = json.loads(capsys.readouterr().out)
    assert code == 0
    assert document["exit_code"] == 0
    assert document["result"]["is_lacunary"] is True


def test_run_renders_csv_rows(capsys):
    code = run(["--format", "csv", "attack", "rational", "--alpha", "5/2", "--exclude", "3", "--delta", "0.1"])
    lines = capsys.readouterr().out.splitlines()
    assert code == 0
    assert lines[0] == "n_prime,m_prime,gap_upper"
    assert lines[1].startswith("61,5957,")


def test_json_output_is_deterministic(capsys):
    argv = ["gaps", "--gen", "cpow(3/2, 20)", "--limit", "100", "--delta", "1/2"]
    run(argv)
    first = json.loads(capsys.readouterr().out)
    run(argv)
    second = json.loads(capsys.readouterr().out)
    first.pop("timing_seconds")
    second.pop("timing_seconds")
    assert first == second


def test_unexpected_failure_still_produces_a_report(monkeypatch):
    def explode(*args, **kwargs):
        raise RuntimeError("interval kernel exploded")

    monkeypatch.setattr(commands, "gap_report", explode)
    report = execute(["gaps", "--gen", "primes(10)", "--limit", "10", "--delta", "1"])
    assert report.exit_code == EXIT_CERTIFICATION
    assert report.error == {"type": "RuntimeError", "message": "interval kernel exploded"}


def test_construct_example2_certifies_pairs_reduced_to_one():
    report = execute(["construct", "example2", "--limit", "100", "--certify-pairs", "60", "--pair-limit", "1000000"])
    assert report.exit_code == EXIT_OK
    assert report.error is None
    certificates = report.result["certificates"]
    assert len(certificates) > 10
    assert all(c["passes"] for c in certificates)
    assert any(c["left"] == "g(1)" or c["right"] == "g(1)" for c in certificates)
