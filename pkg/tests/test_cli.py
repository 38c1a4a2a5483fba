import math

import pytest

from hardy_sharp import cli
from hardy_sharp.cli import ExitCode, main
from hardy_sharp.helpers import NonConvergence
from hardy_sharp.models import ReportDocument


def _json_report(capsys: pytest.CaptureFixture[str]) -> ReportDocument:
    return ReportDocument.model_validate_json(capsys.readouterr().out)


def test_constants_csv(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["constants", "--p-grid", "1.5,2,4"]) == ExitCode.OK

    out = capsys.readouterr().out
    lines = out.split("\r\n")
    assert lines[0] == "p,kp,cp,bp"
    assert lines[-1] == ""
    assert len(lines) == 5
    cells = lines[2].split(",")
    assert cells[0] == "2.00000000000000e+00"
    assert math.isclose(float(cells[1]), 1.0, rel_tol=1e-12)
    assert math.isclose(float(cells[2]), 2.0 * math.pi, rel_tol=1e-12)


def test_constants_to_file(tmp_path) -> None:
    output = tmp_path / "constants.csv"
    assert main(["constants", "--p", "3", "--output", str(output)]) == ExitCode.OK
    with open(output, newline="") as file:
        assert file.read().startswith("p,kp,cp,bp\r\n3.00000000000000e+00,")


def test_output_is_deterministic(capsys: pytest.CaptureFixture[str]) -> None:
    arguments = ["ratio-sweep", "--p", "1.5", "--samples", "3", "--degree", "2", "--seed", "11"]
    assert main(arguments) == ExitCode.OK
    first = capsys.readouterr().out
    assert main(arguments) == ExitCode.OK
    assert capsys.readouterr().out == first


@pytest.mark.parametrize(
    "arguments",
    [
        ["schur", "--p", "0.5"],
        ["schur", "--p", "1"],
        ["unknown"],
        ["constants", "--p", "2", "--p-grid", "2,3"],
        ["constants", "--p-grid", "2,x"],
        ["constants", "--format", "xml"],
        ["constants", "--theta-points", "1"],
        ["maximize", "--p", "2", "--degree", "0"],
        ["constants", "--loglevel", "LOUD"],
        ["ratio-sweep", "--p", "2", "--samples", "1", "--angle", "nan"],
        ["ratio-sweep", "--p", "2", "--samples", "1", "--angle", "inf"],
    ],
    ids=[
        "p-below-one",
        "p-one",
        "command",
        "both-grids",
        "grid-value",
        "format",
        "theta-points",
        "degree",
        "loglevel",
        "angle-nan",
        "angle-inf",
    ],
)
def test_usage_errors(arguments: list[str]) -> None:
    assert main(arguments) == ExitCode.USAGE_ERROR


def test_endpoints_json(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["endpoints", "--p-grid", "1.5,2", "--format", "json"]) == ExitCode.OK

    document = _json_report(capsys)
    assert document.config.command == "endpoints"
    assert document.columns == ["p", "f0", "fpi", "bp", "residual0", "residualpi"]
    assert len(document.rows) == 2
    assert math.isclose(document.rows[0]["bp"], math.pi, rel_tol=1e-15)
    assert document.summary.passed
    assert document.summary.numerical_failures == 0
    assert all(0.0 <= row["err"] <= 1e-8 for row in document.rows)


def test_schur_json(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["schur", "--p", "2", "--theta-points", "9", "--format", "json"]) == ExitCode.OK

    document = _json_report(capsys)
    # Both endpoints, the interior angles and the stress angles.
    assert len(document.rows) == 9 + 4 + 2
    assert document.rows[0]["theta"] == 0.0
    assert document.summary.worst_margin >= -1e-8


def test_convexity(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["convexity", "--p", "1.5", "--theta-points", "5", "--format", "json"]) == ExitCode.OK
    document = _json_report(capsys)
    assert len(document.rows) == 5
    assert all(row["f2_phi"] > 0.0 for row in document.rows)


def test_ratio_sweep(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["ratio-sweep", "--p-grid", "1.5,4", "--samples", "4", "--degree", "3", "--format", "json"]) == ExitCode.OK
    document = _json_report(capsys)
    assert len(document.rows) == 8
    assert all(row["normalized"] <= 1.0 for row in document.rows)


def test_epsilon_sweep_skips_inadmissible_values(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["epsilon-sweep", "--p-grid", "2,4", "--epsilons", "0.3,0.1", "--format", "json"]) == ExitCode.OK
    document = _json_report(capsys)
    assert [(row["p"], row["eps"]) for row in document.rows] == [(2.0, 0.3), (2.0, 0.1), (4.0, 0.1)]


def test_maximize(capsys: pytest.CaptureFixture[str]) -> None:
    arguments = ["maximize", "--p", "2", "--degree", "1", "--budget", "150", "--restarts", "2", "--seed", "3"]
    assert main([*arguments, "--format", "json"]) == ExitCode.OK
    document = _json_report(capsys)
    assert [row["seed"] for row in document.rows] == [3, 4]
    assert all(row["evaluations"] <= 150 for row in document.rows)


def test_settings_file(tmp_path, capsys: pytest.CaptureFixture[str]) -> None:
    settings = tmp_path / "run.yml"
    settings.write_text("version: 1\np_grid: [1.5, 2.0]\nformat: json\n")

    assert main(["constants", "--config", str(settings)]) == ExitCode.OK
    document = _json_report(capsys)
    assert [row["p"] for row in document.rows] == [1.5, 2.0]

    assert main(["constants", "--config", str(settings), "--p", "4"]) == ExitCode.OK
    document = _json_report(capsys)
    assert [row["p"] for row in document.rows] == [4.0]


def test_settings_file_from_environment(tmp_path, monkeypatch, capsys: pytest.CaptureFixture[str]) -> None:
    settings = tmp_path / "run.yml"
    settings.write_text("version: 1\np_grid: 3\nformat: json\n")
    monkeypatch.setenv("HARDY_SHARP_CONFIG", str(settings))

    assert main(["constants"]) == ExitCode.OK
    assert [row["p"] for row in _json_report(capsys).rows] == [3.0]


@pytest.mark.parametrize(
    "content",
    ["version: 2\n", "p_grid: [2.0]\n", "version: 1\ncolour: red\n", "- 1\n- 2\n", "version: 1\np_grid: [0.5]\n"],
    ids=["version", "no-version", "unknown-key", "not-a-mapping", "bad-exponent"],
)
def test_invalid_settings_file(tmp_path, content: str) -> None:
    settings = tmp_path / "run.yml"
    settings.write_text(content)
    assert main(["constants", "--config", str(settings)]) == ExitCode.USAGE_ERROR


def test_missing_settings_file(tmp_path) -> None:
    assert main(["constants", "--config", str(tmp_path / "missing.yml")]) == ExitCode.USAGE_ERROR


def test_numerical_failure(monkeypatch) -> None:
    def failing(config):
        raise NonConvergence("budget spent")

    monkeypatch.setitem(cli.PIPELINES, "constants", failing)
    assert main(["constants", "--p", "2"]) == ExitCode.NUMERICAL_FAILURE


def test_failed_check(monkeypatch, capsys: pytest.CaptureFixture[str]) -> None:
    def violated(config):
        outcome = cli._Outcome(["p"])
        outcome.rows.append(dict(p=2.0))
        outcome.passed = False
        outcome.margin(-1.0)
        return outcome

    monkeypatch.setitem(cli.PIPELINES, "constants", violated)
    assert main(["constants", "--p", "2", "--format", "json"]) == ExitCode.CHECK_FAILED
    document = _json_report(capsys)
    assert not document.summary.passed
    assert document.summary.worst_margin == -1.0


def test_numerical_failures_take_precedence(monkeypatch, capsys: pytest.CaptureFixture[str]) -> None:
    def both(config):
        outcome = cli._Outcome(["p"])
        outcome.passed = False
        outcome.numerical_failures = 1
        return outcome

    monkeypatch.setitem(cli.PIPELINES, "constants", both)
    assert main(["constants"]) == ExitCode.NUMERICAL_FAILURE


def test_every_command_has_a_pipeline() -> None:
    assert set(cli.COMMANDS) == set(cli.PIPELINES)


@pytest.mark.slow
def test_selftest(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["selftest", "--format", "json"]) == ExitCode.OK
    document = _json_report(capsys)
    assert all(row["passed"] for row in document.rows)


@pytest.mark.parametrize(
    "arguments, columns",
    [
        (["ratio-sweep", "--p", "2", "--samples", "2", "--degree", "2"], ["p", "sample", "lhs", "rhs_raw", "normalized"]),
        (["epsilon-sweep", "--p", "4", "--epsilons", "0.1,0.05"], ["p", "eps", "normalized"]),
        (["maximize", "--p", "2", "--degree", "1", "--budget", "120"], ["p", "seed", "evaluations", "best_normalized"]),
        (["convexity", "--p", "2", "--theta-points", "3"], ["p", "theta", "f2_phi", "f2_fd", "rel_diff"]),
    ],
    ids=["ratio-sweep", "epsilon-sweep", "maximize", "convexity"],
)
def test_json_rows_carry_error_estimates(tmp_path, arguments: list[str], columns: list[str]) -> None:
    output = tmp_path / "report.json"
    assert main([*arguments, "--format", "json", "--output", str(output)]) == ExitCode.OK

    document = ReportDocument.model_validate_json(output.read_text())
    assert document.columns == columns
    assert document.rows
    assert all(0.0 <= row["err"] < 1e-6 for row in document.rows)

    # The CSV table keeps its documented columns.
    assert main([*arguments, "--output", str(tmp_path / "report.csv")]) == ExitCode.OK
    with open(tmp_path / "report.csv", newline="") as file:
        assert file.readline() == ",".join(columns) + "\r\n"
