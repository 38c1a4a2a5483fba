import io

import pytest

from hardy_sharp.models import ReportDocument, ReportSummary, RunConfig
from hardy_sharp.report import format_cell, write_csv, write_json, write_report


@pytest.fixture
def document() -> ReportDocument:
    return ReportDocument(
        config=RunConfig(command="constants", p_grid=[2.0]),
        columns=["p", "seed", "passed", "note"],
        rows=[dict(p=2.0, seed=3, passed=True), dict(p=0.1, note="x,y")],
        summary=ReportSummary(passed=True, worst_margin=0.5),
    )


@pytest.mark.parametrize(
    "value, expected",
    [
        (None, ""),
        (True, "true"),
        (False, "false"),
        (42, "42"),
        (0.1, "1.00000000000000e-01"),
        (-2.5e-300, "-2.50000000000000e-300"),
        ("sharpness", "sharpness"),
    ],
)
def test_format_cell(value, expected: str) -> None:
    assert format_cell(value) == expected


def test_csv_quotes_and_blanks(document: ReportDocument) -> None:
    stream = io.StringIO(newline="")
    write_csv(document, stream)
    assert stream.getvalue() == (
        "p,seed,passed,note\r\n"
        "2.00000000000000e+00,3,true,\r\n"
        '1.00000000000000e-01,,,"x,y"\r\n'
    )


def test_json_document(document: ReportDocument) -> None:
    stream = io.StringIO()
    write_json(document, stream)
    parsed = ReportDocument.model_validate_json(stream.getvalue())
    assert parsed == document
    assert stream.getvalue().endswith("}\n")


def test_write_report_to_file(document: ReportDocument, tmp_path) -> None:
    output = tmp_path / "report.json"
    write_report(document, "json", str(output))
    assert ReportDocument.model_validate_json(output.read_text()).summary.worst_margin == 0.5
