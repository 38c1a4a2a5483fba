"""
    Reports
    =======

    One flat table per command, written as RFC 4180 CSV or as a JSON
    document carrying the configuration echo, the rows and a summary.

    .. Copyright:
        Copyright 2026 Hardy Sharp contributors under Apache License, Version 2.0.
        See file LICENSE for full license details.
"""

import csv
import sys
import logging

from typing import Final, Optional, TextIO

from hardy_sharp.models import ReportDocument

_LOGGER: Final = logging.getLogger(__name__)

# 15 significant digits, independent of the locale.
FLOAT_FORMAT: Final = ".14e"


def format_cell(value: float | int | str | bool | None) -> str:
    match value:
        case None:
            return ""
        case bool():
            return "true" if value else "false"
        case int():
            return str(value)
        case float():
            return format(value, FLOAT_FORMAT)
        case _:
            return str(value)


def write_csv(document: ReportDocument, stream: TextIO) -> None:
    writer = csv.writer(stream)
    writer.writerow(document.columns)
    for row in document.rows:
        writer.writerow([format_cell(row.get(column)) for column in document.columns])


def write_json(document: ReportDocument, stream: TextIO) -> None:
    stream.write(document.model_dump_json(indent=2))
    stream.write("\n")


def write_report(document: ReportDocument, output_format: str, output: Optional[str] = None) -> None:
    writer = write_json if output_format == "json" else write_csv
    if output is None:
        writer(document, sys.stdout)
        return

    with open(output, "w", newline="", encoding="utf-8") as stream:
        writer(document, stream)
    _LOGGER.info("Wrote %d rows to %s.", len(document.rows), output)
