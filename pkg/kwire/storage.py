"""
CSV Storage
===========
Writes and reads sweep tables.

Format: header `<x>,<y>,est_error`, LF line endings, floats in 12-significant-
digit scientific notation, site and length columns as integers, `nan` in the
value and error columns of failed rows.

Usage:
    from kwire.storage import write_sweep_csv, read_sweep_csv

    write_sweep_csv(result, "c48.csv")     # or None for stdout
    result = read_sweep_csv("c48.csv")
"""

import csv
import io
import math
import sys
from pathlib import Path
from typing import Optional

from .observables import SweepResult, SweepRow

INTEGER_COLUMNS = ("i", "L")

# (x, y) header pair -> sweep kind
KINDS_BY_HEADER = {
    ("eV", "C"): "bias",
    ("i", "C"): "distance",
    ("eV", "I"): "iv",
}


def format_float(value: float) -> str:
    if math.isnan(value):
        return "nan"
    return f"{value:.11e}"


def _format_x(x: float, x_name: str) -> str:
    if x_name in INTEGER_COLUMNS:
        return str(int(round(x)))
    return format_float(x)


def format_sweep_csv(result: SweepResult) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([result.x_name, result.y_name, "est_error"])
    for row in result.rows:
        if row.ok:
            writer.writerow([_format_x(row.x, result.x_name), format_float(row.value),
                             format_float(row.est_error)])
        else:
            writer.writerow([_format_x(row.x, result.x_name), "nan", "nan"])
    return buffer.getvalue()


def write_sweep_csv(result: SweepResult, path: Optional[str] = None) -> None:
    """Write to `path`, or to stdout when no path is given."""
    text = format_sweep_csv(result)
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with open(target, "w", newline="") as f:
        f.write(text)


def read_sweep_csv(path: str, kind: Optional[str] = None) -> SweepResult:
    """Load a sweep table; `kind` overrides the kind inferred from the header."""
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file")
        if len(header) != 3 or header[2] != "est_error":
            raise ValueError(f"{path}: unexpected header {header}")
        x_name, y_name = header[0], header[1]

        rows = []
        for line_no, fields in enumerate(reader, start=2):
            if not fields:
                continue
            try:
                x, value, est_error = (float(v) for v in fields)
            except ValueError:
                raise ValueError(f"{path}:{line_no}: malformed row {fields}")
            error = "failed row" if math.isnan(value) else None
            rows.append(SweepRow(x, value, est_error, error))

    if kind is None:
        kind = "crossing" if y_name == "eV_star" else KINDS_BY_HEADER.get((x_name, y_name), "unknown")
    return SweepResult(kind, x_name, y_name, rows)
