"""Delimited and aligned text tables, plus the forecast-grid file format.

Numbers are written in fixed-point notation: ``DECIMALS`` places in the
delimited files, ``REPORT_DECIMALS`` in aligned human-readable tables.
Undefined values are written as ``NA``.
"""

from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from pathlib import Path

from .errors import DataIntegrityError
from .forecast import ForecastRecord, ForecastRun

DECIMALS = 10
REPORT_DECIMALS = 6
NA = "NA"
GRID_HEADER = ["model", "r", "j", "target_index", "predicted", "realized"]


def fmt(value, decimals: int = DECIMALS) -> str:
    if value is None:
        return NA
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return NA
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        text = f"{value:.{decimals}f}"
        # avoid a signed zero in golden files
        return text[1:] if text.startswith("-") and float(text) == 0 else text
    if hasattr(value, "item"):
        return fmt(value.item(), decimals)
    return str(value)


def to_csv(header, rows, decimals: int = DECIMALS) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v, decimals) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows, decimals: int = DECIMALS) -> None:
    Path(path).write_text(to_csv(header, rows, decimals))


def parse_cell(text: str):
    text = text.strip()
    if text == NA:
        return None
    if text in ("true", "false"):
        return text == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def read_csv(path_or_text, from_text: bool = False):
    """Read a table written by :func:`write_csv`; returns ``(header, rows)``."""
    text = path_or_text if from_text else Path(path_or_text).read_text()
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None:
        raise DataIntegrityError("table is empty", "tables")
    return header, [[parse_cell(c) for c in row] for row in reader if row]


def aligned(header, rows, decimals: int = REPORT_DECIMALS, title: str | None = None) -> str:
    cells = [[str(h) for h in header]] + [[fmt(v, decimals) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = []
    if title:
        lines.append(title)
    for k, r in enumerate(cells):
        parts = [r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
        lines.append("  ".join(parts).rstrip())
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def grid_rows(run: ForecastRun) -> list[list]:
    return [[run.model, rec.r, rec.j, rec.target_index, rec.predicted, rec.realized]
            for rec in run.records]


def write_forecast_grid(path, runs) -> None:
    rows = [row for run in runs for row in grid_rows(run)]
    write_csv(path, GRID_HEADER, rows)


def read_forecast_grid(path, frequency: str = "unknown") -> list[ForecastRun]:
    """Rebuild runs from a grid file; n, h_max and N follow from the (r, j) layout."""
    header, rows = read_csv(path)
    if header != GRID_HEADER:
        raise DataIntegrityError(f"forecast grid header must be {GRID_HEADER}, got {header}",
                                 "tables")
    by_model = defaultdict(list)
    order = []
    for model, r, j, target, pred, real in rows:
        if model not in by_model:
            order.append(model)
        by_model[model].append(ForecastRecord(int(r), int(j), int(target), float(pred),
                                              None if real is None else float(real)))
    runs = []
    for model in order:
        recs = sorted(by_model[model], key=lambda rec: (rec.r, rec.j))
        h_max = max(rec.j for rec in recs)
        R = max(rec.r for rec in recs)
        n = recs[0].target_index - recs[0].j - recs[0].r + 1
        seen = {(rec.r, rec.j) for rec in recs}
        if len(seen) != len(recs) or len(recs) != R * h_max:
            raise DataIntegrityError(f"grid for '{model}' is not a complete (r, j) grid",
                                     "tables")
        runs.append(ForecastRun(model=model, frequency=frequency, n=n, h_max=h_max,
                                N=n + R + h_max - 1, records=tuple(recs)))
    return runs
