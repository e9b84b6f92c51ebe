"""Root-mean-squared forecast error by horizon and pooled over the forecast grid."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EvaluationError
from .forecast import ForecastRun


def _squared_errors(run: ForecastRun, j: int | None) -> np.ndarray:
    recs = run.records if j is None else run.horizon(j)
    if not recs:
        raise EvaluationError(f"run '{run.model}' has no records"
                              + ("" if j is None else f" at horizon j={j}"), "evaluation")
    err = np.empty(len(recs))
    for i, rec in enumerate(recs):
        if rec.realized is None or not math.isfinite(rec.realized):
            raise EvaluationError(f"record (r={rec.r}, j={rec.j}, target={rec.target_index}) "
                                  f"of '{run.model}' has no realized value", "evaluation")
        err[i] = rec.realized - rec.predicted
    return err * err


def rmse_per_horizon(run: ForecastRun, j: int) -> float:
    return math.sqrt(float(np.mean(_squared_errors(run, j))))


def rmse_pooled(run: ForecastRun) -> float:
    """RMSE over the whole (r, j) grid with equal weight per record."""
    return math.sqrt(float(np.mean(_squared_errors(run, None))))


@dataclass(frozen=True)
class RmseRow:
    model: str
    per_horizon: dict
    pooled: float
    counts: dict


@dataclass(frozen=True)
class RmseReport:
    frequency: str
    n: int
    h_max: int
    rows: tuple

    @property
    def horizons(self) -> list[int]:
        return list(range(1, self.h_max + 1))

    def column_minimum(self, j: int | None = None) -> str:
        """Model with the smallest RMSE at horizon ``j`` (pooled when ``None``)."""
        key = (lambda row: row.pooled) if j is None else (lambda row: row.per_horizon[j])
        return min(self.rows, key=key).model

    def header(self) -> list[str]:
        return ["model"] + [f"rmse_j{j}" for j in self.horizons] + ["rmse_pooled"]

    def table_rows(self) -> list[list]:
        return [[row.model] + [row.per_horizon[j] for j in self.horizons] + [row.pooled]
                for row in self.rows]


def compare_models(runs) -> RmseReport:
    runs = list(runs)
    if not runs:
        raise EvaluationError("no runs to compare", "evaluation")
    first = runs[0]
    for run in runs[1:]:
        if (run.frequency, run.n, run.h_max, run.N) != (first.frequency, first.n, first.h_max,
                                                         first.N):
            raise EvaluationError(f"run '{run.model}' uses a different configuration from "
                                  f"'{first.model}'", "evaluation")
    rows = []
    for run in runs:
        per = {j: rmse_per_horizon(run, j) for j in range(1, run.h_max + 1)}
        counts = {j: len(run.horizon(j)) for j in per}
        rows.append(RmseRow(run.model, per, rmse_pooled(run), counts))
    return RmseReport(first.frequency, first.n, first.h_max, tuple(rows))
