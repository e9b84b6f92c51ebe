"""Expanding-window, iterated multi-step out-of-sample forecasts."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .data import PredictorPanel
from .errors import ConfigurationError, DampregError, ForecastError
from .models import ModelSpec
from .regression import build_design, ols_fit, regressor_block

# headroom between the first window and the parameter count
MIN_EXTRA_OBS = 10


@dataclass(frozen=True)
class ForecastRecord:
    r: int
    j: int
    target_index: int
    predicted: float
    realized: float | None


@dataclass(frozen=True)
class ForecastRun:
    """Forecasts for windows ``r = 1..R`` and horizons ``j = 1..h_max``.

    ``target_index`` counts usable panel rows from 1, so window ``r`` fits on
    rows ``1..n+r-1`` and its horizon-``j`` target is row ``n+r+j-1``.
    """

    model: str
    frequency: str
    n: int
    h_max: int
    N: int
    records: tuple

    @property
    def R(self) -> int:
        return self.N - self.n - self.h_max + 1

    def horizon(self, j: int) -> list:
        return [rec for rec in self.records if rec.j == j]

    def arrays(self, j: int | None = None):
        recs = self.records if j is None else self.horizon(j)
        pred = np.array([r.predicted for r in recs], dtype=float)
        real = np.array([np.nan if r.realized is None else r.realized for r in recs], dtype=float)
        return pred, real


def window_counts(N: int, n: int, h_max: int) -> tuple[int, int]:
    """Window count R = N - n - h_max + 1 and record count R * h_max."""
    if n < 1 or h_max < 1:
        raise ConfigurationError("need n >= 1 and h_max >= 1", "forecast")
    if N <= n + h_max - 1:
        raise ConfigurationError(f"sample of {N} cannot hold an initial window of {n} "
                                 f"plus {h_max} horizons", "forecast")
    R = N - n - h_max + 1
    return R, R * h_max


def _window_forecasts(panel, spec, design, r, n, h_max):
    o = n + r - 1
    try:
        fit = ols_fit(design.restrict(o))
    except DampregError as exc:
        raise ForecastError(f"window r={r}: {exc}", window=r) from exc
    origin = int(design.rows[o - 1])
    p = spec.p if spec.kind != "historical_mean" else 0
    history = list(panel.y[origin - p + 1:origin + 1]) if p else []
    # predictors known at the origin stay frozen for every horizon
    x_row = origin + 1
    ratios = {k: v[x_row:x_row + 1] for k, v in panel.ratios().items()}
    cay = panel.x_cay[x_row:x_row + 1] if panel.has_cay else None
    out = []
    for j in range(1, h_max + 1):
        lags = np.array([history[-i] for i in range(1, p + 1)], dtype=float).reshape(1, p)
        row = regressor_block(spec, lags, cay, ratios)
        yhat = float(row[0] @ fit.xi_hat)
        target = o + j
        out.append(ForecastRecord(r=r, j=j, target_index=target, predicted=yhat,
                                  realized=float(design.y[target - 1])))
        if p:
            history.append(yhat)
    return out


def recursive_forecast(panel: PredictorPanel, spec: ModelSpec, n: int, h_max: int,
                       workers: int = 1, name: str | None = None) -> ForecastRun:
    """Refit ``spec`` on every expanding window and iterate forecasts ``h_max`` steps.

    Lagged returns beyond the window are replaced by earlier forecasts; ratio
    and cay predictors stay at their values observed at the forecast origin.
    Windows are independent and may run on ``workers`` threads; records are
    always ordered by (r, j).
    """
    design = build_design(panel, spec)
    N = design.n
    need = spec.n_params + MIN_EXTRA_OBS
    if n < need:
        raise ConfigurationError(f"initial window {n} is below {need} "
                                 f"(parameters + {MIN_EXTRA_OBS})", "forecast")
    if n + h_max > N:
        raise ConfigurationError(f"initial window {n} plus {h_max} horizons exceeds the "
                                 f"{N} usable observations", "forecast")
    R, _ = window_counts(N, n, h_max)

    def one(r):
        return _window_forecasts(panel, spec, design, r, n, h_max)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(one, range(1, R + 1)))
    else:
        chunks = [one(r) for r in range(1, R + 1)]
    records = tuple(rec for chunk in chunks for rec in chunk)
    return ForecastRun(model=name or spec.name or spec.kind, frequency=panel.frequency,
                       n=n, h_max=h_max, N=N, records=records)
