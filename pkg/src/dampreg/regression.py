"""Design matrices for the damped predictive regression, OLS fitting, and t/F inference."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ._linalg import qr_lstsq
from .data import PredictorPanel
from .errors import (ConfigurationError, InsufficientDataError, NotNestedError,
                     UnknownLabelError)
from .stationarity import damping_transform


@dataclass(frozen=True)
class DesignMatrix:
    """Regressors ``X`` (rows x columns), response ``y`` and column labels.

    ``rows`` are panel row indices.  Column order: optional ``const``, return
    lags ``y_lag1..y_lagp``, ``cay``, then ``mu_k, nu_k`` per ratio.
    """

    X: np.ndarray
    y: np.ndarray
    labels: tuple
    rows: np.ndarray
    has_intercept: bool = False

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def m(self) -> int:
        return self.X.shape[1]

    def restrict(self, stop: int) -> "DesignMatrix":
        """The first ``stop`` rows."""
        return DesignMatrix(self.X[:stop], self.y[:stop], self.labels, self.rows[:stop],
                            self.has_intercept)


def design_labels(spec) -> tuple:
    labels = []
    if spec.kind == "historical_mean" or spec.intercept:
        labels.append("const")
    if spec.kind == "historical_mean":
        return tuple(labels)
    labels += [f"y_lag{j}" for j in range(1, spec.p + 1)]
    if spec.kind == "damped_multivariate":
        if spec.include_cay:
            labels.append("cay")
        for k in spec.ratios:
            labels += [f"mu_{k}", f"nu_{k}"]
    return tuple(labels)


def regressor_block(spec, y_lags: np.ndarray, cay, ratios: dict) -> np.ndarray:
    """Assemble regressor columns in :func:`design_labels` order.

    ``y_lags`` has shape (n, p) with column ``j-1`` holding lag ``j``;
    ``cay`` and each ``ratios[k]`` have shape (n,).
    """
    n = y_lags.shape[0]
    cols = []
    if spec.kind == "historical_mean" or spec.intercept:
        cols.append(np.ones(n))
    if spec.kind != "historical_mean":
        cols += [y_lags[:, j] for j in range(spec.p)]
        if spec.kind == "damped_multivariate":
            if spec.include_cay:
                cols.append(np.asarray(cay, dtype=float))
            for k in spec.ratios:
                d = damping_transform(ratios[k])
                cols += [d.mu, d.nu]
    return np.column_stack(cols) if cols else np.empty((n, 0))


def build_design(panel: PredictorPanel, spec) -> DesignMatrix:
    """Regressors for ``spec`` over every usable panel row."""
    if spec.kind != "historical_mean" and spec.p > panel.max_lag:
        raise ConfigurationError(f"spec needs {spec.p} return lags but the panel was built "
                                 f"with {panel.max_lag}", "regression")
    if spec.kind == "damped_multivariate" and spec.include_cay and not panel.has_cay:
        raise ConfigurationError("spec includes cay but the panel has no cay column",
                                 "regression")
    rows = np.arange(panel.start, len(panel.y))
    p = spec.p if spec.kind != "historical_mean" else 0
    y_lags = np.column_stack([panel.y[rows - j] for j in range(1, p + 1)]) if p else \
        np.empty((len(rows), 0))
    ratios = {k: v[rows] for k, v in panel.ratios().items()}
    cay = panel.x_cay[rows] if panel.has_cay else None
    X = regressor_block(spec, y_lags, cay, ratios)
    labels = design_labels(spec)
    if not np.all(np.isfinite(X)):
        raise ConfigurationError("design contains non-finite entries", "regression")
    return DesignMatrix(X=X, y=panel.y[rows].copy(), labels=labels, rows=rows,
                        has_intercept="const" in labels)


@dataclass(frozen=True)
class OlsFit:
    labels: tuple
    xi_hat: np.ndarray
    sigma2: float
    cov: np.ndarray
    ssr: float
    tss: float
    n: int
    dof: int
    t_stats: np.ndarray
    p_values: np.ndarray
    f_stat: float | None
    f_p_value: float | None
    f_q: int
    adj_r2: float | None
    residuals: np.ndarray
    fitted: np.ndarray
    has_intercept: bool

    @property
    def m(self) -> int:
        return len(self.xi_hat)

    @property
    def std_errors(self) -> np.ndarray:
        return np.sqrt(np.diag(self.cov))

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabelError(f"unknown coefficient '{label}'; fit has {list(self.labels)}",
                                    "regression") from None

    def coef(self, label: str) -> float:
        return float(self.xi_hat[self.index(label)])

    def predict(self, X) -> np.ndarray:
        return np.asarray(X, dtype=float) @ self.xi_hat


def ols_fit(design: DesignMatrix) -> OlsFit:
    """Least squares by pivoted QR with classical standard errors.

    Degrees of freedom are ``n - m``.  The overall F statistic tests every
    non-intercept coefficient against zero; without an intercept the
    restricted model is y = 0.
    """
    X, y = design.X, design.y
    n, m = X.shape
    if n <= m:
        raise InsufficientDataError(f"{n} observations cannot identify {m} coefficients",
                                    "regression")
    sol = qr_lstsq(X, y, design.labels, module="regression")
    resid = sol.residuals
    ssr = float(resid @ resid)
    dof = n - m
    sigma2 = ssr / dof
    cov = sigma2 * sol.xtx_inv
    cov = 0.5 * (cov + cov.T)
    se = np.sqrt(np.diag(cov))
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(se > 0, sol.coef / se, 0.0)
    p = 2.0 * stats.t.sf(np.abs(t), dof)

    ybar = float(y.mean())
    tss = float(((y - ybar) ** 2).sum())
    if design.has_intercept:
        ssr_r, q = tss, m - 1
    else:
        ssr_r, q = float(y @ y), m
    if q > 0 and ssr > 0:
        f = ((ssr_r - ssr) / q) / (ssr / dof)
        fp = float(stats.f.sf(f, q, dof))
    elif q > 0:
        f, fp = math.inf, 0.0
    else:
        f, fp = None, None
    adj = 1.0 - (ssr / dof) / (tss / (n - 1)) if tss > 0 else None
    return OlsFit(labels=tuple(design.labels), xi_hat=sol.coef, sigma2=sigma2, cov=cov,
                  ssr=ssr, tss=tss, n=n, dof=dof, t_stats=t, p_values=p, f_stat=f,
                  f_p_value=fp, f_q=q, adj_r2=adj, residuals=resid, fitted=y - resid,
                  has_intercept=design.has_intercept)


@dataclass(frozen=True)
class Decision:
    statistic: float
    p_value: float
    critical_value: float
    level: float
    reject: bool
    df: tuple


def t_test(fit: OlsFit, label: str, level: float = 0.01) -> Decision:
    """Two-sided test of a zero coefficient; reject when |t| exceeds the critical value."""
    i = fit.index(label)
    t = float(fit.t_stats[i])
    crit = float(stats.t.ppf(1.0 - level / 2.0, fit.dof))
    return Decision(statistic=t, p_value=float(fit.p_values[i]), critical_value=crit,
                    level=level, reject=abs(t) > crit, df=(fit.dof,))


def f_test(unrestricted: OlsFit, restricted: OlsFit, q: int, level: float = 0.01,
           rtol: float = 1e-9) -> Decision:
    """F = ((SSR_r - SSR_ur)/q) / (SSR_ur/dof_ur) for nested fits on the same rows."""
    if q < 1:
        raise ConfigurationError("restriction count must be >= 1", "regression")
    if unrestricted.n != restricted.n:
        raise NotNestedError("fits use different observation counts", "regression")
    gap = restricted.ssr - unrestricted.ssr
    if gap < -rtol * max(unrestricted.ssr, restricted.ssr, np.finfo(float).tiny):
        raise NotNestedError(f"restricted SSR {restricted.ssr:.6g} is below unrestricted "
                             f"SSR {unrestricted.ssr:.6g}; models are not nested", "regression")
    gap = max(gap, 0.0)
    dof = unrestricted.dof
    f = (gap / q) / (unrestricted.ssr / dof) if unrestricted.ssr > 0 else math.inf
    p = float(stats.f.sf(f, q, dof))
    crit = float(stats.f.ppf(1.0 - level, q, dof))
    return Decision(statistic=float(f), p_value=p, critical_value=crit, level=level,
                    reject=f > crit, df=(q, dof))


def adjusted_r2(fit: OlsFit) -> float | None:
    """1 - (SSR/dof) / (TSS/(n-1)) with TSS about the mean; ``None`` if y is constant."""
    return fit.adj_r2
