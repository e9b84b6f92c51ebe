"""Unit-root testing, the exponential damping transform, and random-walk moment checks."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _mackinnon, _rng
from ._linalg import qr_lstsq
from .errors import (ConfigurationError, DegenerateRegressionError, DomainError,
                     InsufficientDataError)

DEFAULT_LEVELS = (0.01, 0.05, 0.10)
MODES = {"none": "n", "constant": "c", "constant+trend": "ct"}
_MODE_ALIASES = {"n": "none", "nc": "none", "c": "constant", "ct": "constant+trend",
                 "trend": "constant+trend"}
PATH_BLOCK = 10_000
_TINY = np.finfo(float).smallest_subnormal


def default_lag_order(n: int) -> int:
    """Fixed rule floor(12 * (n/100)^(1/4))."""
    return int(math.floor(12.0 * (n / 100.0) ** 0.25))


@dataclass(frozen=True)
class AdfResult:
    gamma_hat: float
    se_gamma: float
    t_stat: float
    p_value: float
    deterministic_mode: str
    lag_order: int
    nobs: int
    reject_at: dict
    critical_values: dict


def adf_test(s, deterministic_mode: str = "constant", lag_order: int | None = None,
             levels=DEFAULT_LEVELS) -> AdfResult:
    """Augmented Dickey-Fuller test of a unit root against stationarity.

    Regresses the first difference on the lagged level, the chosen
    deterministic terms and ``lag_order`` lagged differences.  The p-value is
    MacKinnon's approximation; ``reject_at[level]`` is ``p_value < level``.
    """
    x = np.asarray(s, dtype=float)
    mode = _MODE_ALIASES.get(deterministic_mode, deterministic_mode)
    if mode not in MODES:
        raise ConfigurationError(f"unknown deterministic mode '{deterministic_mode}'; "
                                 f"expected one of {sorted(MODES)}", "stationarity")
    if x.ndim != 1 or not np.all(np.isfinite(x)):
        raise DomainError("ADF input must be a finite 1-d series", "stationarity")
    n = len(x)
    if lag_order is None:
        lag_order = default_lag_order(n)
    if lag_order < 0:
        raise ConfigurationError("lag_order must be nonnegative", "stationarity")
    n_det = {"none": 0, "constant": 1, "constant+trend": 2}[mode]
    if n <= lag_order + 2 + n_det:
        raise InsufficientDataError(
            f"ADF with {lag_order} lags and mode '{mode}' needs more than "
            f"{lag_order + 2 + n_det} observations, got {n}", "stationarity")
    if np.all(x == x[0]):
        raise DegenerateRegressionError("ADF regression is degenerate for a constant series",
                                        "stationarity")

    dx = np.diff(x)
    nobs = len(dx) - lag_order
    cols = [x[lag_order:-1]]
    labels = ["level_lag1"]
    if n_det >= 1:
        cols.append(np.ones(nobs))
        labels.append("const")
    if n_det == 2:
        cols.append(np.arange(1, nobs + 1, dtype=float))
        labels.append("trend")
    for k in range(1, lag_order + 1):
        cols.append(dx[lag_order - k:len(dx) - k])
        labels.append(f"diff_lag{k}")
    X = np.column_stack(cols)
    target = dx[lag_order:]
    sol = qr_lstsq(X, target, labels, module="stationarity", error=DegenerateRegressionError)
    dof = nobs - X.shape[1]
    if dof <= 0:
        raise InsufficientDataError("ADF regression has no residual degrees of freedom",
                                    "stationarity")
    sigma2 = float(sol.residuals @ sol.residuals) / dof
    se = math.sqrt(sigma2 * sol.xtx_inv[0, 0])
    if not se > 0:
        raise DegenerateRegressionError("ADF slope has zero standard error", "stationarity")
    gamma = float(sol.coef[0])
    tau = gamma / se
    reg = MODES[mode]
    p = _mackinnon.pvalue(tau, reg)
    return AdfResult(
        gamma_hat=gamma,
        se_gamma=se,
        t_stat=tau,
        p_value=p,
        deterministic_mode=mode,
        lag_order=lag_order,
        nobs=nobs,
        reject_at={lvl: bool(p < lvl) for lvl in levels},
        critical_values=_mackinnon.critical_values(nobs, reg),
    )


@dataclass(frozen=True)
class DampedSeries:
    mu: np.ndarray
    nu: np.ndarray


def damping_transform(x) -> DampedSeries:
    """mu = exp(-x^2/2) and nu = x * mu, elementwise.

    mu is floored at the smallest positive double, so it never reaches zero.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("damping transform needs finite inputs", "stationarity")
    # beyond |x| ~ 38.6 the exponential underflows; keep mu strictly positive
    with np.errstate(over="ignore"):
        mu = np.maximum(np.exp(-0.5 * x * x), _TINY)
    return DampedSeries(mu=mu, nu=x * mu)


def rolling_first_diff_std(s) -> np.ndarray:
    """Expanding-window population std of the first differences.

    Element ``i`` is the std of ``diff(s)[:i+1]``; the result is one element
    shorter than ``s``.
    """
    s = np.asarray(s, dtype=float)
    if s.ndim != 1 or len(s) < 3:
        raise InsufficientDataError("need a series of length >= 3", "stationarity")
    d = np.diff(s)
    # shifting by d[0] keeps constant-difference prefixes exactly zero
    d = d - d[0]
    k = np.arange(1, len(d) + 1)
    mean = np.cumsum(d) / k
    var = np.cumsum(d * d) / k - mean * mean
    return np.sqrt(np.clip(var, 0.0, None))


def simulate_random_walk(n: int, sigma: float = 1.0, seed: int | None = None) -> np.ndarray:
    """X_1..X_n of a Gaussian random walk started at X_0 = 0."""
    if n < 1:
        raise ConfigurationError("random walk length must be >= 1", "stationarity")
    if not sigma > 0:
        raise ConfigurationError("step std must be positive", "stationarity")
    return np.cumsum(_rng.generator(seed).normal(0.0, sigma, size=n))


def _walk_block(rng: np.random.Generator, paths: int, n: int, sigma: float) -> np.ndarray:
    return np.cumsum(rng.normal(0.0, sigma, size=(paths, n)), axis=1)


def _block_sizes(paths: int, block: int) -> list[int]:
    sizes = [block] * (paths // block)
    if paths % block:
        sizes.append(paths % block)
    return sizes


def simulate_random_walk_paths(n: int, paths: int, sigma: float = 1.0,
                               seed: int | None = None, block: int = PATH_BLOCK) -> np.ndarray:
    """``paths`` independent walks of length ``n`` as a (paths, n) array.

    Each block of ``block`` paths draws from its own Philox substream.
    """
    if n < 1 or paths < 1:
        raise ConfigurationError("need n >= 1 and paths >= 1", "stationarity")
    if not sigma > 0:
        raise ConfigurationError("step std must be positive", "stationarity")
    sizes = _block_sizes(paths, block)
    streams = _rng.substreams(seed, len(sizes))
    return np.vstack([_walk_block(g, m, n, sigma) for g, m in zip(streams, sizes)])


@dataclass(frozen=True)
class MomentCheckRow:
    t: int
    mc_estimate: float
    mc_std_error: float
    theory: float
    z_score: float


@dataclass(frozen=True)
class MomentCheckReport:
    rows: list
    paths: int
    seed: int | None

    def max_abs_z(self) -> float:
        return max(abs(r.z_score) for r in self.rows)


def damped_second_moment(t) -> float:
    """Closed form E[exp(-X_t^2)] = 1/sqrt(2t+1) for a unit-variance random walk."""
    return 1.0 / math.sqrt(2 * t + 1)


def appendix_moment_check(horizons, paths: int = 100_000, seed: int | None = 0,
                          workers: int = 1, block: int = PATH_BLOCK) -> MomentCheckReport:
    """Monte Carlo estimate of E[exp(-X_t^2)] for unit-step random walks.

    Partial sums are accumulated per block and combined in block order, so the
    report depends only on ``seed``, ``paths`` and ``block``.
    """
    if paths < 1000:
        raise ConfigurationError("moment check needs at least 1000 paths", "stationarity")
    hs = [int(t) for t in horizons]
    if not hs or min(hs) < 0:
        raise ConfigurationError("horizons must be nonnegative integers", "stationarity")
    tmax = max(max(hs), 1)
    cols = np.array([t - 1 for t in hs])
    sizes = _block_sizes(paths, block)
    streams = _rng.substreams(seed, len(sizes))

    def run(item):
        g, m = item
        walks = _walk_block(g, m, tmax, 1.0)
        v = np.ones((m, len(hs)))
        pos = cols >= 0
        v[:, pos] = np.exp(-walks[:, cols[pos]] ** 2)
        return v.sum(axis=0), (v * v).sum(axis=0)

    items = list(zip(streams, sizes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, items))
    else:
        parts = [run(it) for it in items]
    s1 = np.zeros(len(hs))
    s2 = np.zeros(len(hs))
    for a, b in parts:
        s1 += a
        s2 += b

    rows = []
    for i, t in enumerate(hs):
        est = s1[i] / paths
        var = max(s2[i] / paths - est * est, 0.0) * paths / (paths - 1)
        se = math.sqrt(var / paths)
        theory = damped_second_moment(t)
        # t = 0 has no sampling noise: X_0 = 0 on every path
        z = (est - theory) / se if se > 0 else 0.0
        rows.append(MomentCheckRow(t, float(est), se, theory, float(z)))
    return MomentCheckReport(rows=rows, paths=paths, seed=seed)
