"""Seeded generators and a brute-force normal-equation oracle for testing."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _rng
from .data import ObservationTable
from .errors import ConfigurationError, SingularDesignError
from .regression import DesignMatrix
from .stationarity import damping_transform

GENERATOR_KINDS = ("random_walk", "ar1", "iid_normal", "exact_linear_model")

# layout of model-1-1: y_lag1..4, cay, (mu, nu) for dy, ep, bm
DEFAULT_COEFFICIENTS = (0.08, -0.05, 0.04, -0.03,
                        0.04,
                        -0.12, 2.0,
                        -0.02, 0.25,
                        0.04, -0.06)
DEFAULT_BURN_IN = 100


@dataclass(frozen=True)
class GeneratorSpec:
    """What to simulate.

    ``coefficients`` follows the model-1-1 column layout when ``include_cay``
    is true, and the model-1-4 layout (no cay entry) otherwise.
    """

    kind: str
    length: int
    noise_std: float = 1.0
    seed: int | None = 0
    phi: float = 0.0
    coefficients: tuple = field(default=DEFAULT_COEFFICIENTS)
    include_cay: bool = True
    frequency: str = "quarterly"
    start_period: int = 1952 * 4

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise ConfigurationError(f"unknown generator '{self.kind}'; expected one of "
                                     f"{GENERATOR_KINDS}", "synthetic")
        if self.length < 1:
            raise ConfigurationError("length must be >= 1", "synthetic")
        if not self.noise_std >= 0:
            raise ConfigurationError("noise std must be >= 0", "synthetic")
        if self.kind == "ar1" and not abs(self.phi) < 1:
            raise ConfigurationError("ar1 needs |phi| < 1", "synthetic")
        if self.kind == "exact_linear_model":
            want = 4 + int(self.include_cay) + 6
            if len(self.coefficients) != want:
                raise ConfigurationError(f"exact_linear_model needs {want} coefficients, got "
                                         f"{len(self.coefficients)}", "synthetic")
            if self.length < 8:
                raise ConfigurationError("exact_linear_model needs length >= 8", "synthetic")


def generate(spec: GeneratorSpec):
    """A 1-d array for the series kinds, an :class:`ObservationTable` for exact_linear_model."""
    g = _rng.generator(spec.seed)
    n, s = spec.length, spec.noise_std
    if spec.kind == "iid_normal":
        return g.normal(0.0, 1.0, n) * s
    if spec.kind == "random_walk":
        return np.cumsum(g.normal(0.0, 1.0, n) * s)
    if spec.kind == "ar1":
        e = g.normal(0.0, 1.0, n) * s
        x = np.empty(n)
        x[0] = e[0] / np.sqrt(1.0 - spec.phi**2)
        for t in range(1, n):
            x[t] = spec.phi * x[t - 1] + e[t]
        return x
    return _exact_linear_table(spec, g)


def _ar1_path(g, n, phi, sd):
    e = g.normal(0.0, sd * np.sqrt(1.0 - phi**2), n)
    x = np.empty(n)
    x[0] = g.normal(0.0, sd)
    for t in range(1, n):
        x[t] = phi * x[t - 1] + e[t]
    return x


def _exact_linear_table(spec: GeneratorSpec, g: np.random.Generator) -> ObservationTable:
    T = spec.length
    total = T + DEFAULT_BURN_IN
    # persistent latent drivers; dy stays in (0.02, 0.10) so prices remain positive
    z_dy = _ar1_path(g, total, 0.98, 1.0)
    z_ep = _ar1_path(g, total, 0.98, 0.5)
    z_bm = _ar1_path(g, total, 0.98, 0.5)
    cay = _ar1_path(g, total, 0.90, 0.5)
    dy = 0.02 + 0.08 / (1.0 + np.exp(-z_dy))
    ep = np.exp(z_ep - 0.7)
    bm = np.exp(z_bm)
    noise = g.normal(0.0, 1.0, total) * spec.noise_std

    c = np.asarray(spec.coefficients, dtype=float)
    theta = c[:4]
    k = 4
    b_cay = 0.0
    if spec.include_cay:
        b_cay, k = c[4], 5
    pairs = c[k:].reshape(3, 2)
    exog = b_cay * cay
    for (alpha, beta), x in zip(pairs, (dy, ep, bm)):
        d = damping_transform(x)
        exog = exog + alpha * d.mu + beta * d.nu

    y = np.zeros(total)
    for t in range(1, total):
        lags = [y[t - j] if t - j >= 0 else 0.0 for j in range(1, 5)]
        y[t] = float(np.dot(theta, lags)) + exog[t - 1] + noise[t]

    b = DEFAULT_BURN_IN
    y, dy, ep, bm, cay = y[b:], dy[b:], ep[b:], bm[b:], cay[b:]
    price = np.empty(T)
    div = np.empty(T)
    price[0] = 100.0
    div[0] = dy[0] * price[0]
    for t in range(1, T):
        div[t] = dy[t] * price[t - 1]
        price[t] = price[t - 1] * (1.0 + y[t] - dy[t])
    if np.any(price <= 0):
        raise ConfigurationError("generated prices went nonpositive; reduce coefficients or "
                                 "noise", "synthetic")
    step = 4 if spec.frequency == "quarterly" else 12
    start = spec.start_period if spec.frequency == "quarterly" else spec.start_period // 4 * step
    return ObservationTable(
        period_index=np.arange(start, start + T),
        price=price,
        dividends=div,
        earnings=ep * price,
        book_to_market=bm,
        cay=cay if spec.include_cay else None,
        frequency=spec.frequency,
    )


def normal_equation_oracle(design: DesignMatrix) -> np.ndarray:
    """Literal (X'X)^{-1} X'y.  For cross-checking only; it squares the condition number."""
    X, y = np.asarray(design.X, dtype=float), np.asarray(design.y, dtype=float)
    xtx = X.T @ X
    if X.shape[0] < X.shape[1] or np.linalg.cond(xtx) > 1.0 / np.finfo(float).eps:
        raise SingularDesignError("normal equations are singular", "synthetic")
    return np.linalg.solve(xtx, X.T @ y)
