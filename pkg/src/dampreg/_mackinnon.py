"""Dickey-Fuller response surfaces for a single series.

Approximate p-values use the MacKinnon (1994) asymptotic surfaces and finite
sample critical values the MacKinnon (2010) surfaces.  Keys: ``"n"`` no
deterministic terms, ``"c"`` constant, ``"ct"`` constant and linear trend.
"""

import numpy as np
from scipy.stats import norm

TAU_STAR = {"n": -1.04, "c": -1.61, "ct": -2.89}
TAU_MIN = {"n": -19.04, "c": -18.83, "ct": -16.18}
TAU_MAX = {"n": np.inf, "c": 2.74, "ct": 0.7}

# polynomial in tau, constant term first
TAU_SMALL_P = {
    "n": np.array([0.6344, 1.2378, 3.2496e-2]),
    "c": np.array([2.1659, 1.4412, 3.8269e-2]),
    "ct": np.array([3.2512, 1.6047, 4.9588e-2]),
}
TAU_LARGE_P = {
    "n": np.array([0.4797, 9.3557e-1, -0.6999e-1, 3.3066e-2]),
    "c": np.array([1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2]),
    "ct": np.array([2.5261, 6.1654e-1, -3.7956e-1, -6.0285e-2]),
}

# rows: 1%, 5%, 10%; columns: coefficients on 1, 1/T, 1/T^2, 1/T^3
TAU_2010 = {
    "n": np.array([[-2.56574, -2.2358, -3.627, 0.0],
                   [-1.94100, -0.2686, -3.365, 31.223],
                   [-1.61682, 0.2656, -2.714, 25.364]]),
    "c": np.array([[-3.43035, -6.5393, -16.786, -79.433],
                   [-2.86154, -2.8903, -4.234, -40.040],
                   [-2.56677, -1.5384, -2.809, 0.0]]),
    "ct": np.array([[-3.95877, -9.0531, -28.428, -134.155],
                    [-3.41049, -4.3904, -9.036, -45.374],
                    [-3.12705, -2.5856, -3.925, -22.380]]),
}
CRIT_LEVELS = (0.01, 0.05, 0.10)


def pvalue(tau: float, regression: str) -> float:
    if tau > TAU_MAX[regression]:
        return 1.0
    if tau < TAU_MIN[regression]:
        return 0.0
    coef = TAU_SMALL_P[regression] if tau <= TAU_STAR[regression] else TAU_LARGE_P[regression]
    return float(norm.cdf(np.polynomial.polynomial.polyval(tau, coef)))


def critical_values(nobs: int, regression: str) -> dict[float, float]:
    inv = 1.0 / nobs
    powers = np.array([1.0, inv, inv**2, inv**3])
    return {lvl: float(row @ powers) for lvl, row in zip(CRIT_LEVELS, TAU_2010[regression])}
