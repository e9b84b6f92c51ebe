"""Least squares by column-pivoted QR, shared by the regression and ADF code."""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import DampregError, SingularDesignError

# reciprocal condition number below which a design is treated as singular
RCOND_MIN = 1e-12


@dataclass(frozen=True)
class QRSolution:
    coef: np.ndarray
    residuals: np.ndarray
    xtx_inv: np.ndarray
    rcond: float


def qr_lstsq(X: np.ndarray, y: np.ndarray, labels=None, module="regression",
             error: type[DampregError] = SingularDesignError) -> QRSolution:
    """Solve min ||y - X b|| without forming X'X.

    Raises ``error`` naming the offending column when the pivoted R factor
    shows (near) linear dependence.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, m = X.shape
    if m == 0:
        raise error("design has no columns", module)
    Q, R, piv = linalg.qr(X, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    rcond = float(diag[-1] / diag[0]) if diag[0] > 0 else 0.0
    if rcond < RCOND_MIN:
        # with pivoting the trailing column is the one best explained by the rest
        bad = int(piv[-1]) if rcond > 0 or diag[0] > 0 else int(piv[0])
        name = labels[bad] if labels is not None else f"column {bad}"
        raise error(f"design is rank deficient; column '{name}' is (nearly) "
                    f"linearly dependent on the others (rcond={rcond:.3e})", module)
    z = Q.T @ y
    b_piv = linalg.solve_triangular(R, z)
    Rinv = linalg.solve_triangular(R, np.eye(m))
    inv_piv = Rinv @ Rinv.T
    coef = np.empty(m)
    coef[piv] = b_piv
    xtx_inv = np.empty((m, m))
    xtx_inv[np.ix_(piv, piv)] = inv_piv
    resid = y - X @ coef
    return QRSolution(coef=coef, residuals=resid, xtx_inv=xtx_inv, rcond=rcond)
