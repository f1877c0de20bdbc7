"""Reference solutions and spectral checks for the linear baselines."""

import logging

import numpy as np
from scipy import linalg

from config.settings import (
    MAX_CONDITION_NUMBER,
    POWER_ITERATION_MAX_ITER,
    POWER_ITERATION_TOL,
    SYMMETRY_TOLERANCE,
)
from utils.errors import DimensionMismatchError, NonSymmetricInputError, SingularMatrixError

logger = logging.getLogger(__name__)


def _weighted(c_row, stack) -> np.ndarray:
    c = np.asarray(c_row, dtype=float)
    arr = np.asarray(stack, dtype=float)
    if arr.shape[0] != c.shape[0]:
        raise DimensionMismatchError(f"{c.shape[0]} weights for {arr.shape[0]} nodes")
    return np.tensordot(c, arr, axes=1)


def distributed_wiener(correlations, cross, c_row) -> np.ndarray:
    """Local Wiener estimate ``(sum c_l R_l)^-1 (sum c_l r_l)``."""
    R = _weighted(c_row, correlations)
    r = _weighted(c_row, cross)
    if R.shape != (r.shape[0], r.shape[0]):
        raise DimensionMismatchError(f"correlation shape {R.shape} incompatible with cross-correlation {r.shape}")

    cond = np.linalg.cond(R)
    if not np.isfinite(cond) or cond >= MAX_CONDITION_NUMBER:
        raise SingularMatrixError(f"combined correlation matrix is singular (condition number {cond:.3g})")
    return linalg.solve(R, r)


def power_iteration(matrix, tol: float = POWER_ITERATION_TOL,
                    max_iter: int = POWER_ITERATION_MAX_ITER) -> float:
    """Dominant eigenvalue magnitude of a symmetric matrix."""
    M = np.asarray(matrix, dtype=float)
    n = M.shape[0]
    v = np.random.default_rng(0).standard_normal(n)
    v /= np.linalg.norm(v)

    estimate = 0.0
    for it in range(max_iter):
        w = M @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        rayleigh = abs(float(v @ w))
        v = w / norm
        if abs(rayleigh - estimate) <= tol * max(1.0, rayleigh):
            return rayleigh
        estimate = rayleigh
    logger.warning(f"Power iteration stopped after {max_iter} iterations without reaching tol={tol}")
    return estimate


def spectral_radius_check(correlations, c_row):
    """Verify ``rho(sum c_l R_l) <= max_l rho(R_l)`` for one neighbourhood.

    Returns ``(rho_combined, rho_max_individual, bound_holds)``.
    """
    mats = np.asarray(correlations, dtype=float)
    for l, R in enumerate(mats):
        scale = max(1.0, float(np.max(np.abs(R))))
        if not np.allclose(R, R.T, atol=SYMMETRY_TOLERANCE * scale, rtol=0.0):
            raise NonSymmetricInputError(f"correlation matrix of node {l} is not symmetric")

    rho_combined = power_iteration(_weighted(c_row, mats))
    rho_max = max(power_iteration(R) for R in mats)
    bound_holds = rho_combined <= rho_max * (1.0 + 1e-8) + 1e-12
    return rho_combined, rho_max, bool(bound_holds)
