"""Closed-form learning-curve predictions for diffusion-KLMS."""

from dataclasses import dataclass
import logging
import math

import numpy as np

from analysis.moments import KernelMoments
from utils.errors import NegativeVarianceError, NonPositiveKernelMeanError, ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TheoreticalCurve:
    """Predicted ``E|y~_q(n)|^2`` for n = 0 .. n_steps."""

    values: np.ndarray
    mu: float
    noise_variance: float
    initial: float

    def __len__(self) -> int:
        return len(self.values)

    @property
    def limit(self) -> float:
        return float(self.values[-1])


def _check(mu: float, noise_variance: float):
    if not mu > 0:
        raise ValidationError(f"step size must be positive, got {mu}")
    if noise_variance < 0:
        raise NegativeVarianceError(f"noise variance must be nonnegative, got {noise_variance}")


def contraction_factor(moments: KernelMoments, mu: float) -> float:
    """Per-iteration factor ``1 - 2 mu E[g]`` of the MSE recursion."""
    return 1.0 - 2.0 * mu * moments.g_mean


def transient_curve(moments: KernelMoments, mu: float, noise_variance: float, initial: float,
                    n_steps: int) -> TheoreticalCurve:
    """Iterate ``m(n) = (1 - 2 mu E[g]) m(n-1) + mu^2 s_n^2 E[g^2]`` from
    ``m(0) = initial``.

    The recursion keeps terms up to first order in mu apart from the noise
    term; its factor goes negative once ``mu > 1 / (2 E[g])``.
    """
    _check(mu, noise_variance)
    if initial < 0:
        raise NegativeVarianceError(f"initial MSE must be nonnegative, got {initial}")
    if n_steps < 1:
        raise ValidationError(f"n_steps must be at least 1, got {n_steps}")

    a = contraction_factor(moments, mu)
    if a < 0:
        logger.warning(f"First-order factor {a:.3f} < 0 at mu={mu}; the curve oscillates")
    b = mu ** 2 * noise_variance * moments.g_sq_mean

    values = np.empty(n_steps + 1)
    values[0] = initial
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, n_steps + 1):
            values[n] = a * values[n - 1] + b
    return TheoreticalCurve(values=values, mu=float(mu), noise_variance=float(noise_variance),
                            initial=float(initial))


def steady_state_mse(moments: KernelMoments, mu: float, noise_variance: float) -> float:
    """Misadjustment ``(mu s_n^2 / 2) E|g|``."""
    _check(mu, noise_variance)
    return 0.5 * mu * noise_variance * moments.g_abs_mean


def fixed_point_mse(moments: KernelMoments, mu: float, noise_variance: float) -> float:
    """Limit of the first-order recursion, ``mu s_n^2 E[g^2] / (2 E[g])``."""
    _check(mu, noise_variance)
    if moments.g_mean <= 0:
        raise NonPositiveKernelMeanError(f"kernel mean {moments.g_mean} has no fixed point")
    return mu * noise_variance * moments.g_sq_mean / (2.0 * moments.g_mean)


def step_size_range(moments: KernelMoments):
    """Open interval ``(0, 2 / E[g])`` of convergent step sizes."""
    if moments.g_mean <= 0:
        raise NonPositiveKernelMeanError(f"kernel mean must be positive, got {moments.g_mean}")
    return 0.0, 2.0 / moments.g_mean


def mean_square_step_bound(moments: KernelMoments) -> float:
    """Largest step size ``2 / E[g_self]`` for which one update does not
    amplify the a-posteriori error at its own regressor.

    Tighter than :func:`step_size_range` whenever the kernel peaks far above
    its cross-instant mean.
    """
    if moments.g_self_mean <= 0:
        raise NonPositiveKernelMeanError(f"same-instant kernel mean must be positive, got {moments.g_self_mean}")
    return 2.0 / moments.g_self_mean


def time_constant(values) -> int:
    """First iteration at which the curve has decayed to 1/e of its start.

    Returns None when it never does.
    """
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return None
    hits = np.flatnonzero(arr <= math.exp(-1.0) * arr[0])
    return int(hits[0]) if hits.size else None
