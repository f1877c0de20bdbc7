"""Signal chain of the denoising benchmark.

i.i.d. +/-1 source -> memoryless nonlinearity -> independent Gaussian
sensor noise per node -> time embedding into regressors.
"""

import numpy as np
from numpy.polynomial.hermite_e import hermegauss

from utils.errors import NegativeVarianceError, SequenceTooShortError, ValidationError

CHANNEL_CURVATURE = 0.9


def generate_source(n: int, seed: int) -> np.ndarray:
    if n < 1:
        raise ValidationError(f"source length must be positive, got {n}")
    rng = np.random.default_rng(seed)
    return 2.0 * rng.integers(0, 2, size=n).astype(float) - 1.0


def apply_channel(s) -> np.ndarray:
    """Element-wise ``x - 0.9 x^2``."""
    s = np.asarray(s, dtype=float)
    return s - CHANNEL_CURVATURE * s ** 2


def observe(z, node_count: int, noise_variance: float, seed: int) -> np.ndarray:
    """Noisy copies of the clean signal, one row per node."""
    if noise_variance < 0:
        raise NegativeVarianceError(f"noise variance must be nonnegative, got {noise_variance}")
    if node_count < 1:
        raise ValidationError(f"need at least one node, got {node_count}")
    z = np.asarray(z, dtype=float)
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, np.sqrt(noise_variance), size=(node_count, z.shape[0]))
    return z[np.newaxis, :] + noise


def embed(u, T: int) -> np.ndarray:
    """Tapped-delay-line regressors; row ``k`` is ``(u[k+T-1], ..., u[k])``."""
    u = np.asarray(u, dtype=float)
    if T < 1:
        raise ValidationError(f"embedding length must be positive, got {T}")
    if u.shape[0] < T:
        raise SequenceTooShortError(f"sequence of length {u.shape[0]} is shorter than embedding length {T}")
    windows = np.lib.stride_tricks.sliding_window_view(u, T)
    return np.ascontiguousarray(windows[:, ::-1])


def clean_power(z) -> float:
    return float(np.mean(np.asarray(z, dtype=float) ** 2))


def snr_to_noise_variance(signal_power: float, snr_db: float) -> float:
    return signal_power / 10.0 ** (snr_db / 10.0)


def bayes_mse(noise_variance: float, points: int = 128) -> float:
    """Smallest MSE any estimator of the clean sample reaches from its own
    noisy observation.

    The channel maps the source to two levels; the conditional-mean
    estimator is ``mid + half * tanh(half * (u - mid) / noise_variance)``.
    Its error is averaged over the noise with Gauss-Hermite quadrature.
    Past taps carry no extra information about an i.i.d. source.
    """
    if noise_variance < 0:
        raise NegativeVarianceError(f"noise variance must be nonnegative, got {noise_variance}")
    if noise_variance == 0:
        return 0.0
    high, low = apply_channel([1.0, -1.0])
    half = 0.5 * (high - low)
    nodes, weights = hermegauss(points)
    weights = weights / np.sqrt(2.0 * np.pi)
    noise = np.sqrt(noise_variance) * nodes
    miss = half * (1.0 - np.tanh(half * (half + noise) / noise_variance))
    return float(np.sum(weights * miss ** 2))
