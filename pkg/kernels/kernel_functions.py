import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.spatial.distance import cdist

from utils.errors import DimensionMismatchError, ValidationError


class KernelFamily(str, Enum):
    GAUSSIAN = "gaussian"
    POLYNOMIAL = "polynomial"


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family and its parameters.

    The Gaussian kernel carries the density normalisation
    ``1/sqrt(2*pi*sigma^2)`` unless ``normalized`` is False, in which case it
    is the conventional unit-peak RBF.
    """

    family: KernelFamily = KernelFamily.GAUSSIAN
    sigma: float = 0.1
    degree: int = 2
    offset: float = 1.0
    normalized: bool = True

    def __post_init__(self):
        object.__setattr__(self, "family", KernelFamily(self.family))
        if self.family is KernelFamily.GAUSSIAN and not self.sigma > 0:
            raise ValidationError(f"kernel spread must be positive, got {self.sigma}")
        if self.family is KernelFamily.POLYNOMIAL and (int(self.degree) != self.degree or self.degree < 1):
            raise ValidationError(f"polynomial degree must be a positive integer, got {self.degree}")

    @property
    def peak(self) -> float:
        """Gaussian value at identical arguments."""
        if not self.normalized:
            return 1.0
        return 1.0 / math.sqrt(2.0 * math.pi * self.sigma ** 2)


def _as_vector(x) -> np.ndarray:
    return np.atleast_1d(np.asarray(x, dtype=float))


def kernel_pairs(spec: KernelSpec, xs, ys) -> np.ndarray:
    """Kernel over broadcast pairs; inputs share the last (feature) axis."""
    a = np.asarray(xs, dtype=float)
    b = np.asarray(ys, dtype=float)
    if a.ndim == 0 or b.ndim == 0 or a.shape[-1] != b.shape[-1]:
        raise DimensionMismatchError(f"feature dimensions differ: {a.shape} vs {b.shape}")

    if spec.family is KernelFamily.GAUSSIAN:
        sqdist = np.sum((a - b) ** 2, axis=-1)
        return spec.peak * np.exp(-sqdist / (2.0 * spec.sigma ** 2))
    return (np.sum(a * b, axis=-1) + spec.offset) ** spec.degree


def kernel_values(spec: KernelSpec, centers, query) -> np.ndarray:
    """Kernel between every center and one query.

    ``centers`` has shape ``(..., dim)``; the result drops the last axis.
    """
    return kernel_pairs(spec, centers, _as_vector(query))


def kernel_eval(spec: KernelSpec, x, y) -> float:
    a, b = _as_vector(x), _as_vector(y)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"x has dimension {a.shape[0]}, y has {b.shape[0]}")
    return float(kernel_values(spec, a[np.newaxis, :], b)[0])


def combined_kernel(spec: KernelSpec, weights, centers, query) -> float:
    """C-weighted kernel combination ``sum_l w[l] * k(centers[l], query)``."""
    w = np.asarray(weights, dtype=float)
    pts = np.atleast_2d(np.asarray(centers, dtype=float))
    if w.shape[0] != pts.shape[0]:
        raise DimensionMismatchError(f"{w.shape[0]} weights for {pts.shape[0]} centers")
    return float(np.sum(w * kernel_values(spec, pts, query)))


def gram_matrix(spec: KernelSpec, points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, np.newaxis]
    if spec.family is KernelFamily.GAUSSIAN:
        sqdist = cdist(pts, pts, metric="sqeuclidean")
        return spec.peak * np.exp(-sqdist / (2.0 * spec.sigma ** 2))
    return (pts @ pts.T + spec.offset) ** spec.degree
