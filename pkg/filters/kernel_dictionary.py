import logging

import numpy as np

from kernels.kernel_functions import KernelSpec, kernel_values
from utils.errors import DimensionMismatchError, ValidationError

logger = logging.getLogger(__name__)


class KernelDictionary:
    """Growing kernel expansion shared by KLMS and diffusion-KLMS.

    Entry ``i`` stores the regressor snapshot of every node at step ``i``
    (shape ``(nodes, dim)``) and one coefficient per node. The function
    estimate of node ``q`` is ``mu * sum_i coeff[i, q] * g_q(i, query)``
    where ``g_q`` is the node-weighted kernel between the snapshot and the
    query.
    """

    def __init__(self, node_count: int, dim: int, step_size: float, kernel: KernelSpec,
                 budget: int = None, capacity: int = 256):
        if not step_size > 0:
            raise ValidationError(f"step size must be positive, got {step_size}")
        if budget is not None and budget < 1:
            raise ValidationError(f"dictionary budget must be positive, got {budget}")
        self.node_count = node_count
        self.dim = dim
        self.step_size = float(step_size)
        self.kernel = kernel
        self.budget = budget
        self._centers = np.empty((capacity, node_count, dim))
        self._coefficients = np.empty((capacity, node_count))
        self._start = 0
        self._stop = 0
        self.accepted = 0

    def __len__(self) -> int:
        return self._stop - self._start

    @property
    def centers(self) -> np.ndarray:
        return self._centers[self._start:self._stop]

    @property
    def coefficients(self) -> np.ndarray:
        return self._coefficients[self._start:self._stop]

    def append(self, snapshot, coefficients):
        snap = np.asarray(snapshot, dtype=float).reshape(self.node_count, self.dim)
        coeff = np.asarray(coefficients, dtype=float).reshape(self.node_count)

        if self._stop == self._centers.shape[0]:
            self._grow()
        self._centers[self._stop] = snap
        self._coefficients[self._stop] = coeff
        self._stop += 1
        self.accepted += 1

        if self.budget is not None and len(self) > self.budget:
            self._start += 1
            if self._start == 1 or self._start % 1000 == 0:
                logger.debug(f"Dictionary budget {self.budget} reached, evicting oldest center")

    def _grow(self):
        live = len(self)
        capacity = max(2 * live, 256)
        centers = np.empty((capacity, self.node_count, self.dim))
        coefficients = np.empty((capacity, self.node_count))
        centers[:live] = self.centers
        coefficients[:live] = self.coefficients
        self._centers, self._coefficients = centers, coefficients
        self._start, self._stop = 0, live

    def node_kernels(self, query) -> np.ndarray:
        """Kernel between the query and every stored regressor, shape (entries, nodes)."""
        p = np.atleast_1d(np.asarray(query, dtype=float))
        if p.shape != (self.dim,):
            raise DimensionMismatchError(f"query has shape {p.shape}, dictionary stores dimension {self.dim}")
        return kernel_values(self.kernel, self.centers, p)

    def expansion(self, node_weights, query, node: int) -> float:
        """Evaluate node ``node``'s estimate at ``query``."""
        if len(self) == 0:
            return 0.0
        w = np.asarray(node_weights, dtype=float)
        if w.shape != (self.node_count,):
            raise DimensionMismatchError(f"{w.shape} node weights for {self.node_count} nodes")
        g = np.sum(self.node_kernels(query) * w, axis=1)
        return self.step_size * float(np.sum(self.coefficients[:, node] * g))
