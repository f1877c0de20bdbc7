from abc import ABC, abstractmethod
import logging

import numpy as np

from utils.errors import DimensionMismatchError, GraphSizeMismatchError, NonFiniteInputError

logger = logging.getLogger(__name__)


def as_regressors(xs, node_count: int) -> np.ndarray:
    """Coerce per-node regressors to shape (node_count, dim).

    A flat vector of length ``node_count`` is read as one scalar regressor
    per node.
    """
    arr = np.asarray(xs, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, np.newaxis]
    if arr.ndim != 2:
        raise DimensionMismatchError(f"regressors must be (nodes, dim), got shape {arr.shape}")
    if arr.shape[0] != node_count:
        raise GraphSizeMismatchError(f"expected {node_count} regressors, got {arr.shape[0]}")
    return arr


def as_desired(ds, node_count: int) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(ds, dtype=float))
    if arr.shape != (node_count,):
        raise GraphSizeMismatchError(f"expected {node_count} desired values, got shape {arr.shape}")
    return arr


def check_finite(*arrays):
    for arr in arrays:
        if not np.all(np.isfinite(arr)):
            raise NonFiniteInputError("input contains NaN or Inf")


class AdaptiveFilter(ABC):
    """Abstract base class for every filter the simulator runs.

    All filters follow the same per-iteration contract: one regressor and one
    desired value per node go in, one a-priori error per node comes out.
    Single-node algorithms run an independent copy at every node.
    """

    name: str = "filter"

    def __init__(self, node_count: int):
        self.node_count = node_count

    @abstractmethod
    def step(self, xs: np.ndarray, ds: np.ndarray) -> np.ndarray:
        """Consume one sample per node and return the a-priori errors."""

    def run(self, regressors: np.ndarray, desired: np.ndarray) -> np.ndarray:
        """Stream a whole record.

        ``regressors`` has shape (iterations, nodes, dim) and ``desired``
        (iterations, nodes). Returns the (iterations, nodes) error matrix.
        """
        regressors = np.asarray(regressors, dtype=float)
        desired = np.asarray(desired, dtype=float)
        if regressors.shape[0] != desired.shape[0]:
            raise DimensionMismatchError(
                f"{regressors.shape[0]} regressor rows but {desired.shape[0]} desired rows"
            )
        errors = np.empty(desired.shape, dtype=float)
        for n in range(desired.shape[0]):
            errors[n] = self.step(regressors[n], desired[n])
        return errors

    def _validate(self, xs, ds):
        xs = as_regressors(xs, self.node_count)
        ds = as_desired(ds, self.node_count)
        check_finite(xs, ds)
        return xs, ds
