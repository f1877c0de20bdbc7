import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from config.settings import PRINTED_ROW_TOLERANCE, ROW_SUM_TOLERANCE
from utils.errors import (
    ConfigInvalidError,
    DimensionMismatchError,
    NegativeEntryError,
    NotSquareError,
    RowSumViolationError,
    ZeroNodesError,
)

logger = logging.getLogger(__name__)


class Orientation(str, Enum):
    ROW_STOCHASTIC = "row"


@dataclass(frozen=True)
class StochasticMatrix:
    """Combining weights over the node graph.

    Row ``q`` holds the weights node ``q`` gives to its neighbours, so
    ``combine`` computes ``out[q] = sum_l M[q, l] * values[l]``. The entries
    array is read-only once validated.
    """

    entries: np.ndarray
    orientation: Orientation = Orientation.ROW_STOCHASTIC

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def row(self, q: int) -> np.ndarray:
        return self.entries[q]

    def support(self) -> np.ndarray:
        return self.entries > 0

    def tolist(self) -> list:
        return self.entries.tolist()


def validate_stochastic(matrix, tolerance: float = ROW_SUM_TOLERANCE) -> StochasticMatrix:
    """Check squareness, nonnegativity and unit row sums."""
    arr = np.array(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise NotSquareError(f"combining matrix must be square, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ZeroNodesError("combining matrix has no rows")

    negative = np.argwhere(arr < 0)
    if negative.size:
        q, l = negative[0]
        raise NegativeEntryError(f"entry ({q},{l}) is negative: {arr[q, l]}")

    deviations = arr.sum(axis=1) - 1.0
    for q, dev in enumerate(deviations):
        if abs(dev) > tolerance:
            raise RowSumViolationError(q, float(dev))

    arr.setflags(write=False)
    return StochasticMatrix(entries=arr)


def normalize_printed(matrix, tolerance: float = PRINTED_ROW_TOLERANCE) -> StochasticMatrix:
    """Accept matrices whose rows were rounded for print (0.666/0.333).

    Rows off by at most ``tolerance`` are rescaled to sum to one; larger
    deviations still raise ``RowSumViolationError``.
    """
    arr = np.array(matrix, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise NotSquareError(f"combining matrix must be square, got shape {arr.shape}")
    if np.any(arr < 0):
        q, l = np.argwhere(arr < 0)[0]
        raise NegativeEntryError(f"entry ({q},{l}) is negative: {arr[q, l]}")

    sums = arr.sum(axis=1)
    for q, total in enumerate(sums):
        dev = total - 1.0
        if abs(dev) > tolerance:
            raise RowSumViolationError(q, float(dev))
        if abs(dev) > ROW_SUM_TOLERANCE:
            logger.warning(f"Renormalising row {q} of printed matrix (sum {total:.6f})")
            arr[q] = arr[q] / total
    return validate_stochastic(arr)


def combine(matrix: StochasticMatrix, values) -> np.ndarray:
    """Convex combination of per-node values.

    ``values`` is a length-N vector or an (N, k) array of per-node vectors.
    """
    vals = np.asarray(values, dtype=float)
    if vals.ndim == 0 or vals.shape[0] != matrix.size:
        raise DimensionMismatchError(
            f"matrix is {matrix.size}x{matrix.size} but got {vals.shape[0] if vals.ndim else 0} values"
        )
    # explicit multiply-and-sum keeps the reduction order fixed run to run
    if vals.ndim == 1:
        return np.sum(matrix.entries * vals[np.newaxis, :], axis=1)
    return np.sum(matrix.entries[:, :, np.newaxis] * vals[np.newaxis, :, :], axis=1)


def uniform_matrix(n: int) -> StochasticMatrix:
    if n < 1:
        raise ZeroNodesError(f"need at least one node, got {n}")
    return validate_stochastic(np.full((n, n), 1.0 / n))


def identity_matrix(n: int) -> StochasticMatrix:
    if n < 1:
        raise ZeroNodesError(f"need at least one node, got {n}")
    return validate_stochastic(np.eye(n))


def random_stochastic(n: int, seed: int, adjacency: np.ndarray = None) -> StochasticMatrix:
    """Rows drawn uniformly from the probability simplex.

    Each row is a vector of unit-rate exponential draws divided by its sum.
    With ``adjacency`` the draws outside a node's neighbourhood are zeroed
    first, giving the uniform distribution on the neighbourhood's simplex.
    """
    if n < 1:
        raise ZeroNodesError(f"need at least one node, got {n}")
    rng = np.random.default_rng(seed)
    draws = rng.exponential(1.0, size=(n, n))
    if adjacency is not None:
        mask = np.asarray(adjacency, dtype=bool)
        if mask.shape != (n, n):
            raise DimensionMismatchError(f"adjacency shape {mask.shape} does not match n={n}")
        draws = np.where(mask | np.eye(n, dtype=bool), draws, 0.0)
    draws = draws / draws.sum(axis=1, keepdims=True)
    return validate_stochastic(draws)


def lazy_stochastic(n: int, seed: int, adjacency: np.ndarray = None) -> StochasticMatrix:
    """``(I + R) / 2`` for a :func:`random_stochastic` draw ``R``.

    Every eigenvalue lies in the disk of radius 1/2 about 1/2, so
    :func:`error_mode_factors` stays at or below one for gains in (0, 2).
    """
    draw = random_stochastic(n, seed, adjacency)
    return validate_stochastic(0.5 * (np.eye(n) + draw.entries))


def error_mode_factors(matrix: StochasticMatrix, gain: float) -> np.ndarray:
    """Per-mode growth ``|1 - gain * lambda|`` of errors combined through ``matrix``.

    A diffusion update at gain ``mu * k`` maps the network error vector
    through ``I - gain * A``; a factor above one is a mode that grows.
    """
    eigenvalues = np.linalg.eigvals(matrix.entries)
    return np.sort(np.abs(1.0 - gain * eigenvalues))


def resolve_matrix(value, n: int, name: str = "matrix") -> StochasticMatrix:
    """Build a matrix from its config form: ``"uniform"``, ``"identity"``,
    ``"random:<seed>"`` or a nested list of printed weights."""
    if isinstance(value, StochasticMatrix):
        matrix = value
    elif isinstance(value, str):
        token = value.strip().lower()
        if token == "uniform":
            matrix = uniform_matrix(n)
        elif token == "identity":
            matrix = identity_matrix(n)
        elif token.startswith("random:"):
            try:
                seed = int(token.split(":", 1)[1])
            except ValueError:
                raise ConfigInvalidError(f"network.{name} random seed must be an integer", value)
            matrix = random_stochastic(n, seed)
        else:
            raise ConfigInvalidError(f"network.{name} must be a matrix, 'uniform', 'identity' or 'random:<seed>'", value)
    else:
        matrix = normalize_printed(value)

    if matrix.size != n:
        raise ConfigInvalidError(f"network.{name} must be {n}x{n}", f"got {matrix.size}x{matrix.size}")
    return matrix
