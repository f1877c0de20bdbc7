from dataclasses import dataclass
from enum import Enum
import logging

import numpy as np

from filters.base_filter import AdaptiveFilter, as_desired, as_regressors, check_finite
from network.graph import NetworkGraph
from network.stochastic import combine
from utils.errors import DimensionMismatchError, ValidationError

logger = logging.getLogger(__name__)


class DiffusionMode(str, Enum):
    ATC = "ATC"
    CTA = "CTA"


@dataclass
class LinearFilterState:
    """Per-node weights ``w_q`` and intermediate estimates ``p_q``."""

    weights: np.ndarray
    intermediates: np.ndarray
    step_size: float

    @classmethod
    def zeros(cls, node_count: int, dim: int, step_size: float) -> "LinearFilterState":
        if not step_size > 0:
            raise ValidationError(f"step size must be positive, got {step_size}")
        return cls(
            weights=np.zeros((node_count, dim)),
            intermediates=np.zeros((node_count, dim)),
            step_size=float(step_size),
        )

    @property
    def node_count(self) -> int:
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.weights.shape[1]


def a_priori_errors(weights: np.ndarray, xs: np.ndarray, ds: np.ndarray) -> np.ndarray:
    # row-wise w_l^T x_l; np.sum keeps the reduction order fixed
    return ds - np.sum(weights * xs, axis=1)


def lms_step(state: LinearFilterState, x, d, node: int = 0):
    """One Widrow-Hoff update of ``node``'s weights. Returns the pre-update error."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (state.dim,):
        raise DimensionMismatchError(f"regressor has shape {x.shape}, filter expects ({state.dim},)")
    d = float(d)
    check_finite(x, np.asarray(d))

    w = state.weights[node:node + 1]
    e = a_priori_errors(w, x[np.newaxis, :], np.array([d]))
    gradient = e[:, np.newaxis] * x[np.newaxis, :]
    state.weights[node] = (w + state.step_size * gradient)[0]
    state.intermediates[node] = state.weights[node]
    return state, float(e[0])


def diffusion_lms_step(state: LinearFilterState, graph: NetworkGraph, xs, ds,
                       mode: DiffusionMode = DiffusionMode.ATC):
    """One diffusion-LMS iteration over the whole network.

    ATC adapts every node with the C-weighted neighbour gradients (each
    neighbour's error is formed with its own weights), then combines the
    intermediates with A. CTA combines the current weights with A first and
    adapts from the combined estimates.
    """
    graph.check_width(state.node_count, "filter states")
    xs = as_regressors(xs, graph.node_count)
    ds = as_desired(ds, graph.node_count)
    if xs.shape[1] != state.dim:
        raise DimensionMismatchError(f"regressors have dimension {xs.shape[1]}, filter expects {state.dim}")
    check_finite(xs, ds)

    mu = state.step_size

    if DiffusionMode(mode) is DiffusionMode.ATC:
        errors = a_priori_errors(state.weights, xs, ds)
        gradients = errors[:, np.newaxis] * xs
        state.intermediates = state.weights + mu * combine(graph.C, gradients)
        state.weights = combine(graph.A, state.intermediates)
    else:
        state.intermediates = combine(graph.A, state.weights)
        errors = a_priori_errors(state.intermediates, xs, ds)
        gradients = errors[:, np.newaxis] * xs
        state.weights = state.intermediates + mu * combine(graph.C, gradients)
    return state, errors


class LmsFilter(AdaptiveFilter):
    """Independent LMS at every node (no cooperation)."""

    name = "lms"

    def __init__(self, node_count: int, dim: int, mu: float):
        super().__init__(node_count)
        self.state = LinearFilterState.zeros(node_count, dim, mu)

    def step(self, xs, ds):
        xs, ds = self._validate(xs, ds)
        errors = np.empty(self.node_count)
        for q in range(self.node_count):
            self.state, errors[q] = lms_step(self.state, xs[q], ds[q], node=q)
        return errors


class DiffusionLmsFilter(AdaptiveFilter):
    name = "diffusion_lms"

    def __init__(self, graph: NetworkGraph, dim: int, mu: float, mode: DiffusionMode = DiffusionMode.ATC):
        super().__init__(graph.node_count)
        self.graph = graph
        self.mode = DiffusionMode(mode)
        self.state = LinearFilterState.zeros(graph.node_count, dim, mu)

    def step(self, xs, ds):
        self.state, errors = diffusion_lms_step(self.state, self.graph, xs, ds, self.mode)
        return errors
