from dataclasses import dataclass
import logging

import numpy as np

from config.settings import DEFAULT_FORGETTING, DEFAULT_RLS_INIT
from filters.base_filter import AdaptiveFilter, as_desired, as_regressors, check_finite
from filters.lms_filter import a_priori_errors
from network.graph import NetworkGraph
from network.stochastic import combine
from utils.errors import DimensionMismatchError, NumericalBreakdownError, ValidationError

logger = logging.getLogger(__name__)


@dataclass
class RlsState:
    """Exponentially weighted RLS state for every node."""

    weights: np.ndarray
    inverse_correlations: np.ndarray
    forgetting: float = DEFAULT_FORGETTING

    @classmethod
    def initial(cls, node_count: int, dim: int, forgetting: float = DEFAULT_FORGETTING,
                init: float = DEFAULT_RLS_INIT) -> "RlsState":
        if not 0 < forgetting <= 1:
            raise ValidationError(f"forgetting factor must lie in (0, 1], got {forgetting}")
        if not init > 0:
            raise ValidationError(f"initial inverse correlation must be positive, got {init}")
        return cls(
            weights=np.zeros((node_count, dim)),
            inverse_correlations=np.tile(init * np.eye(dim), (node_count, 1, 1)),
            forgetting=float(forgetting),
        )

    @property
    def node_count(self) -> int:
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.weights.shape[1]


def rls_step(state: RlsState, node: int, x, d):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (state.dim,):
        raise DimensionMismatchError(f"regressor has shape {x.shape}, filter expects ({state.dim},)")
    d = float(d)
    check_finite(x, np.asarray(d))

    lam = state.forgetting
    P = state.inverse_correlations[node]
    w = state.weights[node:node + 1]
    e = float(a_priori_errors(w, x[np.newaxis, :], np.array([d]))[0])

    Px = P @ x
    denominator = lam + float(x @ Px)
    if not np.isfinite(denominator) or denominator <= 0:
        raise NumericalBreakdownError(f"RLS gain denominator is {denominator} at node {node}")
    gain = Px / denominator

    state.weights[node] = w[0] + gain * e
    P = (P - np.outer(gain, Px)) / lam
    state.inverse_correlations[node] = 0.5 * (P + P.T)
    return state, e


def diffusion_rls_step(state: RlsState, graph: NetworkGraph, xs, ds):
    """Per-node RLS adaptation, then A-combination of the weights (ATC)."""
    graph.check_width(state.node_count, "filter states")
    xs = as_regressors(xs, graph.node_count)
    ds = as_desired(ds, graph.node_count)

    errors = np.empty(graph.node_count)
    for q in range(graph.node_count):
        state, errors[q] = rls_step(state, q, xs[q], ds[q])
    state.weights = combine(graph.A, state.weights)
    return state, errors


class RlsFilter(AdaptiveFilter):
    name = "rls"

    def __init__(self, node_count: int, dim: int, forgetting: float = DEFAULT_FORGETTING,
                 init: float = DEFAULT_RLS_INIT):
        super().__init__(node_count)
        self.state = RlsState.initial(node_count, dim, forgetting, init)

    def step(self, xs, ds):
        xs, ds = self._validate(xs, ds)
        errors = np.empty(self.node_count)
        for q in range(self.node_count):
            self.state, errors[q] = rls_step(self.state, q, xs[q], ds[q])
        return errors


class DiffusionRlsFilter(AdaptiveFilter):
    name = "diffusion_rls"

    def __init__(self, graph: NetworkGraph, dim: int, forgetting: float = DEFAULT_FORGETTING,
                 init: float = DEFAULT_RLS_INIT):
        super().__init__(graph.node_count)
        self.graph = graph
        self.state = RlsState.initial(graph.node_count, dim, forgetting, init)

    def step(self, xs, ds):
        self.state, errors = diffusion_rls_step(self.state, self.graph, xs, ds)
        return errors
