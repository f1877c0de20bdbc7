from dataclasses import dataclass, field
import logging

import numpy as np

from filters.base_filter import AdaptiveFilter, as_desired, as_regressors, check_finite
from filters.kernel_dictionary import KernelDictionary
from kernels.kernel_functions import KernelSpec
from network.graph import NetworkGraph
from network.stochastic import combine
from utils.errors import DimensionMismatchError, GraphSizeMismatchError

logger = logging.getLogger(__name__)


@dataclass
class DiffusionKlmsState:
    """Shared dictionary of network snapshots plus the latest combined errors."""

    dictionary: KernelDictionary
    graph: NetworkGraph
    last_combined_errors: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.dictionary.node_count != self.graph.node_count:
            raise GraphSizeMismatchError(
                f"dictionary stores {self.dictionary.node_count} nodes, graph has {self.graph.node_count}"
            )
        if self.last_combined_errors is None:
            self.last_combined_errors = np.zeros(self.graph.node_count)

    @classmethod
    def initial(cls, graph: NetworkGraph, dim: int, mu: float, kernel: KernelSpec,
                budget: int = None) -> "DiffusionKlmsState":
        dictionary = KernelDictionary(graph.node_count, dim, mu, kernel, budget)
        return cls(dictionary=dictionary, graph=graph)


def dklms_predict(state: DiffusionKlmsState, node: int, xs) -> float:
    """Output of node ``q`` for the current network regressors.

    ``y(q, n) = mu * sum_i e'(q, i) * sum_l C[q, l] k(x_l(i), x_q(n))``;
    the query is node q's own regressor.
    """
    xs = as_regressors(xs, state.graph.node_count)
    if xs.shape[1] != state.dictionary.dim:
        raise DimensionMismatchError(f"regressors have dimension {xs.shape[1]}, dictionary stores {state.dictionary.dim}")
    return state.dictionary.expansion(state.graph.C.row(node), xs[node], node=node)


def dklms_step(state: DiffusionKlmsState, xs, ds):
    """One diffusion-KLMS iteration.

    1. every node predicts from the shared expansion,
    2. raw errors ``e(l, n) = d_l(n) - y(l, n)``,
    3. combined errors ``e'(n) = A e(n)`` become the coefficients of the new
       snapshot.

    Returns ``(state, raw_errors, combined_errors)``.
    """
    graph = state.graph
    xs = as_regressors(xs, graph.node_count)
    ds = as_desired(ds, graph.node_count)
    check_finite(xs, ds)

    ys = np.array([dklms_predict(state, q, xs) for q in range(graph.node_count)])
    raw = ds - ys
    combined = combine(graph.A, raw)

    state.dictionary.append(xs, combined)
    state.last_combined_errors = combined
    return state, raw, combined


class DiffusionKlmsFilter(AdaptiveFilter):
    name = "diffusion_klms"

    def __init__(self, graph: NetworkGraph, dim: int, mu: float, kernel: KernelSpec, budget: int = None):
        super().__init__(graph.node_count)
        self.state = DiffusionKlmsState.initial(graph, dim, mu, kernel, budget)

    def step(self, xs, ds):
        self.state, raw, _ = dklms_step(self.state, xs, ds)
        return raw
