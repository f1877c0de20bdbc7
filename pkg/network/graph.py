from dataclasses import dataclass

import numpy as np

from network.stochastic import StochasticMatrix, identity_matrix, uniform_matrix
from utils.errors import DimensionMismatchError, GraphSizeMismatchError, ValidationError, ZeroNodesError


@dataclass(frozen=True)
class NetworkGraph:
    """Nodes, neighbourhoods and the two combining matrices.

    A weights neighbours' errors/estimates in the combination step; C weights
    neighbours' data in the adaptation step. Every neighbourhood contains
    the node itself.
    """

    node_count: int
    adjacency: np.ndarray
    A: StochasticMatrix
    C: StochasticMatrix

    def neighborhood(self, q: int) -> np.ndarray:
        return np.flatnonzero(self.adjacency[q])

    def check_width(self, count: int, what: str = "values"):
        if count != self.node_count:
            raise GraphSizeMismatchError(f"graph has {self.node_count} nodes but got {count} {what}")


def build_graph(A: StochasticMatrix, C: StochasticMatrix, adjacency=None) -> NetworkGraph:
    """Assemble and validate a graph.

    Without an explicit adjacency the graph is the symmetric closure of the
    supports of A and C plus self-loops.
    """
    n = A.size
    if n < 1:
        raise ZeroNodesError("graph needs at least one node")
    if C.size != n:
        raise DimensionMismatchError(f"A is {n}x{n} but C is {C.size}x{C.size}")

    if adjacency is None:
        support = A.support() | C.support()
        adj = support | support.T | np.eye(n, dtype=bool)
    else:
        adj = np.array(adjacency, dtype=bool)
        if adj.shape != (n, n):
            raise DimensionMismatchError(f"adjacency shape {adj.shape} does not match {n} nodes")
        if not np.array_equal(adj, adj.T):
            raise ValidationError("adjacency must be symmetric")
        if not adj.diagonal().all():
            raise ValidationError("every neighbourhood must include the node itself")
        for name, matrix in (("A", A), ("C", C)):
            outside = matrix.support() & ~adj
            if outside.any():
                q, l = np.argwhere(outside)[0]
                raise ValidationError(f"{name}[{q},{l}] is nonzero but {l} is not a neighbour of {q}")

    adj.setflags(write=False)
    return NetworkGraph(node_count=n, adjacency=adj, A=A, C=C)


def fully_connected(n: int) -> NetworkGraph:
    return build_graph(uniform_matrix(n), uniform_matrix(n))


def isolated(n: int) -> NetworkGraph:
    """Nodes that never cooperate (A = C = I)."""
    return build_graph(identity_matrix(n), identity_matrix(n))
