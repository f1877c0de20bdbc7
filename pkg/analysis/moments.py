from dataclasses import dataclass
from itertools import islice
import logging

import numpy as np

from kernels.kernel_functions import KernelSpec, kernel_pairs
from network.graph import NetworkGraph
from simulation.seeding import derive_seed
from simulation.signals import apply_channel, embed, generate_source, observe
from utils.errors import DimensionMismatchError, EmptySamplerError, ValidationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KernelMoments:
    """First, absolute and second moments of the C-weighted kernel
    ``g_q = sum_l C[q, l] k(x_l, x_q)`` between a stored network snapshot
    and node ``q``'s regressor at an independent time instant.

    ``g_self_mean`` is the same quantity with both taken at the same
    instant, the kernel energy one update injects; it bounds mean-square
    stability. Zero when not estimated.
    """

    g_mean: float
    g_abs_mean: float
    g_sq_mean: float
    sample_count: int
    g_self_mean: float = 0.0

    @classmethod
    def average(cls, moments: list) -> "KernelMoments":
        """Node-averaged moments for network-wide predictions."""
        return cls(
            g_mean=float(np.mean([m.g_mean for m in moments])),
            g_abs_mean=float(np.mean([m.g_abs_mean for m in moments])),
            g_sq_mean=float(np.mean([m.g_sq_mean for m in moments])),
            sample_count=min(m.sample_count for m in moments),
            g_self_mean=float(np.mean([m.g_self_mean for m in moments])),
        )


def regressor_sampler(node_count: int, noise_variance: float, embedding_length: int,
                      seed: int, chunk: int = 4096):
    """Endless stream of network snapshots ``(nodes, dim)`` drawn from the
    benchmark's data distribution. Deterministic given ``seed``."""
    index = 0
    while True:
        n = chunk + embedding_length - 1
        z = apply_channel(generate_source(n, derive_seed(seed, "sampler-source", index)))
        u = observe(z, node_count, noise_variance, derive_seed(seed, "sampler-noise", index))
        regs = np.stack([embed(u[l], embedding_length) for l in range(node_count)], axis=1)
        yield from regs
        index += 1


def combined_kernel_samples(graph: NetworkGraph, node: int, kernel: KernelSpec, snapshots: np.ndarray,
                            queries: np.ndarray) -> np.ndarray:
    """``g_q`` for every (snapshot, query snapshot) pair of stacked (samples, nodes, dim) arrays.

    The query is node ``q``'s regressor taken from ``queries``.
    """
    values = kernel_pairs(kernel, snapshots, queries[:, node:node + 1, :])
    return np.sum(values * graph.C.row(node), axis=1)


def estimate_moments(graph: NetworkGraph, node: int, kernel: KernelSpec, data_sampler,
                     samples: int) -> KernelMoments:
    """Monte Carlo estimate of the kernel moments for node ``node``.

    Draws ``2 * samples`` snapshots: the first half are dictionary centers,
    the second half supply the queries, so each pair comes from independent
    time instants as in prediction. ``g_self_mean`` evaluates every center
    snapshot at its own node ``q`` regressor.
    """
    if samples < 2:
        raise ValidationError(f"need at least 2 samples, got {samples}")
    drawn = list(islice(iter(data_sampler), 2 * samples))
    if len(drawn) < 2:
        raise EmptySamplerError("data sampler must produce at least two snapshots")
    if len(drawn) < 2 * samples:
        logger.warning(f"Sampler exhausted after {len(drawn)} of {2 * samples} snapshots")

    snapshots = np.asarray(drawn, dtype=float)
    if snapshots.ndim == 2:
        snapshots = snapshots[:, :, np.newaxis]
    if snapshots.shape[1] != graph.node_count:
        raise DimensionMismatchError(f"snapshots hold {snapshots.shape[1]} nodes, graph has {graph.node_count}")

    half = len(snapshots) // 2
    centers, queries = snapshots[:half], snapshots[half:2 * half]
    g = combined_kernel_samples(graph, node, kernel, centers, queries)
    g_self = combined_kernel_samples(graph, node, kernel, centers, centers)
    moments = KernelMoments(
        g_mean=float(np.mean(g)),
        g_abs_mean=float(np.mean(np.abs(g))),
        g_sq_mean=float(np.mean(g ** 2)),
        sample_count=half,
        g_self_mean=float(np.mean(g_self)),
    )
    logger.debug(f"Node {node} kernel moments: {moments}")
    return moments
