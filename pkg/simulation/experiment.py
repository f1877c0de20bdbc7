"""Monte Carlo harness for the denoising benchmark."""

from dataclasses import dataclass
import hashlib
import json
import logging
import math

import numpy as np
from tqdm import tqdm

from config.experiment_config import ExperimentConfig
from filters.registry import build_filter
from network.graph import NetworkGraph
from simulation.seeding import derive_seed
from simulation.signals import (
    apply_channel,
    clean_power,
    embed,
    generate_source,
    observe,
    snr_to_noise_variance,
)
from utils.errors import EmptyTraceError, NumericalBreakdownError, ValidationError

logger = logging.getLogger(__name__)

# length of the reference record used to measure clean-signal power
POWER_REFERENCE_SAMPLES = 100_000
# a floor this many times above the opening error marks a runaway trace
DIVERGENCE_RATIO = 10.0


@dataclass(frozen=True)
class MseTrace:
    """Per-iteration MSE, averaged over nodes and then over runs."""

    algorithm: str
    values: np.ndarray
    seeds: tuple
    config_hash: str
    diverged: bool = False

    def __len__(self) -> int:
        return len(self.values)

    @property
    def runs(self) -> int:
        return len(self.seeds)


@dataclass(frozen=True)
class RunData:
    regressors: np.ndarray  # (iterations, nodes, dim)
    desired: np.ndarray  # (iterations, nodes)
    clean: np.ndarray  # channel output aligned with the regressors


def config_hash(config: ExperimentConfig) -> str:
    canonical = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def reference_power(config: ExperimentConfig) -> float:
    """Empirical power of the clean channel output over a long reference record."""
    s = generate_source(POWER_REFERENCE_SAMPLES, derive_seed(config.seed, "power"))
    return clean_power(apply_channel(s))


def resolve_noise_variance(config: ExperimentConfig) -> float:
    """Sensor noise variance, converting ``snr_db`` with the measured clean power."""
    if config.snr_db is None:
        return config.noise_variance
    power = reference_power(config)
    variance = snr_to_noise_variance(power, config.snr_db)
    logger.debug(f"SNR {config.snr_db} dB with clean power {power:.4f} -> noise variance {variance:.5f}")
    return variance


def run_seed(config: ExperimentConfig, run_index: int) -> int:
    return derive_seed(config.seed, "run", run_index)


def generate_run_data(config: ExperimentConfig, run_index: int, noise_variance: float,
                      node_count: int = None) -> RunData:
    """Data of one Monte Carlo run; every algorithm sees the same record."""
    n_nodes = config.node_count if node_count is None else node_count
    seed = run_seed(config, run_index)
    z = apply_channel(generate_source(config.sample_count, derive_seed(seed, "source")))
    u = observe(z, n_nodes, noise_variance, derive_seed(seed, "noise"))

    T = config.embedding_length
    regressors = np.stack([embed(u[l], T) for l in range(n_nodes)], axis=1)
    clean = z[T - 1:]
    desired = np.repeat(clean[:, np.newaxis], n_nodes, axis=1)
    return RunData(regressors=regressors, desired=desired, clean=clean)


def squared_error_curve(errors: np.ndarray) -> np.ndarray:
    """Node-averaged squared a-priori error per iteration."""
    with np.errstate(over="ignore"):
        return np.mean(np.asarray(errors, dtype=float) ** 2, axis=1)


def simulate_run(config: ExperimentConfig, graph: NetworkGraph, data: RunData) -> dict:
    """Run every configured algorithm on one record."""
    dim = data.regressors.shape[2]
    curves = {}
    with np.errstate(over="ignore", invalid="ignore"):
        for tag in config.algorithms:
            adaptive_filter = build_filter(tag, config, graph, dim)
            curves[tag] = squared_error_curve(adaptive_filter.run(data.regressors, data.desired))
    return curves


def run_experiment(config: ExperimentConfig, show_progress: bool = True, graph: NetworkGraph = None) -> list:
    """Learning curve of every configured algorithm.

    Runs are accumulated in run-index order so the result is bit-identical
    for a fixed config and seed.
    """
    graph = config.graph() if graph is None else graph
    noise_variance = resolve_noise_variance(config)
    digest = config_hash(config)
    seeds = tuple(run_seed(config, r) for r in range(config.monte_carlo_runs))

    logger.info(f"Step 1/2: Simulating {', '.join(config.algorithms)} over "
                f"{config.monte_carlo_runs} runs ({graph.node_count} nodes, noise variance {noise_variance:.4g})...")
    totals = {tag: np.zeros(config.trace_length) for tag in config.algorithms}
    runs = range(config.monte_carlo_runs)
    iterator = tqdm(runs, desc="Monte Carlo") if show_progress else runs
    for r in iterator:
        data = generate_run_data(config, r, noise_variance, graph.node_count)
        for tag, curve in simulate_run(config, graph, data).items():
            totals[tag] += curve

    logger.info("Step 2/2: Averaging learning curves...")
    traces = []
    for tag in config.algorithms:
        values = totals[tag] / config.monte_carlo_runs
        if np.isnan(values).any():
            raise NumericalBreakdownError(f"{tag} produced NaN errors; the filter broke down")
        diverged = is_diverged(values, config.tail_fraction)
        if np.isinf(values).any():
            logger.warning(f"{tag} diverged: squared error overflowed")
        elif diverged:
            logger.warning(f"{tag} diverged: floor {mse_floor(values, config.tail_fraction):.3g} "
                           f"exceeds {DIVERGENCE_RATIO:g}x the opening error")
        traces.append(MseTrace(algorithm=tag, values=values, seeds=seeds, config_hash=digest,
                               diverged=diverged))
    return traces


def mse_floor(trace, tail_fraction: float = 0.2) -> float:
    """Mean of the last ``ceil(tail_fraction * length)`` values."""
    values = np.asarray(trace.values if isinstance(trace, MseTrace) else trace, dtype=float)
    if values.size == 0:
        raise EmptyTraceError("cannot take the floor of an empty trace")
    if not 0 < tail_fraction <= 1:
        raise ValidationError(f"tail fraction must lie in (0, 1], got {tail_fraction}")
    count = max(1, math.ceil(tail_fraction * values.size - 1e-9))
    return float(np.mean(values[-count:]))


def is_diverged(values, tail_fraction: float = 0.2, ratio: float = DIVERGENCE_RATIO) -> bool:
    """True when the trace overflowed or its floor sits ``ratio`` times above
    the mean of its first tenth."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise EmptyTraceError("cannot judge an empty trace")
    if not np.isfinite(values).all():
        return True
    head = float(np.mean(values[:max(1, math.ceil(0.1 * values.size))]))
    return mse_floor(values, tail_fraction) > ratio * head
