"""Parameter sweeps and theory-versus-simulation comparisons."""

from dataclasses import dataclass
import logging

import numpy as np
import pandas as pd
from tqdm import tqdm

from analysis.moments import KernelMoments, estimate_moments, regressor_sampler
from analysis.performance import (
    fixed_point_mse,
    mean_square_step_bound,
    steady_state_mse,
    time_constant,
    transient_curve,
)
from config.experiment_config import ExperimentConfig
from network.graph import NetworkGraph, build_graph
from network.stochastic import error_mode_factors, lazy_stochastic, random_stochastic
from simulation.experiment import (
    mse_floor,
    reference_power,
    resolve_noise_variance,
    run_experiment,
)
from simulation.seeding import derive_seed
from simulation.signals import bayes_mse
from utils.errors import ConfigInvalidError, NumericalBreakdownError

logger = logging.getLogger(__name__)

STEP_SIZE_COLUMNS = ["mu", "predicted_floor_eq21", "predicted_floor_fixedpoint", "empirical_floor"]
NETWORK_SIZE_COLUMNS = ["size", "snr_db", "mean_floor", "std_floor", "theory_floor"]
TRANSIENT_COLUMNS = ["n", "predicted_mse", "empirical_mse"]

KERNEL_ONLY = ("diffusion_klms",)
# matrix pairs tried per draw before the draw is dropped
MAX_MATRIX_ATTEMPTS = 5


@dataclass(frozen=True)
class TransientPrediction:
    table: pd.DataFrame
    moments: KernelMoments
    empirical_time_constant: int
    predicted_time_constant: int


def draw_snapshots(config: ExperimentConfig, node_count: int, noise_variance: float) -> np.ndarray:
    """``2 * moment_samples`` network snapshots from the experiment's data
    distribution: dictionary centers followed by as many independent queries."""
    sampler = regressor_sampler(node_count, noise_variance, config.embedding_length,
                                derive_seed(config.seed, "moments", node_count))
    return np.asarray([next(sampler) for _ in range(2 * config.moment_samples)])


def network_moments(graph: NetworkGraph, config: ExperimentConfig, snapshots: np.ndarray) -> KernelMoments:
    """Kernel moments averaged over the nodes of ``graph``."""
    per_node = [
        estimate_moments(graph, q, config.kernel, iter(snapshots), len(snapshots) // 2)
        for q in range(graph.node_count)
    ]
    return KernelMoments.average(per_node)


def _log_reference_floors(moments: KernelMoments, noise_variance: float, mu: float):
    logger.info(f"Kernel moments: E[g]={moments.g_mean:.4f}, E[g^2]={moments.g_sq_mean:.4f}, "
                f"same-instant E[g]={moments.g_self_mean:.4f}")
    logger.info(f"Bayes MSE of the denoising task at noise variance {noise_variance:.4g}: "
                f"{bayes_mse(noise_variance):.4g}")
    if moments.g_self_mean <= 0:
        return
    bound = mean_square_step_bound(moments)
    logger.info(f"Mean-square step bound {bound:.3f}")
    if mu >= bound:
        logger.warning(f"Step size {mu} is at or above the mean-square bound {bound:.3f}; expect divergence")


def sweep_step_size(config: ExperimentConfig, show_progress: bool = True) -> pd.DataFrame:
    """Empirical diffusion-KLMS floor and both theoretical floors per step size.

    Both predictions are excess MSE over the task's Bayes floor; the
    empirical column is the total.
    """
    graph = config.graph()
    noise_variance = resolve_noise_variance(config)
    logger.info(f"Estimating kernel moments from {config.moment_samples} snapshot pairs...")
    moments = network_moments(graph, config, draw_snapshots(config, graph.node_count, noise_variance))
    _log_reference_floors(moments, noise_variance, max(config.sweep.mu_values))

    rows = []
    mu_values = config.sweep.mu_values
    iterator = tqdm(mu_values, desc="Step sizes") if show_progress else mu_values
    for mu in iterator:
        cfg = config.with_overrides(mu=float(mu), algorithms=KERNEL_ONLY)
        trace = run_experiment(cfg, show_progress=False, graph=graph)[0]
        rows.append({
            "mu": float(mu),
            "predicted_floor_eq21": steady_state_mse(moments, mu, noise_variance),
            "predicted_floor_fixedpoint": fixed_point_mse(moments, mu, noise_variance),
            "empirical_floor": mse_floor(trace, cfg.tail_fraction),
        })
        logger.debug(f"mu={mu}: {rows[-1]}")
    return pd.DataFrame(rows, columns=STEP_SIZE_COLUMNS)


def random_graph(config: ExperimentConfig, size: int, draw: int, attempt: int = 0) -> NetworkGraph:
    """Random ``(A, C)`` pair; ``A`` is lazy so no error mode flips sign."""
    A = lazy_stochastic(size, derive_seed(config.seed, f"sweep-A-{size}/{attempt}", draw))
    C = random_stochastic(size, derive_seed(config.seed, f"sweep-C-{size}/{attempt}", draw))
    return build_graph(A, C)


def _usable_draw(config: ExperimentConfig, base: ExperimentConfig, size: int, draw: int,
                 noise_variance: float, snapshots: np.ndarray):
    """First attempt of draw ``draw`` whose error modes contract and whose
    run stays bounded, as ``(floor, theory, attempts)``; floor is None when
    every attempt failed."""
    for attempt in range(MAX_MATRIX_ATTEMPTS):
        graph = random_graph(config, size, draw, attempt)
        cfg = base.with_overrides(node_count=size, A=graph.A, C=graph.C,
                                  seed=derive_seed(config.seed, "sweep-draw", draw),
                                  snr_db=None, noise_variance=noise_variance)
        moments = network_moments(graph, cfg, snapshots)
        growth = error_mode_factors(graph.A, cfg.mu * moments.g_self_mean).max()
        if growth >= 1.0:
            logger.debug(f"Draw {draw} attempt {attempt}: error mode grows by {growth:.3f}, redrawing")
            continue
        try:
            trace = run_experiment(cfg, show_progress=False, graph=graph)[0]
        except NumericalBreakdownError as e:
            logger.debug(f"Draw {draw} attempt {attempt}: {e}, redrawing")
            continue
        if trace.diverged:
            logger.debug(f"Draw {draw} attempt {attempt}: trace diverged, redrawing")
            continue
        return mse_floor(trace, cfg.tail_fraction), fixed_point_mse(moments, cfg.mu, noise_variance), attempt + 1
    return None, None, MAX_MATRIX_ATTEMPTS


def sweep_network_size(config: ExperimentConfig, show_progress: bool = True) -> pd.DataFrame:
    """Diffusion-KLMS floor versus network size, one row per (size, SNR).

    Each draw pairs a fresh random (A, C) with its own data seed; draw ``d``
    uses the same data seed at every size and SNR. A draw whose network
    error grows is replaced by a fresh matrix pair, up to
    ``MAX_MATRIX_ATTEMPTS`` times, and left out of the row after that. The
    redraw and drop counts per ``(size, snr_db)`` land in
    ``table.attrs["redrawn"]`` and ``table.attrs["dropped"]``.
    """
    sweep = config.sweep
    if not sweep.sizes:
        raise ConfigInvalidError("sweep.sizes must be non-empty")

    rows, redrawn, dropped = [], {}, {}
    for snr_db in sweep.snr_db:
        base = config.with_overrides(snr_db=float(snr_db), noise_variance=None, algorithms=KERNEL_ONLY)
        noise_variance = resolve_noise_variance(base)
        for size in sweep.sizes:
            logger.info(f"Network size {size} at {snr_db} dB: {sweep.matrix_draws} matrix draws...")
            snapshots = draw_snapshots(base, size, noise_variance)
            floors, theory, redraws = [], [], 0
            draws = range(sweep.matrix_draws)
            iterator = tqdm(draws, desc=f"N={size} {snr_db}dB") if show_progress else draws
            for d in iterator:
                floor, predicted, attempts = _usable_draw(config, base, size, d, noise_variance, snapshots)
                redraws += attempts - 1
                if floor is None:
                    continue
                floors.append(floor)
                theory.append(predicted)

            key = (int(size), float(snr_db))
            redrawn[key] = redraws
            dropped[key] = sweep.matrix_draws - len(floors)
            if redraws or dropped[key]:
                logger.warning(f"N={size} at {snr_db} dB: {redraws} matrix redraws, "
                               f"{dropped[key]} of {sweep.matrix_draws} draws dropped")
            if not floors:
                logger.warning(f"N={size} at {snr_db} dB: no stable draw, row left empty")
            rows.append({
                "size": int(size),
                "snr_db": float(snr_db),
                "mean_floor": float(np.mean(floors)) if floors else float("nan"),
                "std_floor": float(np.std(floors)) if floors else float("nan"),
                "theory_floor": float(np.mean(theory)) if theory else float("nan"),
            })
    table = pd.DataFrame(rows, columns=NETWORK_SIZE_COLUMNS)
    table.attrs["redrawn"] = redrawn
    table.attrs["dropped"] = dropped
    return table


def predict_transient(config: ExperimentConfig, show_progress: bool = True) -> TransientPrediction:
    """Predicted versus simulated diffusion-KLMS learning curve at the config's step size.

    The prediction starts from the clean-signal power, the error power of
    the zero-initialised filter.
    """
    graph = config.graph()
    noise_variance = resolve_noise_variance(config)
    moments = network_moments(graph, config, draw_snapshots(config, graph.node_count, noise_variance))
    _log_reference_floors(moments, noise_variance, config.mu)

    cfg = config.with_overrides(algorithms=KERNEL_ONLY)
    trace = run_experiment(cfg, show_progress=show_progress, graph=graph)[0]
    curve = transient_curve(moments, cfg.mu, noise_variance, reference_power(cfg), len(trace) - 1)

    table = pd.DataFrame({
        "n": np.arange(len(trace)),
        "predicted_mse": curve.values,
        "empirical_mse": trace.values,
    }, columns=TRANSIENT_COLUMNS)
    prediction = TransientPrediction(
        table=table,
        moments=moments,
        empirical_time_constant=time_constant(trace.values),
        predicted_time_constant=time_constant(curve.values),
    )
    logger.info(f"Time constant: empirical {prediction.empirical_time_constant}, "
                f"predicted {prediction.predicted_time_constant}")
    return prediction
