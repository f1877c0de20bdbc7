"""Tests for the Monte Carlo harness."""

import logging

import numpy as np
import pytest

from config.experiment_config import parse_config
from simulation.experiment import (
    MseTrace,
    config_hash,
    generate_run_data,
    is_diverged,
    mse_floor,
    reference_power,
    resolve_noise_variance,
    run_experiment,
)
from simulation.signals import apply_channel, bayes_mse
from simulation.sweeps import draw_snapshots, network_moments
from analysis.performance import mean_square_step_bound, step_size_range
from utils.errors import EmptyTraceError, NumericalBreakdownError, ValidationError

logger = logging.getLogger(__name__)

ALL_FILTERS = "[lms, diffusion_lms, rls, diffusion_rls, klms, diffusion_klms]"
# orderings expected in every group of five runs
SEED_GROUP_PAIRS = (("diffusion_klms", "lms"), ("diffusion_klms", "diffusion_lms"), ("klms", "lms"))


def _by_tag(traces):
    return {t.algorithm: t for t in traces}


def _linear_wiener_mse(config):
    """MSE of the best bias-free linear estimate from one node's regressor."""
    power = reference_power(config)
    mean = float(np.mean(apply_channel([1.0, -1.0])))
    T = config.embedding_length
    R = np.full((T, T), mean ** 2) + (power - mean ** 2 + config.noise_variance) * np.eye(T)
    p = np.full(T, mean ** 2)
    p[0] = power
    return float(power - p @ np.linalg.solve(R, p))


def _diverges(config):
    try:
        trace = run_experiment(config, show_progress=False)[0]
    except NumericalBreakdownError:
        return True
    return trace.diverged or trace.values[-1] > trace.values[0]


class TestRunExperiment:

    def test_trace_shape_and_metadata(self, small_config):
        traces = run_experiment(small_config, show_progress=False)
        assert [t.algorithm for t in traces] == list(small_config.algorithms)
        for trace in traces:
            assert len(trace) == small_config.sample_count - small_config.embedding_length + 1
            assert np.all(trace.values >= 0)
            assert trace.runs == 2
            assert trace.config_hash == config_hash(small_config)

    def test_trace_length_with_embedding(self):
        config = parse_config("simulation:\n  sample_count: 60\n  embedding_length: 3\n"
                              "  monte_carlo_runs: 1\n  algorithms: [lms]\n")
        assert len(run_experiment(config, show_progress=False)[0]) == 58

    def test_bit_deterministic(self, small_config):
        first = run_experiment(small_config, show_progress=False)
        second = run_experiment(small_config, show_progress=False)
        for a, b in zip(first, second):
            np.testing.assert_array_equal(a.values, b.values)
            assert a.seeds == b.seeds

    def test_seed_changes_traces(self, small_config):
        other = small_config.with_overrides(seed=99)
        a = run_experiment(small_config, show_progress=False)[0]
        b = run_experiment(other, show_progress=False)[0]
        assert not np.array_equal(a.values, b.values)

    def test_single_node_reductions(self):
        config = parse_config(
            "network.node_count: 1\n"
            "simulation:\n  sample_count: 150\n  monte_carlo_runs: 2\n  embedding_length: 2\n"
            f"  algorithms: {ALL_FILTERS}\n"
        )
        traces = _by_tag(run_experiment(config, show_progress=False))
        np.testing.assert_array_equal(traces["diffusion_klms"].values, traces["klms"].values)
        np.testing.assert_array_equal(traces["diffusion_lms"].values, traces["lms"].values)
        np.testing.assert_array_equal(traces["diffusion_rls"].values, traces["rls"].values)

    def test_noiseless_klms_interpolates(self):
        config = parse_config(
            "network.node_count: 1\n"
            "simulation:\n  noise_variance: 0\n  embedding_length: 1\n  sample_count: 500\n"
            "  monte_carlo_runs: 1\n  algorithms: [klms]\n"
        )
        values = run_experiment(config, show_progress=False)[0].values
        assert values[0] > 0
        assert np.max(values[100:]) < 1e-3

    def test_common_data_across_algorithms(self, small_config):
        noise_variance = resolve_noise_variance(small_config)
        a = generate_run_data(small_config, 0, noise_variance)
        b = generate_run_data(small_config, 0, noise_variance)
        np.testing.assert_array_equal(a.regressors, b.regressors)
        assert a.regressors.shape == (200, 2, 1)
        np.testing.assert_array_equal(a.desired[:, 0], a.clean)
        np.testing.assert_array_equal(a.desired[:, 1], a.clean)

    def test_snr_resolution(self):
        config = parse_config("simulation.snr_db: 10\n")
        assert reference_power(config) == pytest.approx(1.81, rel=0.02)
        assert resolve_noise_variance(config) == pytest.approx(0.181, rel=0.02)

    @pytest.mark.slow
    def test_learning_curve_ordering(self):
        config = parse_config("", preset="fig1")
        floors = {t.algorithm: mse_floor(t) for t in run_experiment(config, show_progress=False)}
        floor_limit = bayes_mse(config.noise_variance)
        wiener = _linear_wiener_mse(config)
        logger.info(f"Bayes floor {floor_limit:.4f}, linear Wiener floor {wiener:.4f}, "
                    f"largest attainable linear/kernel ratio {wiener / floor_limit:.2f}")
        for tag in ("lms", "diffusion_lms", "diffusion_rls", "klms"):
            logger.info(f"floor ratio {tag}/diffusion_klms = {floors[tag] / floors['diffusion_klms']:.2f}")

        assert floors["diffusion_klms"] < floors["klms"] < floors["lms"]
        assert floors["diffusion_klms"] < floors["diffusion_lms"]
        assert 0.5 * floor_limit < floors["diffusion_klms"] < 2.5 * floor_limit
        for tag in ("lms", "diffusion_lms", "diffusion_rls"):
            assert floors[tag] > 0.95 * wiener
            assert floors[tag] / floors["diffusion_klms"] >= 0.4 * wiener / floor_limit

    @pytest.mark.slow
    def test_ordering_holds_across_seed_groups(self):
        wins = {pair: 0 for pair in SEED_GROUP_PAIRS}
        kernel_wins = 0
        pooled = {"klms": [], "diffusion_klms": []}
        groups = 20
        for seed in range(groups):
            config = parse_config(
                f"simulation:\n  seed: {seed}\n  monte_carlo_runs: 5\n"
                "  algorithms: [lms, diffusion_lms, klms, diffusion_klms]\n",
                preset="fig1",
            )
            floors = {t.algorithm: mse_floor(t) for t in run_experiment(config, show_progress=False)}
            for better, worse in SEED_GROUP_PAIRS:
                wins[(better, worse)] += int(floors[better] < floors[worse])
            kernel_wins += int(floors["diffusion_klms"] < floors["klms"])
            for tag in pooled:
                pooled[tag].append(floors[tag])

        logger.info(f"diffusion_klms below klms in {kernel_wins} of {groups} seed groups")
        for pair, count in wins.items():
            assert count >= groups - 1, f"{pair[0]} < {pair[1]} held in only {count} of {groups} groups"
        assert np.mean(pooled["diffusion_klms"]) < np.mean(pooled["klms"])

    @pytest.mark.slow
    def test_more_runs_steady_the_floor(self):
        def floors(runs, offset):
            values = []
            for group in range(8):
                config = parse_config(
                    f"simulation:\n  seed: {offset + group}\n  sample_count: 300\n"
                    f"  monte_carlo_runs: {runs}\n  algorithms: [lms]\n",
                    preset="fig1",
                )
                values.append(mse_floor(run_experiment(config, show_progress=False)[0]))
            return np.array(values)

        few, many = floors(5, 100), floors(50, 200)
        logger.info(f"floor variance over groups: 5 runs {np.var(few):.3g}, 50 runs {np.var(many):.3g}")
        assert np.var(many) < np.var(few)

    @pytest.mark.slow
    def test_step_size_bound(self):
        base = parse_config("simulation:\n  moment_samples: 20000\n  algorithms: [diffusion_klms]\n",
                            preset="fig1")
        graph = base.graph()
        moments = network_moments(graph, base, draw_snapshots(base, 2, base.noise_variance))
        _, upper = step_size_range(moments)
        bound = mean_square_step_bound(moments)
        logger.info(f"mean step range (0, {upper:.3f}), mean-square bound {bound:.3f}")
        assert 5.0 < upper < 6.5
        assert 0.7 < bound < 1.0

        stable = base.with_overrides(mu=0.5 * bound, sample_count=300, monte_carlo_runs=3)
        trace = run_experiment(stable, show_progress=False)[0]
        assert not trace.diverged
        assert mse_floor(trace) < reference_power(stable)

        # both lie past the mean-square bound; the second is still inside the mean range
        for mu in (3.0 * bound, 0.5 * upper):
            diverged = sum(
                _diverges(base.with_overrides(mu=mu, sample_count=80, monte_carlo_runs=1, seed=seed))
                for seed in range(5)
            )
            assert diverged >= 4, f"only {diverged} of 5 runs diverged at mu={mu:.3f}"


class TestMseFloor:

    def test_constant(self):
        assert mse_floor(np.full(10, 0.3), 0.2) == pytest.approx(0.3)
        assert mse_floor(np.full(10, 0.3), 1.0) == pytest.approx(0.3)

    def test_tail_half(self):
        assert mse_floor([1.0, 1.0, 0.5, 0.5], 0.5) == 0.5

    def test_decreasing_trace(self):
        values = 0.9 ** np.arange(100)
        assert mse_floor(values) <= values[50]

    def test_accepts_trace(self):
        trace = MseTrace("klms", np.array([2.0, 1.0, 1.0, 1.0, 1.0]), (1,), "abc")
        assert mse_floor(trace) == 1.0

    def test_empty(self):
        with pytest.raises(EmptyTraceError):
            mse_floor([])

    def test_invalid_fraction(self):
        with pytest.raises(ValidationError):
            mse_floor([1.0, 2.0], 0.0)


class TestIsDiverged:

    def test_geometric_growth(self):
        assert is_diverged(1.5 ** np.arange(400))

    def test_settling_trace(self):
        assert not is_diverged(0.02 + 1.8 * 0.97 ** np.arange(400))

    def test_overflow(self):
        assert is_diverged([1.0, 2.0, np.inf])

    def test_flat_trace(self):
        assert not is_diverged(np.full(50, 0.3))

    def test_empty(self):
        with pytest.raises(EmptyTraceError):
            is_diverged([])
