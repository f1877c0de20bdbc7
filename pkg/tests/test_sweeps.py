"""Tests for the parameter sweeps and the transient prediction."""

import logging

import numpy as np
import pytest

from config.experiment_config import SweepConfig, parse_config
from network.stochastic import uniform_matrix
from simulation.experiment import mse_floor, reference_power, resolve_noise_variance, run_experiment
from simulation.seeding import derive_seed
from simulation.signals import bayes_mse
from simulation.sweeps import (
    MAX_MATRIX_ATTEMPTS,
    NETWORK_SIZE_COLUMNS,
    STEP_SIZE_COLUMNS,
    TRANSIENT_COLUMNS,
    predict_transient,
    random_graph,
    sweep_network_size,
    sweep_step_size,
)

logger = logging.getLogger(__name__)


def _size_sweep_config(sizes, snr_db, draws, sample_count=200):
    return parse_config(
        f"sweep:\n  sizes: {list(sizes)}\n  snr_db: {list(snr_db)}\n  matrix_draws: {draws}\n"
        f"simulation:\n  sample_count: {sample_count}\n  monte_carlo_runs: 1\n  moment_samples: 1000\n",
        preset="fig1",
    )


class TestSweepStepSize:

    def test_table(self, small_config):
        config = small_config.with_overrides(sweep=SweepConfig(mu_values=(0.05, 0.1, 0.2)))
        table = sweep_step_size(config, show_progress=False)
        assert list(table.columns) == STEP_SIZE_COLUMNS
        assert len(table) == 3
        np.testing.assert_array_equal(table["mu"], [0.05, 0.1, 0.2])
        assert (table[STEP_SIZE_COLUMNS[1:]] > 0).all().all()
        # both predictions are linear in the step size
        assert np.all(np.diff(table["predicted_floor_eq21"]) > 0)
        assert np.all(np.diff(table["predicted_floor_fixedpoint"]) > 0)

    @pytest.mark.slow
    def test_floors_track_prediction(self):
        config = parse_config("", preset="fig3")
        table = sweep_step_size(config, show_progress=False)
        limit = bayes_mse(config.noise_variance)
        total = limit + table["predicted_floor_fixedpoint"]
        ratio = table["empirical_floor"] / total
        logger.info(f"Bayes floor {limit:.4f}\n{table.assign(predicted_total=total, ratio=ratio)}")
        assert ratio.between(1.0 / 3.0, 3.0).all()
        assert np.all(np.diff(total) > 0)
        assert (table["empirical_floor"] >= 0.5 * limit).all()


class TestSweepNetworkSize:

    def test_rows_and_snr_ordering(self):
        config = _size_sweep_config([1, 2], [10, 20], 3, sample_count=300)
        table = sweep_network_size(config, show_progress=False)
        assert list(table.columns) == NETWORK_SIZE_COLUMNS
        assert len(table) == 4
        assert (table["std_floor"] >= 0).all()
        assert (table["theory_floor"] > 0).all()
        for size in (1, 2):
            rows = table[table["size"] == size].set_index("snr_db")
            assert rows.loc[20.0, "mean_floor"] < rows.loc[10.0, "mean_floor"]

    def test_single_node_matches_klms(self):
        config = _size_sweep_config([1], [10], 1)
        row = sweep_network_size(config, show_progress=False).iloc[0]

        base = config.with_overrides(snr_db=10.0, noise_variance=None)
        klms = config.with_overrides(
            node_count=1, A=uniform_matrix(1), C=uniform_matrix(1),
            seed=derive_seed(config.seed, "sweep-draw", 0),
            snr_db=None, noise_variance=resolve_noise_variance(base),
            algorithms=("klms",),
        )
        trace = run_experiment(klms, show_progress=False)[0]
        assert row["mean_floor"] == pytest.approx(mse_floor(trace, klms.tail_fraction), rel=1e-12)
        assert row["std_floor"] == 0.0

    def test_random_graph_is_reproducible(self, small_config):
        a = random_graph(small_config, 4, 2)
        b = random_graph(small_config, 4, 2)
        np.testing.assert_array_equal(a.A.entries, b.A.entries)
        np.testing.assert_allclose(a.C.entries.sum(axis=1), 1.0)
        assert not np.array_equal(a.A.entries, random_graph(small_config, 4, 3).A.entries)
        assert np.all(np.diag(a.A.entries) >= 0.5)
        assert not np.array_equal(a.A.entries, random_graph(small_config, 4, 2, attempt=1).A.entries)

    def test_unstable_draws_are_counted_and_dropped(self):
        # mu * peak is far past 2, so every matrix pair is screened out
        config = _size_sweep_config([1], [10], 2).with_overrides(mu=1.0)
        table = sweep_network_size(config, show_progress=False)
        assert np.isnan(table["mean_floor"].iloc[0])
        assert table.attrs["redrawn"] == {(1, 10.0): 2 * (MAX_MATRIX_ATTEMPTS - 1)}
        assert table.attrs["dropped"] == {(1, 10.0): 2}

    @pytest.mark.slow
    def test_floor_shrinks_with_network_size(self):
        sizes = [1, 2, 4, 8]
        config = _size_sweep_config(sizes, [10, 20], 8, sample_count=1000)
        table = sweep_network_size(config, show_progress=False)
        logger.info(f"\n{table}\nredrawn {table.attrs['redrawn']}, dropped {table.attrs['dropped']}")
        assert np.isfinite(table["mean_floor"]).all()
        assert set(table.attrs["dropped"]) == {(s, snr) for s in sizes for snr in (10.0, 20.0)}
        for snr_db in (10.0, 20.0):
            rows = table[table["snr_db"] == snr_db].sort_values("size")
            means, stds = rows["mean_floor"].to_numpy(), rows["std_floor"].to_numpy()
            slack = np.sqrt((stds[:-1] ** 2 + stds[1:] ** 2) / 2.0)
            assert np.all(means[1:] <= means[:-1] + slack)
        for size in sizes:
            rows = table[table["size"] == size].set_index("snr_db")
            assert rows.loc[20.0, "mean_floor"] < rows.loc[10.0, "mean_floor"]


class TestPredictTransient:

    def test_table(self, small_config):
        prediction = predict_transient(small_config, show_progress=False)
        table = prediction.table
        assert list(table.columns) == TRANSIENT_COLUMNS
        assert len(table) == small_config.trace_length
        assert table["predicted_mse"].iloc[0] == pytest.approx(reference_power(small_config))
        assert prediction.moments.g_mean > 0
        assert table["predicted_mse"].iloc[-1] < table["predicted_mse"].iloc[0]

    @pytest.mark.slow
    def test_matches_simulation_up_to_time_constant(self):
        prediction = predict_transient(parse_config("", preset="fig4"), show_progress=False)
        tau = prediction.empirical_time_constant
        assert tau is not None
        assert prediction.predicted_time_constant is not None
        head = prediction.table.iloc[:tau + 1]
        error = np.abs(head["predicted_mse"] - head["empirical_mse"]) / head["empirical_mse"]
        logger.info(f"time constants {prediction.predicted_time_constant} vs {tau}, "
                    f"largest relative error {error.max():.3f}")
        assert error.max() <= 0.5
