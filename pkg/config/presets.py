"""Named parameter sets for the standard denoising experiments, as dotted config keys."""

EQUAL_WEIGHTS = [[0.5, 0.5], [0.5, 0.5]]
# printed with three decimals; rows are renormalised on load
UNEQUAL_WEIGHTS = [[0.666, 0.333], [0.333, 0.666]]

_DENOISING = {
    "network.node_count": 2,
    "network.A": EQUAL_WEIGHTS,
    "network.C": EQUAL_WEIGHTS,
    "kernel.family": "gaussian",
    "kernel.sigma": 0.1,
    "filter.mu": 0.2,
    "filter.mu_linear": 0.02,
    "simulation.noise_variance": 0.16,
    "simulation.embedding_length": 1,
    "simulation.sample_count": 1000,
    "simulation.monte_carlo_runs": 20,
    "simulation.algorithms": ["lms", "diffusion_lms", "diffusion_rls", "klms", "diffusion_klms"],
}

PRESETS = {
    # learning curves, equal error weights
    "fig1": dict(_DENOISING),
    # learning curves, unequal error weights
    "fig2": {**_DENOISING, "network.A": UNEQUAL_WEIGHTS},
    # steady-state floor versus step size
    "fig3": {
        **_DENOISING,
        "simulation.algorithms": ["diffusion_klms"],
        "sweep.mu_values": [0.05, 0.1, 0.15, 0.2, 0.25],
    },
    # transient at step size 0.12
    "fig4": {
        **_DENOISING,
        "filter.mu": 0.12,
        "simulation.monte_carlo_runs": 50,
        "simulation.algorithms": ["diffusion_klms"],
    },
    # floor versus network size at 10 and 20 dB
    "fig5": {
        **_DENOISING,
        "simulation.monte_carlo_runs": 1,
        "simulation.algorithms": ["diffusion_klms"],
        "sweep.sizes": [1, 2, 4, 8],
        "sweep.snr_db": [10.0, 20.0],
        "sweep.matrix_draws": 100,
    },
}

PRESET_NAMES = sorted(PRESETS)


def get_preset(name: str) -> dict:
    return dict(PRESETS[name])
