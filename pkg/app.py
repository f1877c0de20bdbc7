"""Command-line entry point.

    python app.py simulate --preset fig1 --output-dir results/fig1 --html
    python app.py sweep-step-size --preset fig3
    python app.py sweep-nodes --preset fig5 --seed 7
    python app.py predict-transient --preset fig4 --gnuplot
    python app.py validate-config --config my_experiment.yaml
"""

import argparse
import logging
import sys

from config.experiment_config import DEFAULTS, load_config
from config.presets import PRESET_NAMES
from config.settings import LOG_LEVEL, TOOL_VERSION, get_output_dir
from utils.errors import ConfigError, DklmsError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def _defaults_epilog() -> str:
    lines = ["configuration keys and defaults:"]
    for key, value in DEFAULTS.items():
        shown = "(unset)" if value is None else value
        lines.append(f"  {key} = {shown}")
    lines.append("  exactly one of simulation.noise_variance / simulation.snr_db; "
                 "noise_variance 0.16 when neither is given")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="YAML experiment document")
    common.add_argument("--preset", type=str, default=None, choices=PRESET_NAMES,
                        help="figure parameter set; document keys override it")
    common.add_argument("--output-dir", type=str, default=None,
                        help="artifact directory (default: $DKLMS_OUTPUT_DIR or ./results)")
    common.add_argument("--seed", type=int, default=None, help="master seed, overrides simulation.seed")
    common.add_argument("--html", action="store_true", help="also write plotly HTML figures")
    common.add_argument("--gnuplot", action="store_true", help="also write a gnuplot script")
    common.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    common.add_argument("--no-progress", action="store_true", help="hide progress bars")

    parser = argparse.ArgumentParser(
        prog="dklms",
        description="Diffusion kernel LMS simulator: learning curves, sweeps and theory checks.",
        epilog=_defaults_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {TOOL_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common], help="learning curves of the configured algorithms")
    sub.add_parser("sweep-step-size", parents=[common], help="MSE floor vs step size, theory and experiment")
    sub.add_parser("sweep-nodes", parents=[common], help="MSE floor vs network size at each SNR")
    sub.add_parser("predict-transient", parents=[common], help="predicted vs simulated transient")
    sub.add_parser("validate-config", parents=[common], help="parse and validate a config, write nothing")
    return parser


def cmd_simulate(config, args, output_dir):
    from simulation.experiment import config_hash, mse_floor, run_experiment
    from utils.export import emit_csv, traces_to_frame, write_figure, write_gnuplot_script, write_manifest

    traces = run_experiment(config, show_progress=not args.no_progress)
    floors = {t.algorithm: mse_floor(t, config.tail_fraction) for t in traces}
    for tag, floor in floors.items():
        logger.info(f"MSE floor {tag}: {floor:.5g}")
    if "diffusion_klms" in floors and floors["diffusion_klms"] > 0:
        for tag, floor in floors.items():
            if tag != "diffusion_klms":
                logger.info(f"Floor ratio {tag}/diffusion_klms: {floor / floors['diffusion_klms']:.2f}")

    frame = traces_to_frame(traces)
    artifacts = emit_csv({"traces": frame}, output_dir)
    if args.gnuplot:
        artifacts.append(write_gnuplot_script(output_dir, "traces", artifacts[0], config.algorithms))
    if args.html:
        from utils.chart_helpers import learning_curves
        artifacts.append(write_figure(learning_curves(frame), output_dir, "traces"))
    write_manifest(output_dir, config_hash(config), config.seed, traces[0].seeds, artifacts,
                   "simulate", config.preset)


def cmd_sweep_step_size(config, args, output_dir):
    from simulation.experiment import config_hash, run_seed
    from simulation.sweeps import sweep_step_size
    from utils.export import emit_csv, write_figure, write_gnuplot_script, write_manifest

    table = sweep_step_size(config, show_progress=not args.no_progress)
    artifacts = emit_csv({"sweep_step_size": table}, output_dir)
    if args.gnuplot:
        artifacts.append(write_gnuplot_script(output_dir, "sweep_step_size", artifacts[0]))
    if args.html:
        from utils.chart_helpers import floors_vs_step_size
        artifacts.append(write_figure(floors_vs_step_size(table), output_dir, "sweep_step_size"))
    seeds = [run_seed(config, r) for r in range(config.monte_carlo_runs)]
    write_manifest(output_dir, config_hash(config), config.seed, seeds, artifacts,
                   "sweep-step-size", config.preset)


def cmd_sweep_nodes(config, args, output_dir):
    from simulation.experiment import config_hash
    from simulation.seeding import derive_seed
    from simulation.sweeps import sweep_network_size
    from utils.export import emit_csv, write_figure, write_gnuplot_script, write_manifest

    table = sweep_network_size(config, show_progress=not args.no_progress)
    artifacts = emit_csv({"sweep_nodes": table}, output_dir)
    if args.gnuplot:
        artifacts.append(write_gnuplot_script(output_dir, "sweep_nodes", artifacts[0]))
    if args.html:
        from utils.chart_helpers import floors_vs_size
        artifacts.append(write_figure(floors_vs_size(table), output_dir, "sweep_nodes"))
    seeds = [derive_seed(config.seed, "sweep-draw", d) for d in range(config.sweep.matrix_draws)]
    write_manifest(output_dir, config_hash(config), config.seed, seeds, artifacts,
                   "sweep-nodes", config.preset)


def cmd_predict_transient(config, args, output_dir):
    from simulation.experiment import config_hash, run_seed
    from simulation.sweeps import predict_transient
    from utils.export import emit_csv, write_figure, write_gnuplot_script, write_manifest

    prediction = predict_transient(config, show_progress=not args.no_progress)
    m = prediction.moments
    logger.info(f"Kernel moments: E[g]={m.g_mean:.4f}, E|g|={m.g_abs_mean:.4f}, E[g^2]={m.g_sq_mean:.4f}")
    artifacts = emit_csv({"transient": prediction.table}, output_dir)
    if args.gnuplot:
        artifacts.append(write_gnuplot_script(output_dir, "transient", artifacts[0]))
    if args.html:
        from utils.chart_helpers import transient_comparison
        fig = transient_comparison(prediction.table, prediction.empirical_time_constant)
        artifacts.append(write_figure(fig, output_dir, "transient"))
    seeds = [run_seed(config, r) for r in range(config.monte_carlo_runs)]
    write_manifest(output_dir, config_hash(config), config.seed, seeds, artifacts,
                   "predict-transient", config.preset)


COMMANDS = {
    "simulate": cmd_simulate,
    "sweep-step-size": cmd_sweep_step_size,
    "sweep-nodes": cmd_sweep_nodes,
    "predict-transient": cmd_predict_transient,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else getattr(logging, LOG_LEVEL, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        config = load_config(args.config, preset=args.preset, seed=args.seed)
    except ConfigError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG

    if args.command == "validate-config":
        from simulation.experiment import config_hash
        print(f"config OK ({config.node_count} nodes, hash {config_hash(config)[:12]})")
        return EXIT_OK

    output_dir = get_output_dir(args.output_dir)
    try:
        COMMANDS[args.command](config, args, output_dir)
    except ConfigError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG
    except DklmsError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_RUNTIME
    except Exception as e:
        logger.exception(f"{args.command} failed unexpectedly: {e}")
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
