"""Artifact writers: CSV tables, run manifest, gnuplot scripts, HTML figures."""

import json
import logging
from pathlib import Path

import pandas as pd

from config.settings import TOOL_NAME, TOOL_VERSION
from utils.errors import ExportError

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ["iteration", "algorithm", "mse"]
MANIFEST_NAME = "manifest.json"


def traces_to_frame(traces) -> pd.DataFrame:
    """Long-format table ``iteration, algorithm, mse`` over all traces."""
    frames = [
        pd.DataFrame({
            "iteration": range(len(trace.values)),
            "algorithm": trace.algorithm,
            "mse": trace.values,
        })
        for trace in traces
    ]
    if not frames:
        return pd.DataFrame(columns=TRACE_COLUMNS)
    return pd.concat(frames, ignore_index=True)[TRACE_COLUMNS]


def _ensure_dir(output_dir) -> Path:
    path = Path(output_dir)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ExportError(f"cannot create output directory {path}: {e}")
    return path


def emit_csv(tables: dict, output_dir) -> list:
    """Write each ``name -> DataFrame`` as ``<name>.csv``.

    Float formatting is pandas' shortest round-trip repr and line endings
    are ``\\n`` on every platform, so identical inputs give identical bytes.
    """
    directory = _ensure_dir(output_dir)
    paths = []
    for name, frame in tables.items():
        path = directory / f"{name}.csv"
        try:
            frame.to_csv(path, index=False, lineterminator="\n")
        except OSError as e:
            raise ExportError(f"cannot write {path}: {e}")
        logger.info(f"Wrote {len(frame)} rows to {path}")
        paths.append(path)
    return paths


def write_text(path, text: str) -> Path:
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as e:
        raise ExportError(f"cannot write {path}: {e}")
    return path


def write_manifest(output_dir, config_hash: str, master_seed: int, run_seeds, artifacts,
                   command: str, preset: str = None) -> Path:
    """JSON record of what produced the artifacts. Contains no timestamps."""
    directory = _ensure_dir(output_dir)
    manifest = {
        "tool": TOOL_NAME,
        "tool_version": TOOL_VERSION,
        "command": command,
        "preset": preset,
        "config_hash": config_hash,
        "master_seed": int(master_seed),
        "run_seeds": [int(s) for s in run_seeds],
        "artifacts": sorted(Path(a).name for a in artifacts),
    }
    path = write_text(directory / MANIFEST_NAME, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    logger.info(f"Wrote manifest to {path}")
    return path


_GNUPLOT_PLOTS = {
    "traces": (
        "set logscale y\n"
        "set xlabel 'iteration'\nset ylabel 'MSE'\n"
        "plot for [alg in ALGORITHMS] '< grep ,'.alg.', {csv}' "
        "using 1:3 with lines title alg\n"
    ),
    "sweep_step_size": (
        "set xlabel 'step size'\nset ylabel 'MSE floor'\n"
        "plot '{csv}' skip 1 using 1:4 with linespoints title 'experimental', "
        "'' skip 1 using 1:3 with lines title 'fixed point', "
        "'' skip 1 using 1:2 with lines dashtype 2 title 'misadjustment'\n"
    ),
    "sweep_nodes": (
        "set logscale y\n"
        "set xlabel 'number of nodes'\nset ylabel 'MSE floor'\n"
        "plot '< grep \",10.0,\" {csv}' using 1:3:4 with yerrorlines title '10 dB', "
        "'< grep \",20.0,\" {csv}' using 1:3:4 with yerrorlines title '20 dB'\n"
    ),
    "transient": (
        "set xlabel 'iteration'\nset ylabel 'MSE'\n"
        "plot '{csv}' skip 1 using 1:3 with lines title 'experimental', "
        "'' skip 1 using 1:2 with lines title 'theoretical'\n"
    ),
}


def write_gnuplot_script(output_dir, kind: str, csv_path, algorithms=()) -> Path:
    """Script that renders ``csv_path`` to ``<kind>.png`` with gnuplot."""
    if kind not in _GNUPLOT_PLOTS:
        raise ExportError(f"no gnuplot template for '{kind}'")
    directory = _ensure_dir(output_dir)
    csv_name = Path(csv_path).name
    header = (
        "set datafile separator ','\n"
        "set terminal pngcairo size 900,600\n"
        f"set output '{kind}.png'\n"
    )
    if algorithms:
        header += f"ALGORITHMS = '{' '.join(algorithms)}'\n"
    body = _GNUPLOT_PLOTS[kind].format(csv=csv_name)
    return write_text(directory / f"{kind}.gp", header + body)


def write_figure(fig, output_dir, name: str) -> Path:
    """Standalone HTML file for a plotly figure."""
    directory = _ensure_dir(output_dir)
    path = directory / f"{name}.html"
    try:
        fig.write_html(str(path), include_plotlyjs="cdn")
    except OSError as e:
        raise ExportError(f"cannot write {path}: {e}")
    logger.info(f"Wrote figure to {path}")
    return path
