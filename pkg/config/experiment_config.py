"""Experiment configuration documents.

Documents are YAML. Keys may be nested (``filter: {mu: 0.2}``) or dotted
(``filter.mu: 0.2``); both forms are flattened to dotted keys, laid over
the defaults and the optional preset, then validated into an immutable
``ExperimentConfig``.
"""

from dataclasses import dataclass, field, replace
import logging
import math
from pathlib import Path

import yaml

from config.presets import PRESETS
from config.settings import (
    ALGORITHMS,
    DEFAULT_EMBEDDING_LENGTH,
    DEFAULT_FORGETTING,
    DEFAULT_MOMENT_SAMPLES,
    DEFAULT_RLS_INIT,
    DEFAULT_TAIL_FRACTION,
)
from kernels.kernel_functions import KernelFamily, KernelSpec
from network.graph import NetworkGraph, build_graph
from network.stochastic import StochasticMatrix, resolve_matrix
from utils.errors import ConfigError, ConfigInvalidError, ConfigParseError, ValidationError

logger = logging.getLogger(__name__)

KNOWN_ALGORITHMS = ALGORITHMS + ["rls"]

DEFAULTS = {
    "network.node_count": 2,
    "network.A": "uniform",
    "network.C": "uniform",
    "kernel.family": "gaussian",
    "kernel.sigma": 0.1,
    "kernel.degree": 2,
    "kernel.offset": 1.0,
    "kernel.normalized": True,
    "filter.mu": 0.2,
    "filter.mu_linear": 0.02,
    "filter.lambda": DEFAULT_FORGETTING,
    "filter.rls_init": DEFAULT_RLS_INIT,
    "filter.dictionary_budget": "unbounded",
    "filter.diffusion_mode": "ATC",
    "simulation.noise_variance": None,
    "simulation.snr_db": None,
    "simulation.embedding_length": DEFAULT_EMBEDDING_LENGTH,
    "simulation.sample_count": 1000,
    "simulation.monte_carlo_runs": 20,
    "simulation.seed": 0,
    "simulation.algorithms": list(ALGORITHMS),
    "simulation.tail_fraction": DEFAULT_TAIL_FRACTION,
    "simulation.moment_samples": DEFAULT_MOMENT_SAMPLES,
    "sweep.mu_values": [0.05, 0.1, 0.15, 0.2, 0.25],
    "sweep.sizes": [1, 2, 4, 8],
    "sweep.snr_db": [10.0, 20.0],
    "sweep.matrix_draws": 1000,
}

# used when a document names neither noise key
DEFAULT_NOISE_VARIANCE = 0.16
NOISE_KEYS = ("simulation.noise_variance", "simulation.snr_db")


@dataclass(frozen=True)
class SweepConfig:
    mu_values: tuple = (0.05, 0.1, 0.15, 0.2, 0.25)
    sizes: tuple = (1, 2, 4, 8)
    snr_db: tuple = (10.0, 20.0)
    matrix_draws: int = 1000


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a simulation needs, validated.

    Exactly one of ``noise_variance`` and ``snr_db`` is set.
    """

    node_count: int
    A: StochasticMatrix
    C: StochasticMatrix
    kernel: KernelSpec = field(default_factory=KernelSpec)
    mu: float = 0.2
    mu_linear: float = 0.02
    forgetting: float = DEFAULT_FORGETTING
    rls_init: float = DEFAULT_RLS_INIT
    dictionary_budget: int = None
    diffusion_mode: str = "ATC"
    noise_variance: float = DEFAULT_NOISE_VARIANCE
    snr_db: float = None
    embedding_length: int = DEFAULT_EMBEDDING_LENGTH
    sample_count: int = 1000
    monte_carlo_runs: int = 20
    seed: int = 0
    algorithms: tuple = tuple(ALGORITHMS)
    tail_fraction: float = DEFAULT_TAIL_FRACTION
    moment_samples: int = DEFAULT_MOMENT_SAMPLES
    sweep: SweepConfig = field(default_factory=SweepConfig)
    preset: str = None

    def graph(self) -> NetworkGraph:
        return build_graph(self.A, self.C)

    @property
    def trace_length(self) -> int:
        return self.sample_count - self.embedding_length + 1

    def with_overrides(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        """Canonical dotted-key form (matrices as nested lists)."""
        return {
            "network.node_count": self.node_count,
            "network.A": self.A.tolist(),
            "network.C": self.C.tolist(),
            "kernel.family": self.kernel.family.value,
            "kernel.sigma": self.kernel.sigma,
            "kernel.degree": self.kernel.degree,
            "kernel.offset": self.kernel.offset,
            "kernel.normalized": self.kernel.normalized,
            "filter.mu": self.mu,
            "filter.mu_linear": self.mu_linear,
            "filter.lambda": self.forgetting,
            "filter.rls_init": self.rls_init,
            "filter.dictionary_budget": self.dictionary_budget if self.dictionary_budget else "unbounded",
            "filter.diffusion_mode": self.diffusion_mode,
            "simulation.noise_variance": self.noise_variance,
            "simulation.snr_db": self.snr_db,
            "simulation.embedding_length": self.embedding_length,
            "simulation.sample_count": self.sample_count,
            "simulation.monte_carlo_runs": self.monte_carlo_runs,
            "simulation.seed": self.seed,
            "simulation.algorithms": list(self.algorithms),
            "simulation.tail_fraction": self.tail_fraction,
            "simulation.moment_samples": self.moment_samples,
            "sweep.mu_values": list(self.sweep.mu_values),
            "sweep.sizes": list(self.sweep.sizes),
            "sweep.snr_db": list(self.sweep.snr_db),
            "sweep.matrix_draws": self.sweep.matrix_draws,
        }


# ── Document reading ─────────────────────────────────────────────
def _key_lines(node, prefix: str = "", lines: dict = None) -> dict:
    """Line number of every dotted key in a composed YAML mapping."""
    lines = {} if lines is None else lines
    if not isinstance(node, yaml.MappingNode):
        return lines
    for key_node, value_node in node.value:
        dotted = f"{prefix}{key_node.value}"
        lines[dotted] = key_node.start_mark.line + 1
        if isinstance(value_node, yaml.MappingNode):
            _key_lines(value_node, f"{dotted}.", lines)
    return lines


def _flatten(mapping: dict, prefix: str = "", out: dict = None) -> dict:
    out = {} if out is None else out
    for key, value in mapping.items():
        dotted = f"{prefix}{key}"
        if isinstance(value, dict):
            _flatten(value, f"{dotted}.", out)
        else:
            out[dotted] = value
    return out


def read_document(text: str) -> dict:
    """Parse a YAML document into a dict of dotted keys.

    Raises ``ConfigParseError`` on syntax errors (with the line) and on
    unknown keys (with the key and its line).
    """
    try:
        data = yaml.safe_load(text)
        tree = yaml.compose(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ConfigParseError(f"malformed document: {getattr(e, 'problem', e)}", line=line)

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigParseError("document must be a mapping of keys to values", line=1)

    flat = _flatten(data)
    lines = _key_lines(tree)
    for key in flat:
        if key not in DEFAULTS:
            raise ConfigParseError("unknown key", line=lines.get(key), key=key)
    return flat


# ── Value coercion ───────────────────────────────────────────────
def _number(values: dict, key: str) -> float:
    value = values[key]
    if isinstance(value, str):
        # YAML 1.1 reads exponent literals without a dot (1e-3) as strings
        try:
            value = float(value)
        except ValueError:
            raise ConfigInvalidError(f"{key} must be a number", repr(value))
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigInvalidError(f"{key} must be a number", repr(value))
    if not math.isfinite(value):
        raise ConfigInvalidError(f"{key} must be finite", repr(value))
    return float(value)


def _positive(values: dict, key: str) -> float:
    number = _number(values, key)
    if not number > 0:
        raise ConfigInvalidError(f"{key} must be > 0", repr(values[key]))
    return number


def _integer(values: dict, key: str, minimum: int) -> int:
    value = values[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigInvalidError(f"{key} must be an integer", repr(value))
    if value < minimum:
        raise ConfigInvalidError(f"{key} must be >= {minimum}", repr(value))
    return value


def _number_list(values: dict, key: str) -> tuple:
    items = values[key]
    if not isinstance(items, list) or not items:
        raise ConfigInvalidError(f"{key} must be a non-empty list", repr(items))
    return tuple(_number({key: v}, key) for v in items)


def _budget(value):
    if value is None or (isinstance(value, str) and value.strip().lower() == "unbounded"):
        return None
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigInvalidError("filter.dictionary_budget must be 'unbounded' or a positive integer", repr(value))
    return value


def _matrix(value, n: int, name: str) -> StochasticMatrix:
    try:
        return resolve_matrix(value, n, name)
    except ValidationError as e:
        raise ConfigInvalidError(f"network.{name} must be row-stochastic", str(e))


def _kernel(values: dict) -> KernelSpec:
    family = values["kernel.family"]
    if family not in {f.value for f in KernelFamily}:
        raise ConfigInvalidError("kernel.family must be 'gaussian' or 'polynomial'", repr(family))
    normalized = values["kernel.normalized"]
    if not isinstance(normalized, bool):
        raise ConfigInvalidError("kernel.normalized must be true or false", repr(normalized))
    sigma = _positive(values, "kernel.sigma")
    degree = _integer(values, "kernel.degree", 1)
    offset = _number(values, "kernel.offset")
    if offset < 0:
        raise ConfigInvalidError("kernel.offset must be >= 0", repr(offset))
    return KernelSpec(family=KernelFamily(family), sigma=sigma, degree=degree,
                      offset=offset, normalized=normalized)


def _noise(values: dict, document: dict, preset_values: dict):
    explicit = [k for k in NOISE_KEYS if document.get(k) is not None]
    if len(explicit) == 2:
        raise ConfigInvalidError("exactly one of simulation.noise_variance / simulation.snr_db",
                                 "both are set")
    if explicit:
        chosen = explicit[0]
    else:
        from_preset = [k for k in NOISE_KEYS if preset_values.get(k) is not None]
        chosen = from_preset[0] if from_preset else None

    if chosen is None:
        return DEFAULT_NOISE_VARIANCE, None
    if chosen == "simulation.snr_db":
        return None, _number(values, chosen)
    variance = _number(values, chosen)
    if variance < 0:
        raise ConfigInvalidError("simulation.noise_variance must be >= 0", repr(variance))
    return variance, None


def build_config(document: dict, preset: str = None, seed: int = None) -> ExperimentConfig:
    """Lay ``document`` over the preset and the defaults, then validate."""
    if preset is not None and preset not in PRESETS:
        raise ConfigInvalidError("preset must be one of " + ", ".join(sorted(PRESETS)), repr(preset))
    preset_values = dict(PRESETS[preset]) if preset else {}
    values = {**DEFAULTS, **preset_values, **document}
    if seed is not None:
        values["simulation.seed"] = seed

    n = _integer(values, "network.node_count", 1)
    A = _matrix(values["network.A"], n, "A")
    C = _matrix(values["network.C"], n, "C")

    mode = str(values["filter.diffusion_mode"]).upper()
    if mode not in ("ATC", "CTA"):
        raise ConfigInvalidError("filter.diffusion_mode must be 'ATC' or 'CTA'", repr(values["filter.diffusion_mode"]))
    forgetting = _number(values, "filter.lambda")
    if not 0 < forgetting <= 1:
        raise ConfigInvalidError("filter.lambda must lie in (0, 1]", repr(forgetting))

    noise_variance, snr_db = _noise(values, document, preset_values)

    T = _integer(values, "simulation.embedding_length", 1)
    sample_count = _integer(values, "simulation.sample_count", 1)
    if sample_count < T:
        raise ConfigInvalidError("sample_count >= embedding_length", f"{sample_count} < {T}")

    algorithms = values["simulation.algorithms"]
    if isinstance(algorithms, str):
        algorithms = [algorithms]
    if not isinstance(algorithms, list) or not algorithms:
        raise ConfigInvalidError("simulation.algorithms must be a non-empty list", repr(algorithms))
    unknown = [a for a in algorithms if a not in KNOWN_ALGORITHMS]
    if unknown:
        raise ConfigInvalidError("simulation.algorithms must name known filters",
                                 f"unknown {unknown}; known {KNOWN_ALGORITHMS}")

    tail = _number(values, "simulation.tail_fraction")
    if not 0 < tail <= 1:
        raise ConfigInvalidError("simulation.tail_fraction must lie in (0, 1]", repr(tail))

    mu_values = _number_list(values, "sweep.mu_values")
    if any(mu <= 0 for mu in mu_values):
        raise ConfigInvalidError("sweep.mu_values must all be > 0", repr(list(mu_values)))
    sizes = values["sweep.sizes"]
    if not isinstance(sizes, list) or not sizes:
        raise ConfigInvalidError("sweep.sizes must be a non-empty list", repr(sizes))
    sizes = tuple(_integer({"sweep.sizes": s}, "sweep.sizes", 1) for s in sizes)

    config = ExperimentConfig(
        node_count=n,
        A=A,
        C=C,
        kernel=_kernel(values),
        mu=_positive(values, "filter.mu"),
        mu_linear=_positive(values, "filter.mu_linear"),
        forgetting=forgetting,
        rls_init=_positive(values, "filter.rls_init"),
        dictionary_budget=_budget(values["filter.dictionary_budget"]),
        diffusion_mode=mode,
        noise_variance=noise_variance,
        snr_db=snr_db,
        embedding_length=T,
        sample_count=sample_count,
        monte_carlo_runs=_integer(values, "simulation.monte_carlo_runs", 1),
        seed=_integer(values, "simulation.seed", 0),
        algorithms=tuple(algorithms),
        tail_fraction=tail,
        moment_samples=_integer(values, "simulation.moment_samples", 2),
        sweep=SweepConfig(
            mu_values=mu_values,
            sizes=sizes,
            snr_db=_number_list(values, "sweep.snr_db"),
            matrix_draws=_integer(values, "sweep.matrix_draws", 1),
        ),
        preset=preset,
    )
    logger.debug(f"Parsed config: {n} nodes, algorithms {list(config.algorithms)}, seed {config.seed}")
    return config


def parse_config(text: str, preset: str = None, seed: int = None) -> ExperimentConfig:
    """Parse and validate a configuration document.

    Explicit document keys override preset keys; ``seed`` overrides
    ``simulation.seed``.
    """
    return build_config(read_document(text or ""), preset=preset, seed=seed)


def load_config(path=None, preset: str = None, seed: int = None) -> ExperimentConfig:
    """Read a document from disk (or use only the preset when ``path`` is None)."""
    if path is None:
        return parse_config("", preset=preset, seed=seed)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}")
    return parse_config(text, preset=preset, seed=seed)
