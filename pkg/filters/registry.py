import logging

from config.experiment_config import ExperimentConfig
from filters.base_filter import AdaptiveFilter
from filters.diffusion_klms_filter import DiffusionKlmsFilter
from filters.klms_filter import KlmsFilter
from filters.lms_filter import DiffusionLmsFilter, LmsFilter
from filters.rls_filter import DiffusionRlsFilter, RlsFilter
from network.graph import NetworkGraph
from utils.errors import ConfigInvalidError

logger = logging.getLogger(__name__)


def build_filter(tag: str, config: ExperimentConfig, graph: NetworkGraph, dim: int) -> AdaptiveFilter:
    """Fresh filter for algorithm ``tag`` with the config's parameters."""
    n = graph.node_count
    if tag == "lms":
        return LmsFilter(n, dim, config.mu_linear)
    if tag == "diffusion_lms":
        return DiffusionLmsFilter(graph, dim, config.mu_linear, config.diffusion_mode)
    if tag == "rls":
        return RlsFilter(n, dim, config.forgetting, config.rls_init)
    if tag == "diffusion_rls":
        return DiffusionRlsFilter(graph, dim, config.forgetting, config.rls_init)
    if tag == "klms":
        return KlmsFilter(n, dim, config.mu, config.kernel, config.dictionary_budget)
    if tag == "diffusion_klms":
        return DiffusionKlmsFilter(graph, dim, config.mu, config.kernel, config.dictionary_budget)
    raise ConfigInvalidError("simulation.algorithms must name known filters", repr(tag))
