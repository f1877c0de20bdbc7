import logging

import numpy as np

from filters.base_filter import AdaptiveFilter, check_finite
from filters.kernel_dictionary import KernelDictionary
from kernels.kernel_functions import KernelSpec

logger = logging.getLogger(__name__)

_SELF_WEIGHT = np.ones(1)


def new_klms_dictionary(dim: int, mu: float, kernel: KernelSpec, budget: int = None) -> KernelDictionary:
    return KernelDictionary(node_count=1, dim=dim, step_size=mu, kernel=kernel, budget=budget)


def klms_predict(dictionary: KernelDictionary, x) -> float:
    """``mu * sum_i e(i) k(x_i, x)``; zero while the dictionary is empty."""
    return dictionary.expansion(_SELF_WEIGHT, x, node=0)


def klms_update(dictionary: KernelDictionary, x, d):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d = np.asarray(d, dtype=float)
    check_finite(x, d)

    ds = d.reshape(1)
    ys = np.array([klms_predict(dictionary, x)])
    errors = ds - ys
    dictionary.append(x[np.newaxis, :], errors)
    return dictionary, float(errors[0])


class KlmsFilter(AdaptiveFilter):
    """Independent KLMS at every node, each with its own dictionary."""

    name = "klms"

    def __init__(self, node_count: int, dim: int, mu: float, kernel: KernelSpec, budget: int = None):
        super().__init__(node_count)
        self.dictionaries = [new_klms_dictionary(dim, mu, kernel, budget) for _ in range(node_count)]

    def step(self, xs, ds):
        xs, ds = self._validate(xs, ds)
        errors = np.empty(self.node_count)
        for q, dictionary in enumerate(self.dictionaries):
            _, errors[q] = klms_update(dictionary, xs[q], ds[q])
        return errors
