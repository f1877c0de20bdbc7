"""Tests for kernel evaluation and the C-weighted combination."""

import math

import numpy as np
import pytest

from kernels.kernel_functions import (
    KernelFamily,
    KernelSpec,
    combined_kernel,
    gram_matrix,
    kernel_eval,
    kernel_pairs,
)
from utils.errors import DimensionMismatchError, ValidationError

GAUSS = KernelSpec(sigma=0.1)
UNIT = KernelSpec(sigma=1.0)
K01 = 1.0 / math.sqrt(2.0 * math.pi) * math.exp(-0.5)


class TestKernelEval:

    def test_self_value(self):
        assert kernel_eval(GAUSS, [0.3], [0.3]) == pytest.approx(3.98942280, rel=1e-8)
        assert GAUSS.peak == pytest.approx(3.98942280, rel=1e-8)

    def test_unit_spread(self):
        assert kernel_eval(UNIT, [0.0], [1.0]) == pytest.approx(0.24197072, rel=1e-8)

    def test_decays_to_zero(self):
        value = kernel_eval(GAUSS, [0.0], [1.0])
        assert 0.0 < value < 1e-20

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            kernel_eval(GAUSS, [0.0, 1.0], [0.0])

    def test_symmetry_and_bounds(self, rng):
        for _ in range(50):
            x, y = rng.standard_normal(3) * 0.1, rng.standard_normal(3) * 0.1
            kxy = kernel_eval(GAUSS, x, y)
            assert kxy == kernel_eval(GAUSS, y, x)
            assert 0.0 < kxy < GAUSS.peak

    def test_unnormalized_peak(self):
        spec = KernelSpec(sigma=0.5, normalized=False)
        assert kernel_eval(spec, [1.0, 2.0], [1.0, 2.0]) == 1.0

    def test_polynomial(self):
        spec = KernelSpec(family=KernelFamily.POLYNOMIAL, degree=2, offset=1.0)
        assert kernel_eval(spec, [1.0, 2.0], [3.0, 4.0]) == pytest.approx(144.0)

    def test_invalid_spread(self):
        with pytest.raises(ValidationError):
            KernelSpec(sigma=0.0)

    def test_invalid_degree(self):
        with pytest.raises(ValidationError):
            KernelSpec(family="polynomial", degree=0)


class TestCombinedKernel:

    def test_single_node(self):
        assert combined_kernel(GAUSS, [1.0], [[0.2]], [0.2]) == pytest.approx(3.98942280, rel=1e-8)

    def test_equal_centers(self):
        value = combined_kernel(GAUSS, [0.5, 0.5], [[0.2], [0.2]], [0.2])
        assert value == pytest.approx(3.98942280, rel=1e-8)

    def test_two_centers(self):
        value = combined_kernel(UNIT, [0.5, 0.5], [[0.0], [1.0]], [0.0])
        assert value == pytest.approx(0.5 / math.sqrt(2.0 * math.pi) + 0.5 * K01, rel=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            combined_kernel(GAUSS, [0.5, 0.5], [[0.0], [1.0], [2.0]], [0.0])

    def test_within_individual_range(self, rng):
        for _ in range(30):
            centers = rng.standard_normal((4, 2)) * 0.1
            query = rng.standard_normal(2) * 0.1
            weights = rng.dirichlet(np.ones(4))
            values = kernel_pairs(GAUSS, centers, query)
            g = combined_kernel(GAUSS, weights, centers, query)
            assert values.min() - 1e-12 <= g <= values.max() + 1e-12


class TestGramMatrix:

    def test_positive_semidefinite(self, rng):
        for _ in range(20):
            points = rng.standard_normal((8, 2)) * 0.2
            eigenvalues = np.linalg.eigvalsh(gram_matrix(GAUSS, points))
            assert eigenvalues.min() >= -1e-9

    def test_matches_pairwise_evaluation(self, rng):
        points = rng.standard_normal((5, 3))
        gram = gram_matrix(UNIT, points)
        for i in range(5):
            for j in range(5):
                assert gram[i, j] == pytest.approx(kernel_eval(UNIT, points[i], points[j]), rel=1e-12)
