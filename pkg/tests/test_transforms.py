"""Scalar machinery: endpoints, shapes, weights and similarity properties."""
import math

import numpy as np
import pytest

from iwbench.transforms import (
    cosine_sim,
    decay_weights,
    inverse_decay_weights,
    modified_softmax,
    upper_convex_log,
)


class TestCosineSim:
    def test_orthogonal(self):
        assert cosine_sim([1, 0], [0, 1]) == 0.0

    def test_parallel(self):
        assert cosine_sim([2, 2, 2], [5, 5, 5]) == pytest.approx(1.0)

    def test_direct_evaluation(self):
        # oracle: plain sum formula
        a, b = [1, 2, 3], [4, 5, 6]
        num = sum(x * y for x, y in zip(a, b))
        den = math.sqrt(sum(x * x for x in a)) * math.sqrt(sum(y * y for y in b))
        assert cosine_sim(a, b) == pytest.approx(num / den, abs=1e-12)
        assert cosine_sim(a, b) == pytest.approx(0.97463, abs=1e-5)

    def test_zero_vector_is_zero(self):
        assert cosine_sim([0, 0, 0], [1, 2, 3]) == 0.0
        assert cosine_sim([0, 0], [0, 0]) == 0.0

    def test_scale_invariance(self, rng):
        for _ in range(50):
            a = rng.normal(size=4)
            b = rng.normal(size=4)
            alpha, beta = rng.uniform(0.1, 10, size=2)
            assert cosine_sim(alpha * a, beta * b) == pytest.approx(cosine_sim(a, b), abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            cosine_sim([1, 2], [1, 2, 3])


class TestModifiedSoftmax:
    def test_endpoints(self):
        for lam in (0.5, 5.0, 20.0):
            assert modified_softmax(0.0, lam) == 0.0
            assert modified_softmax(1.0, lam) == pytest.approx(1.0, abs=1e-12)

    def test_direct_evaluation(self):
        expected = (math.exp(2.5) - 1) / (math.exp(5) - 1)
        assert modified_softmax(0.5, 5.0) == pytest.approx(expected, abs=1e-12)
        assert modified_softmax(0.5, 5.0) == pytest.approx(0.07586, abs=1e-5)

    def test_strictly_increasing_and_convex(self):
        xs = np.linspace(0, 1, 1000)
        ys = np.array([modified_softmax(x, 5.0) for x in xs])
        assert np.all(np.diff(ys) > 0)
        assert np.all(np.diff(ys, 2) > 0)  # convex

    def test_invalid_lambda(self):
        with pytest.raises(ValueError):
            modified_softmax(0.5, 0.0)


class TestUpperConvexLog:
    def test_endpoints(self):
        for k in (1.0, 15.0, 100.0):
            assert upper_convex_log(0.0, k) == 0.0
            assert upper_convex_log(1.0, k) == pytest.approx(1.0, abs=1e-12)

    def test_direct_evaluation(self):
        expected = math.log(8.5) / math.log(16.0)
        assert upper_convex_log(0.5, 15.0) == pytest.approx(expected, abs=1e-12)

    def test_strictly_increasing_and_concave(self):
        xs = np.linspace(0, 1, 1000)
        ys = np.array([upper_convex_log(x, 15.0) for x in xs])
        assert np.all(np.diff(ys) > 0)
        assert np.all(np.diff(ys, 2) < 0)  # concave

    def test_invalid_k(self):
        with pytest.raises(ValueError):
            upper_convex_log(0.5, -1.0)


class TestDecayWeights:
    def test_single_weight(self):
        assert decay_weights(2, 3.0).tolist() == [1.0]

    def test_uniform_limit(self):
        w = decay_weights(3, 1e-9)
        assert w == pytest.approx([0.5, 0.5], abs=1e-6)

    def test_direct_evaluation(self):
        # oracle: unnormalized exponentials summed by hand
        raw = [math.exp(-1.0), math.exp(-2.0), math.exp(-3.0)]
        expected = [r / sum(raw) for r in raw]
        w = decay_weights(4, 1.0)
        assert w == pytest.approx(expected, abs=1e-12)
        assert w == pytest.approx([0.66524, 0.24473, 0.09003], abs=1e-5)

    def test_sums_to_one_and_decreasing(self):
        for t, coeff in [(2, 0.05), (10, 0.15), (300, 1.0), (5, 0.001)]:
            w = decay_weights(t, coeff)
            assert w.sum() == pytest.approx(1.0, abs=1e-9)
            assert np.all(np.diff(w) < 0) or len(w) == 1

    def test_faster_decay_weighs_distance_one_more(self):
        # for beta > alpha the faster-decaying weights put more mass at d=1
        alpha, beta = 0.05, 0.15
        for t in (3, 10, 81):
            assert decay_weights(t, beta)[0] > decay_weights(t, alpha)[0]

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            decay_weights(1, 1.0)
        with pytest.raises(ValueError):
            decay_weights(5, 0.0)


class TestInverseDecayWeights:
    def test_single_weight(self):
        assert inverse_decay_weights(2, 1.0).tolist() == [1.0]
        assert inverse_decay_weights(3, 1.0).tolist() == [1.0]

    def test_uniform_limit(self):
        assert inverse_decay_weights(4, 1e-9) == pytest.approx([0.5, 0.5], abs=1e-6)

    def test_direct_evaluation_prose_mode(self):
        raw = [1.0, math.exp(-1.0), math.exp(-2.0)]
        expected = [r / sum(raw) for r in raw]
        w = inverse_decay_weights(6, 1.0, mode="prose")
        assert w == pytest.approx(expected, abs=1e-12)
        assert w == pytest.approx([0.66524, 0.24473, 0.09003], abs=1e-5)

    def test_formula_mode_peaks_at_midpoint(self):
        # distance from the midpoint: d = |T/2 - t|, largest weight at t = T/2
        w = inverse_decay_weights(6, 1.0, mode="formula")
        raw = [math.exp(-abs(3.0 - t)) for t in (1, 2, 3)]
        expected = [r / sum(raw) for r in raw]
        assert w == pytest.approx(expected, abs=1e-12)
        assert w[-1] == max(w)

    def test_prose_mode_largest_at_first_pair(self):
        w = inverse_decay_weights(20, 0.05, mode="prose")
        assert w[0] == max(w)
        assert np.all(np.diff(w) < 0)

    def test_sums_to_one(self):
        for t in (2, 5, 81, 200):
            for mode in ("prose", "formula"):
                assert inverse_decay_weights(t, 0.05, mode).sum() == pytest.approx(1.0, abs=1e-9)

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            inverse_decay_weights(6, 1.0, mode="sideways")
