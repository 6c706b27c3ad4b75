"""Boosting-loop invariants and arithmetic checks."""

import numpy as np
import pytest

from onebit_mimo import (
    BoostConfig,
    WeightedTrainingSet,
    alpha_from_error,
    run_boost,
    sign_pm,
    update_weights,
    weak_mean_diff,
    weighted_error,
)
from onebit_mimo.boosting import WeakFitError


CFG = BoostConfig(iterations=10)


class TestWeightedError:
    def test_all_correct(self):
        y = np.array([1.0, -1.0, 1.0])
        assert weighted_error(y, y, np.full(3, 1 / 3)) == 0.0

    def test_all_wrong(self):
        y = np.array([1.0, -1.0, 1.0])
        assert weighted_error(-y, y, np.full(3, 1 / 3)) == pytest.approx(1.0, abs=1e-15)

    def test_counting(self):
        y = np.ones(8)
        pred = y.copy()
        pred[:3] = -1.0
        assert weighted_error(pred, y, np.full(8, 1 / 8)) == pytest.approx(0.375, abs=1e-15)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="inconsistent"):
            weighted_error(np.ones(3), np.ones(4), np.full(4, 0.25))


class TestAlphaFromError:
    def test_quarter_log_three(self):
        assert alpha_from_error(0.25, CFG) == pytest.approx(0.25 * np.log(3.0), abs=1e-15)

    def test_symmetry_point(self):
        assert alpha_from_error(0.5, CFG) == 0.0

    def test_zero_error_clamped(self):
        expected = 0.25 * np.log((1 - 1e-10) / 1e-10)
        assert alpha_from_error(0.0, CFG) == pytest.approx(expected, abs=1e-12)
        assert alpha_from_error(0.0, CFG) == pytest.approx(5.7565, abs=1e-3)

    def test_negative_above_half(self):
        assert alpha_from_error(0.75, CFG) < 0.0

    def test_textbook_coefficient(self):
        cfg = BoostConfig(iterations=1, alpha_coefficient=0.5)
        assert alpha_from_error(0.25, cfg) == pytest.approx(0.5 * np.log(3.0), abs=1e-15)


class TestUpdateWeights:
    def test_no_misclassifications_unchanged(self):
        w = np.full(4, 0.25)
        out = update_weights(w, np.zeros(4, dtype=bool), 0.7)
        np.testing.assert_array_equal(out, w)

    def test_single_misclassified_ratio(self):
        w = np.full(4, 0.25)
        mis = np.array([True, False, False, False])
        out = update_weights(w, mis, np.log(2.0))
        np.testing.assert_allclose(out, [0.4, 0.2, 0.2, 0.2], atol=1e-15)

    def test_normalized_output(self, rng):
        w = rng.random(50)
        w /= w.sum()
        out = update_weights(w, rng.random(50) > 0.5, 1.3)
        assert abs(out.sum() - 1.0) <= 1e-12
        assert np.all(out > 0)

    def test_exact_reweight_ratio(self):
        w = np.full(6, 1 / 6)
        mis = np.array([True, True, False, False, False, False])
        alpha = 0.37
        out = update_weights(w, mis, alpha)
        assert out[0] / out[2] == pytest.approx(np.exp(alpha), rel=1e-14)


class SeparableToy:
    """2-D linearly separable set with a mean-difference weak learner."""

    def __init__(self, rng, m=64):
        self.labels = sign_pm(rng.standard_normal(m))
        self.features = self.labels[:, None] * np.array([1.5, 0.8]) + 0.4 * rng.standard_normal((m, 2))

    def fit(self, _data, weights):
        return weak_mean_diff(WeightedTrainingSet(self.features, self.labels, weights))

    def predict(self, _data, h):
        return sign_pm(self.features @ h)


class TestRunBoost:
    def test_single_iteration_combination(self, rng):
        toy = SeparableToy(rng)
        cfg = BoostConfig(iterations=1)
        combined, trace = run_boost(None, toy.labels, toy.fit, toy.predict, cfg)
        h1 = toy.fit(None, np.full(len(toy.labels), 1 / len(toy.labels)))
        np.testing.assert_allclose(combined, trace.alphas[0] * h1, atol=1e-12)
        u = combined / np.linalg.norm(combined)
        np.testing.assert_allclose(u, h1 / np.linalg.norm(h1), atol=1e-12)

    def test_boosting_does_not_hurt_training_error(self, rng):
        toy = SeparableToy(rng)
        m = len(toy.labels)
        uniform = np.full(m, 1.0 / m)
        h1 = toy.fit(None, uniform)
        weak_err = np.mean(sign_pm(toy.features @ h1) != toy.labels)
        combined, _ = run_boost(None, toy.labels, toy.fit, toy.predict, CFG)
        boosted_err = np.mean(sign_pm(toy.features @ combined) != toy.labels)
        assert boosted_err <= weak_err

    def test_weight_simplex_every_iteration(self, rng):
        toy = SeparableToy(rng)
        sums = []

        def spying_fit(data, weights):
            sums.append(weights.sum())
            assert np.all(weights > 0)
            return toy.fit(data, weights)

        run_boost(None, toy.labels, spying_fit, toy.predict, CFG)
        assert len(sums) == CFG.iterations
        assert all(abs(s - 1.0) <= 1e-12 for s in sums)

    def test_deterministic_trace(self, rng):
        toy = SeparableToy(rng)
        _, t1 = run_boost(None, toy.labels, toy.fit, toy.predict, CFG)
        _, t2 = run_boost(None, toy.labels, toy.fit, toy.predict, CFG)
        assert t1.errors == t2.errors
        assert t1.alphas == t2.alphas

    def test_extending_iterations_preserves_prefix(self, rng):
        toy = SeparableToy(rng)
        _, t10 = run_boost(None, toy.labels, toy.fit, toy.predict, BoostConfig(iterations=10))
        _, t20 = run_boost(None, toy.labels, toy.fit, toy.predict, BoostConfig(iterations=20))
        assert t20.errors[:10] == t10.errors
        assert t20.alphas[:10] == t10.alphas

    def test_first_errors_better_than_random_on_sign_data(self, rng):
        m, n = 256, 8
        h_true = rng.standard_normal(n)
        features = sign_pm(rng.standard_normal((m, n)))
        labels = sign_pm(features @ h_true + 0.5 * rng.standard_normal(m))

        def fit(_d, w):
            return weak_mean_diff(WeightedTrainingSet(features, labels, w))

        def predict(_d, h):
            return sign_pm(features @ h)

        _, trace = run_boost(None, labels, fit, predict, BoostConfig(iterations=3))
        assert all(0.0 < e < 0.5 for e in trace.errors)

    def test_transform_applied_before_scoring(self, rng):
        toy = SeparableToy(rng)
        seen = []

        def transform(h):
            seen.append(h.copy())
            return 2.0 * h

        combined, trace = run_boost(
            None, toy.labels, toy.fit, toy.predict, BoostConfig(iterations=1),
            transform=transform,
        )
        np.testing.assert_allclose(combined, trace.alphas[0] * 2.0 * seen[0], atol=1e-12)

    def test_weak_fit_failure_annotated(self, rng):
        toy = SeparableToy(rng)
        calls = {"n": 0}

        def failing_fit(data, weights):
            calls["n"] += 1
            if calls["n"] == 3:
                raise RuntimeError("boom")
            return toy.fit(data, weights)

        with pytest.raises(WeakFitError, match="iteration 3"):
            run_boost(None, toy.labels, failing_fit, toy.predict, CFG)


class TestBoostConfig:
    def test_rejects_zero_iterations(self):
        with pytest.raises(ValueError, match="iterations"):
            BoostConfig(iterations=0)

    def test_rejects_bad_clamp(self):
        with pytest.raises(ValueError, match="epsilon_clamp"):
            BoostConfig(iterations=1, epsilon_clamp=0.6)
