"""Weighted Gaussian-discriminant weak classifiers.

Three hyperplane rules over a weighted +-1-labeled training set: the full
covariance solve, its diagonal approximation, and the bare mean difference
(a weighted matched filter). The weighted class means are plain weighted
sums without class-mass normalization; downstream normalization absorbs
the overall scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RIDGE_SCALE = 1e-8  # relative ridge for the full-covariance solve
VAR_CLAMP = 1e-12  # lower bound for per-feature variances


class DegenerateClassError(ValueError):
    """Raised when a training set has all labels in a single class."""


@dataclass(frozen=True)
class WeightedTrainingSet:
    """Feature rows with +-1 labels and normalized non-negative weights."""

    features: np.ndarray  # (m, n)
    labels: np.ndarray  # (m,) entries in {+1, -1}
    weights: np.ndarray  # (m,) >= 0, summing to 1

    def __post_init__(self):
        x, y, w = self.features, self.labels, self.weights
        m = x.shape[0]
        if y.shape != (m,) or w.shape != (m,):
            raise ValueError(
                f"inconsistent sizes: features {x.shape}, labels {y.shape}, weights {w.shape}"
            )
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
            raise ValueError("weights must be non-negative and sum to 1")
        if not (np.any(y > 0) and np.any(y < 0)):
            raise DegenerateClassError("training set must contain both label classes")

    @classmethod
    def uniform(cls, features: np.ndarray, labels: np.ndarray) -> "WeightedTrainingSet":
        features = np.asarray(features, dtype=float)
        labels = np.asarray(labels, dtype=float)
        m = features.shape[0]
        return cls(features, labels, np.full(m, 1.0 / m))


def weighted_class_means(ts: WeightedTrainingSet) -> tuple[np.ndarray, np.ndarray]:
    """Weighted per-class feature sums (mu_neg, mu_pos).

    Deliberately *not* divided by the within-class weight mass.
    """
    pos = ts.labels > 0
    cw = ts.weights[:, None] * ts.features
    mu_pos = cw[pos].sum(axis=0)
    mu_neg = cw[~pos].sum(axis=0)
    return mu_neg, mu_pos


def _centered(ts: WeightedTrainingSet, mu_neg: np.ndarray, mu_pos: np.ndarray) -> np.ndarray:
    centers = np.where((ts.labels > 0)[:, None], mu_pos[None, :], mu_neg[None, :])
    return ts.features - centers


def weighted_covariance_full(
    ts: WeightedTrainingSet, mu_neg: np.ndarray, mu_pos: np.ndarray
) -> np.ndarray:
    """Pooled weighted scatter about the label-matched means (n x n)."""
    d = _centered(ts, mu_neg, mu_pos)
    return (d * ts.weights[:, None]).T @ d


def weighted_covariance_diag(
    ts: WeightedTrainingSet, mu_neg: np.ndarray, mu_pos: np.ndarray
) -> np.ndarray:
    """Per-feature weighted variances: the diagonal of the full scatter,
    computed from elementwise squares without forming the n x n matrix."""
    d = _centered(ts, mu_neg, mu_pos)
    return (ts.weights[:, None] * d * d).sum(axis=0)


def _ridge_solve(cov: np.ndarray, gap: np.ndarray) -> np.ndarray:
    n = cov.shape[0]
    lam = RIDGE_SCALE * np.trace(cov) / n
    return np.linalg.solve(cov + lam * np.eye(n), gap)


def weak_gda_full(ts: WeightedTrainingSet) -> np.ndarray:
    """Full-covariance discriminant: solve (Sigma + ridge*I) h = mu gap."""
    mu_neg, mu_pos = weighted_class_means(ts)
    cov = weighted_covariance_full(ts, mu_neg, mu_pos)
    return _ridge_solve(cov, mu_pos - mu_neg)


def weak_gda_diag(ts: WeightedTrainingSet) -> np.ndarray:
    """Diagonal-covariance discriminant: elementwise mean gap / variance."""
    mu_neg, mu_pos = weighted_class_means(ts)
    var = weighted_covariance_diag(ts, mu_neg, mu_pos)
    return (mu_pos - mu_neg) / np.maximum(var, VAR_CLAMP)


def weak_mean_diff(ts: WeightedTrainingSet) -> np.ndarray:
    """Mean-difference rule; identical to the weighted matched filter
    sum_j w_j y_j x_j."""
    mu_neg, mu_pos = weighted_class_means(ts)
    return mu_pos - mu_neg


def gda_unweighted(features: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Textbook discriminant with class-normalized means; reference only."""
    x = np.asarray(features, dtype=float)
    y = np.asarray(labels, dtype=float)
    pos = y > 0
    n_pos, n_neg = int(pos.sum()), int((~pos).sum())
    if n_pos == 0 or n_neg == 0:
        raise DegenerateClassError("both classes must be present")
    mu_pos = x[pos].mean(axis=0)
    mu_neg = x[~pos].mean(axis=0)
    centers = np.where(pos[:, None], mu_pos[None, :], mu_neg[None, :])
    d = x - centers
    cov = d.T @ d / x.shape[0]
    return _ridge_solve(cov, mu_pos - mu_neg)
