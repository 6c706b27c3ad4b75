"""Generic boosting loop shared by the channel estimator and data detector.

Iteratively fits a weak object on exponentially reweighted examples and
accumulates the transformed weak objects as a weighted vector sum. The
classifier weight uses a configurable coefficient (default 1/4) on the
log-odds of the weighted error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class BoostConfig:
    iterations: int
    alpha_coefficient: float = 0.25
    epsilon_clamp: float = 1e-10

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError(f"iterations must be >= 1, got {self.iterations}")
        if not 0.0 < self.epsilon_clamp < 0.5:
            raise ValueError(f"epsilon_clamp must lie in (0, 0.5), got {self.epsilon_clamp}")


@dataclass
class BoostTrace:
    """Per-iteration diagnostics: weighted errors and classifier weights."""

    errors: list[float] = field(default_factory=list)
    alphas: list[float] = field(default_factory=list)


class WeakFitError(RuntimeError):
    """Weak-learner failure, annotated with the boosting iteration."""

    def __init__(self, iteration: int, cause: Exception):
        super().__init__(f"weak fit failed at iteration {iteration}: {cause}")
        self.iteration = iteration
        self.__cause__ = cause


def weighted_error(predictions: np.ndarray, labels: np.ndarray, weights: np.ndarray) -> float:
    """Total weight of misclassified examples."""
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    if predictions.shape != labels.shape or predictions.shape != np.shape(weights):
        raise ValueError(
            f"inconsistent lengths: predictions {predictions.shape}, "
            f"labels {labels.shape}, weights {np.shape(weights)}"
        )
    return float(np.sum(weights, where=predictions != labels))


def alpha_from_error(epsilon: float, cfg: BoostConfig) -> float:
    """Classifier weight coef * ln((1-eps)/eps) with eps clamped away from
    {0, 1}; negative whenever the weak classifier is worse than random."""
    eps = min(max(epsilon, cfg.epsilon_clamp), 1.0 - cfg.epsilon_clamp)
    return cfg.alpha_coefficient * np.log((1.0 - eps) / eps)


def update_weights(weights: np.ndarray, misclassified: np.ndarray, alpha: float) -> np.ndarray:
    """Multiply misclassified weights by e^alpha and renormalize to sum 1."""
    w = np.asarray(weights, dtype=float) * np.exp(alpha * np.asarray(misclassified, dtype=float))
    return w / w.sum()


def run_boost(
    data,
    labels: np.ndarray,
    weak_fit: Callable[[object, np.ndarray], np.ndarray],
    predict: Callable[[object, np.ndarray], np.ndarray],
    cfg: BoostConfig,
    transform: Callable[[np.ndarray], np.ndarray] | None = None,
) -> tuple[np.ndarray, BoostTrace]:
    """Run the boosting loop and return (combined vector, trace).

    Per iteration: fit a weak object on (data, weights), apply ``transform``
    (identity if None), evaluate +-1 predictions of the transformed object,
    compute the weighted error and classifier weight, reweight, and
    accumulate alpha * transformed. Iterations with error >= 0.5 are kept
    (alpha <= 0); there is no early stopping.
    """
    labels = np.asarray(labels, dtype=float)
    m = labels.shape[0]
    weights = np.full(m, 1.0 / m)
    trace = BoostTrace()
    combined: np.ndarray | None = None
    for t in range(cfg.iterations):
        try:
            weak = weak_fit(data, weights)
        except Exception as exc:  # annotate with the failing iteration
            raise WeakFitError(t + 1, exc) from exc
        obj = weak if transform is None else transform(weak)
        predictions = predict(data, obj)
        eps = weighted_error(predictions, labels, weights)
        alpha = alpha_from_error(eps, cfg)
        weights = update_weights(weights, predictions != labels, alpha)
        combined = alpha * obj if combined is None else combined + alpha * obj
        trace.errors.append(eps)
        trace.alphas.append(alpha)
    return combined, trace
