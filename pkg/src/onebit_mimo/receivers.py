"""Boosted discriminant receivers: channel estimation and data detection.

Channel estimation fits one hyperplane per antenna from one-bit pilot
labels; detection recovers the stacked frequency-domain symbol vector from
one-bit data labels, re-projecting onto the constellation every iteration.
Three weak-classifier variants are supported: full covariance, diagonal
covariance, and mean difference.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .airlink import Constellation, DetectionOperator, PilotSet
from .boosting import BoostConfig, BoostTrace, run_boost
from .config import SystemConfig
from .gda import (
    VAR_CLAMP,
    DegenerateClassError,
    RIDGE_SCALE,
    WeightedTrainingSet,
    weak_gda_diag,
    weak_gda_full,
    weak_mean_diff,
)
from .signal_ops import real_stack_vector, real_unstack_vector, sign_pm


class EstimatorVariant(Enum):
    """Weak-classifier selection shared by estimator and detector."""

    GDA_ADA = "gda-ada"  # full covariance solve
    GDA_ADA_1 = "gda-ada-1"  # diagonal covariance
    GDA_ADA_2 = "gda-ada-2"  # mean difference

    @classmethod
    def from_name(cls, name: str) -> "EstimatorVariant":
        for v in cls:
            if v.value == name:
                return v
        raise ValueError(f"unknown variant {name!r}; expected one of "
                         f"{[v.value for v in cls]}")


_WEAK_RULES = {
    EstimatorVariant.GDA_ADA: weak_gda_full,
    EstimatorVariant.GDA_ADA_1: weak_gda_diag,
    EstimatorVariant.GDA_ADA_2: weak_mean_diff,
}


@dataclass(frozen=True)
class ChannelEstimate:
    """Per-antenna estimates, each real stack normalized to squared norm K."""

    real_stacks: np.ndarray  # (M, 2*K*L_tap)
    taps: np.ndarray  # (M, K*L_tap) complex
    variant: EstimatorVariant
    iterations: int
    traces: list[BoostTrace]


@dataclass(frozen=True)
class DetectionResult:
    """Detected symbols (always constellation members) and decoded bits."""

    x_fd: np.ndarray  # (K*N_c,) complex
    symbol_indices: np.ndarray  # (K*N_c,) ints into the constellation
    bits: np.ndarray  # flat Gray bit record
    variant: EstimatorVariant
    iterations: int
    trace: BoostTrace


def real_to_complex_estimate(stack: np.ndarray) -> np.ndarray:
    """Reassemble a real-stacked estimate into its complex form."""
    return real_unstack_vector(stack)


def _check_two_classes(labels: np.ndarray) -> None:
    if not (np.any(labels > 0) and np.any(labels < 0)):
        raise DegenerateClassError("one-bit labels collapsed to a single class")


def estimate_channel_antenna(
    features: np.ndarray,
    labels: np.ndarray,
    variant: EstimatorVariant,
    k_users: int,
    boost_cfg: BoostConfig,
) -> tuple[np.ndarray, BoostTrace]:
    """Estimate one antenna's real-stacked channel vector.

    ``features`` is the (2*N_c, 2*K*L_tap) real pilot regression matrix and
    ``labels`` the antenna's one-bit observations. The boosted combination
    is normalized so its squared norm equals the user count.
    """
    features = np.asarray(features, dtype=float)
    labels = np.asarray(labels, dtype=float)
    _check_two_classes(labels)
    rule = _WEAK_RULES[variant]

    def fit(_data, weights):
        return rule(WeightedTrainingSet(features, labels, weights))

    def predict(_data, h):
        return sign_pm(features @ h)

    combined, trace = run_boost(None, labels, fit, predict, boost_cfg)
    norm = np.linalg.norm(combined)
    if norm == 0.0:
        raise DegenerateClassError("boosted combination has zero norm")
    return np.sqrt(k_users) * combined / norm, trace


def estimate_channel_all(
    pilot_labels: np.ndarray,
    pilots: PilotSet,
    variant: EstimatorVariant,
    cfg: SystemConfig,
    boost_cfg: BoostConfig | None = None,
    parallel: bool = False,
) -> ChannelEstimate:
    """Estimate all M antennas (independent per-antenna problems)."""
    if boost_cfg is None:
        boost_cfg = BoostConfig(iterations=cfg.T)
    pilot_labels = np.asarray(pilot_labels, dtype=float)
    if pilot_labels.shape != (cfg.M, 2 * cfg.N_c):
        raise ValueError(
            f"pilot labels must have shape ({cfg.M}, {2 * cfg.N_c}), got {pilot_labels.shape}"
        )

    def one(i: int):
        try:
            return estimate_channel_antenna(
                pilots.phi_real, pilot_labels[i], variant, cfg.K, boost_cfg
            )
        except DegenerateClassError as exc:
            raise DegenerateClassError(f"antenna {i}: {exc}") from exc

    if parallel:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(one, range(cfg.M)))
    else:
        results = [one(i) for i in range(cfg.M)]

    real_stacks = np.vstack([h for h, _ in results])
    taps = np.vstack([real_unstack_vector(h) for h, _ in results])
    return ChannelEstimate(
        real_stacks=real_stacks,
        taps=taps,
        variant=variant,
        iterations=boost_cfg.iterations,
        traces=[tr for _, tr in results],
    )


def map_to_constellation(
    x_bar: np.ndarray, constellation: Constellation
) -> tuple[np.ndarray, np.ndarray]:
    """Nearest-point projection of a real-stacked vector, symbol by symbol.

    Entry k pairs with entry k + K*N_c as its imaginary part. Returns the
    mapped complex vector and the chosen constellation indices (equidistant
    candidates resolve to the lowest index).
    """
    x_bar = np.asarray(x_bar, dtype=float)
    if x_bar.ndim != 1 or x_bar.shape[0] % 2 != 0:
        raise ValueError(f"expected an even-length vector, got shape {x_bar.shape}")
    half = x_bar.shape[0] // 2
    z = x_bar[:half] + 1j * x_bar[half:]
    idx = constellation.nearest_indices(z)
    return constellation.points[idx], idx


def _detect_weak_mean_diff(op: DetectionOperator, labels, weights):
    return op.transpose_apply_real(weights * labels)


def _detect_weak_diag(op: DetectionOperator, labels, weights):
    pos = labels > 0
    masses = np.array([weights[pos].sum(), weights[~pos].sum()])
    mus, sq = op.row_stats(
        linear=np.stack([weights * pos, weights * ~pos], axis=1),
        squares=weights[:, None],
    )
    mu_pos, mu_neg = mus[:, 0], mus[:, 1]
    # exact expansion of the label-centered weighted variance: the weighted
    # class means are plain sums, so sum_j w_j x_j mu_{y_j} = mu_+^2 + mu_-^2
    var = sq[:, 0] - (2.0 - masses[0]) * mu_pos**2 - (2.0 - masses[1]) * mu_neg**2
    return (mu_pos - mu_neg) / np.maximum(var, VAR_CLAMP)


def _detect_weak_full(op: DetectionOperator, labels, weights):
    pos = labels > 0
    mus = op.transpose_apply_real(
        np.stack([weights * pos, weights * ~pos], axis=1)
    )
    mu_pos, mu_neg = mus[:, 0], mus[:, 1]
    n_cols = op.n_cols
    scatter = np.zeros((n_cols, n_cols))
    half = op.M * op.N_c
    n = op.N_c
    for i in range(op.M):
        b = op.antenna_block(i)
        for rows, sl in (
            (np.hstack([b.real, -b.imag]), slice(i * n, (i + 1) * n)),
            (np.hstack([b.imag, b.real]), slice(half + i * n, half + (i + 1) * n)),
        ):
            centers = np.where(pos[sl][:, None], mu_pos[None, :], mu_neg[None, :])
            d = rows - centers
            scatter += (d * weights[sl][:, None]).T @ d
    lam = RIDGE_SCALE * np.trace(scatter) / n_cols
    return np.linalg.solve(scatter + lam * np.eye(n_cols), mu_pos - mu_neg)


_DETECT_RULES = {
    EstimatorVariant.GDA_ADA: _detect_weak_full,
    EstimatorVariant.GDA_ADA_1: _detect_weak_diag,
    EstimatorVariant.GDA_ADA_2: _detect_weak_mean_diff,
}


def detect_data(
    op: DetectionOperator,
    labels: np.ndarray,
    variant: EstimatorVariant,
    constellation: Constellation,
    cfg: SystemConfig,
    boost_cfg: BoostConfig | None = None,
) -> DetectionResult:
    """Detect the stacked frequency-domain symbol vector of all users.

    Every iteration's weak vector is power-normalized to squared norm
    K*N_c and projected onto the constellation before scoring; the final
    combination is normalized and projected the same way. Feature rows are
    streamed from the operator, never materialized as one matrix.
    """
    if boost_cfg is None:
        boost_cfg = BoostConfig(iterations=cfg.T)
    labels = np.asarray(labels, dtype=float)
    if labels.shape != (op.n_rows,):
        raise ValueError(f"labels must have shape ({op.n_rows},), got {labels.shape}")
    _check_two_classes(labels)
    rule = _DETECT_RULES[variant]
    target = np.sqrt(cfg.K * cfg.N_c)

    def fit(_data, weights):
        return rule(op, labels, weights)

    def transform(x_d):
        norm = np.linalg.norm(x_d)
        if norm == 0.0:
            raise DegenerateClassError("weak detection vector has zero norm")
        mapped, _ = map_to_constellation(target * x_d / norm, constellation)
        return real_stack_vector(mapped)

    def predict(_data, x_check):
        return sign_pm(op.apply_real(x_check))

    combined, trace = run_boost(None, labels, fit, predict, boost_cfg, transform=transform)
    norm = np.linalg.norm(combined)
    if norm == 0.0:
        raise DegenerateClassError("boosted detection vector has zero norm")
    x_hat, idx = map_to_constellation(target * combined / norm, constellation)
    return DetectionResult(
        x_fd=x_hat,
        symbol_indices=idx,
        bits=constellation.bits_for_indices(idx),
        variant=variant,
        iterations=boost_cfg.iterations,
        trace=trace,
    )
