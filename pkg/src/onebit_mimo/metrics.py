"""Link-level performance metrics."""

from __future__ import annotations

import numpy as np


def nmse(true_taps: np.ndarray, estimated_taps: np.ndarray, k_users: int) -> float:
    """Per-trial normalized channel error ||H - H_hat||_F^2 / (K * M).

    Both arguments are (M, K*L_tap) complex tap matrices. Averaging over
    trials (and any dB conversion) is the caller's responsibility.
    """
    h = np.asarray(true_taps)
    h_hat = np.asarray(estimated_taps)
    if h.shape != h_hat.shape or h.ndim != 2:
        raise ValueError(f"shape mismatch: {h.shape} vs {h_hat.shape}")
    return float(np.sum(np.abs(h - h_hat) ** 2) / (k_users * h.shape[0]))


def ber(true_bits: np.ndarray, decoded_bits: np.ndarray) -> float:
    """Fraction of differing bits."""
    a = np.asarray(true_bits)
    b = np.asarray(decoded_bits)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    return float(np.mean(a != b))
