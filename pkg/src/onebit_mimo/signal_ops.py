"""Deterministic complex-signal primitives.

Normalized (unitary) DFT/IDFT, circulant application via circular
convolution, one-bit quantization, and complex<->real-stacked transforms.
All functions are pure and safe to call concurrently.
"""

from __future__ import annotations

import numpy as np


def _require_power_of_two(n: int) -> None:
    if n < 1 or (n & (n - 1)) != 0:
        raise ValueError(f"length must be a positive power of two, got {n}")


def fft_normalized(x: np.ndarray) -> np.ndarray:
    """Unitary DFT of a power-of-two-length vector (1/sqrt(N) scaling)."""
    x = np.asarray(x)
    _require_power_of_two(x.shape[-1])
    return np.fft.fft(x, norm="ortho")


def ifft_normalized(x: np.ndarray) -> np.ndarray:
    """Unitary inverse DFT; exact inverse of :func:`fft_normalized`."""
    x = np.asarray(x)
    _require_power_of_two(x.shape[-1])
    return np.fft.ifft(x, norm="ortho")


def one_bit_quantize(z: np.ndarray) -> np.ndarray:
    """Element-wise one-bit quantizer sign(Re) + 1j*sign(Im).

    sign(a) is +1 for any non-negative a (including -0.0), else -1, so the
    output alphabet is exactly {+-1 +- 1j}.
    """
    z = np.asarray(z, dtype=complex)
    return sign_pm(z.real) + 1j * sign_pm(z.imag)


def sign_pm(x: np.ndarray) -> np.ndarray:
    """Sign with the non-negative convention: +1.0 where x >= 0, else -1.0."""
    return np.where(np.asarray(x) >= 0, 1.0, -1.0)


def circulant_apply(first_column: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Multiply the circulant matrix generated by ``first_column`` into ``x``.

    Computed as a circular convolution through the FFT, O(N log N); never
    materializes the dense matrix.
    """
    c = np.asarray(first_column)
    x = np.asarray(x)
    if c.shape != x.shape or c.ndim != 1:
        raise ValueError(
            f"first_column and x must be 1-D with equal length, got {c.shape} and {x.shape}"
        )
    _require_power_of_two(c.shape[0])
    return np.fft.ifft(np.fft.fft(c) * np.fft.fft(x))


def real_stack_vector(z: np.ndarray) -> np.ndarray:
    """Stack a complex vector as [Re(z); Im(z)] (length doubles)."""
    z = np.asarray(z, dtype=complex)
    return np.concatenate([z.real, z.imag])


def real_unstack_vector(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`real_stack_vector`: first half + 1j * second half."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.shape[0] % 2 != 0:
        raise ValueError(f"expected an even-length 1-D vector, got shape {v.shape}")
    n = v.shape[0] // 2
    return v[:n] + 1j * v[n:]


def real_stack_matrix(a: np.ndarray) -> np.ndarray:
    """Real 2m x 2n block representation [[Re A, -Im A], [Im A, Re A]].

    Satisfies real_stack_matrix(A) @ real_stack_vector(z)
    == real_stack_vector(A @ z).
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    return np.block([[a.real, -a.imag], [a.imag, a.real]])
