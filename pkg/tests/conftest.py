"""Shared independent oracles for the test suite.

These deliberately use naive O(N^2) dense constructions so they stay
independent of the FFT-based library paths they verify.
"""

import numpy as np
import pytest


def naive_dft_matrix(n: int) -> np.ndarray:
    """Dense unitary DFT matrix, built entry by entry."""
    grid = np.outer(np.arange(n), np.arange(n))
    return np.exp(-2j * np.pi * grid / n) / np.sqrt(n)


def naive_dft(x: np.ndarray) -> np.ndarray:
    return naive_dft_matrix(len(x)) @ x


def naive_idft(x: np.ndarray) -> np.ndarray:
    return naive_dft_matrix(len(x)).conj().T @ x


def dense_circulant(first_column: np.ndarray) -> np.ndarray:
    """Dense circulant matrix whose column j is the cyclic shift by j."""
    c = np.asarray(first_column)
    n = len(c)
    mat = np.empty((n, n), dtype=c.dtype)
    for j in range(n):
        mat[:, j] = np.roll(c, j)
    return mat


def dense_real_stack(a: np.ndarray) -> np.ndarray:
    return np.block([[a.real, -a.imag], [a.imag, a.real]])


def dense_pilot_matrix(fd_pilots: np.ndarray, l_tap: int) -> np.ndarray:
    """Explicit (N_c, K*L_tap) pilot block matrix from FD pilots."""
    k_users, n_c = fd_pilots.shape
    cols = []
    for k in range(k_users):
        td = naive_idft(fd_pilots[k])
        cols.append(dense_circulant(td)[:, :l_tap])
    return np.hstack(cols)


def dense_fd_channel_matrix(taps: np.ndarray, cfg) -> np.ndarray:
    """Explicit (M*N_c, K*N_c) complex data-phase channel matrix."""
    f_h = naive_dft_matrix(cfg.N_c).conj().T
    blocks = []
    for i in range(cfg.M):
        row = []
        for k in range(cfg.K):
            g = np.zeros(cfg.N_c, dtype=complex)
            g[: cfg.L_tap] = taps[i, k * cfg.L_tap : (k + 1) * cfg.L_tap]
            row.append(dense_circulant(g) @ f_h)
        blocks.append(np.hstack(row))
    return np.vstack(blocks)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
