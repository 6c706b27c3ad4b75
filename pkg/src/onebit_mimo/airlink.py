"""Random link generation and one-bit received-signal synthesis.

Covers the pilot phase (training labels for channel estimation) and the
data phase (labels for detection), plus the implicit frequency-domain
channel operator used by the detector.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import SystemConfig, noise_variance
from .signal_ops import (
    circulant_apply,
    fft_normalized,
    ifft_normalized,
    real_stack_matrix,
    real_stack_vector,
    sign_pm,
)


@dataclass(frozen=True)
class ChannelRealization:
    """Per-antenna stacked tap vectors, row i = [h_{i,1}; ...; h_{i,K}]."""

    taps: np.ndarray  # (M, K*L_tap) complex
    L_tap: int

    @property
    def real_stacks(self) -> np.ndarray:
        """(M, 2*K*L_tap) real stacking [Re; Im] of each row."""
        return np.hstack([self.taps.real, self.taps.imag])


@dataclass(frozen=True)
class PilotSet:
    """Frequency-domain pilots and their time-domain regression matrices."""

    fd_pilots: np.ndarray  # (K, N_c) complex, unit modulus
    phi_complex: np.ndarray  # (N_c, K*L_tap) complex pilot block matrix
    phi_real: np.ndarray  # (2*N_c, 2*K*L_tap) real stacking


@dataclass(frozen=True)
class Constellation:
    """Unit-energy symbol set with Gray bit labeling.

    ``points`` fixes the enumeration order used for nearest-point
    tie-breaking (lowest index wins).
    """

    points: np.ndarray  # (Q,) complex
    bit_labels: np.ndarray  # (Q, bits_per_symbol) ints in {0, 1}
    name: str = "custom"

    @property
    def bits_per_symbol(self) -> int:
        return self.bit_labels.shape[1]

    @classmethod
    def qpsk(cls) -> "Constellation":
        bits = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=np.int8)
        re = 1 - 2 * bits[:, 0]
        im = 1 - 2 * bits[:, 1]
        points = (re + 1j * im) / np.sqrt(2.0)
        return cls(points=points, bit_labels=bits, name="qpsk")

    def nearest_indices(self, values: np.ndarray) -> np.ndarray:
        """Index of the nearest point per value; ties go to the lowest index."""
        d = np.abs(np.asarray(values, dtype=complex)[:, None] - self.points[None, :])
        return np.argmin(d, axis=1)

    def bits_for_indices(self, indices: np.ndarray) -> np.ndarray:
        return self.bit_labels[np.asarray(indices)].reshape(-1)


def generate_channel(cfg: SystemConfig, rng: np.random.Generator) -> ChannelRealization:
    """Draw i.i.d. complex Gaussian taps with per-tap variance 1/L_tap."""
    shape = (cfg.M, cfg.K * cfg.L_tap)
    scale = np.sqrt(1.0 / (2.0 * cfg.L_tap))
    taps = scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return ChannelRealization(taps=taps, L_tap=cfg.L_tap)


def build_pilots(cfg: SystemConfig) -> PilotSet:
    """Constant-envelope pilots with circularly shift-orthogonal supports.

    The base sequence c[n] = exp(j*pi*n^2/N_c) (N_c even) has unit modulus
    in both domains and a perfect circular autocorrelation, so every
    cyclic shift is orthogonal to every other. User k transmits the base
    shifted by k*L_tap samples; the pilot block matrix then has Gram
    N_c * I while spreading each tap's energy over all received samples,
    which is what makes one-bit observations informative.
    """
    n_c, k_users, l_tap = cfg.N_c, cfg.K, cfg.L_tap
    n = np.arange(n_c)
    base = np.exp(1j * np.pi * n * n / n_c)
    fd = np.vstack(
        [fft_normalized(np.roll(base, k * l_tap)) for k in range(k_users)]
    )
    phi = np.empty((n_c, k_users * l_tap), dtype=complex)
    for k in range(k_users):
        for j in range(l_tap):
            phi[:, k * l_tap + j] = np.roll(base, k * l_tap + j)
    return PilotSet(fd_pilots=fd, phi_complex=phi, phi_real=real_stack_matrix(phi))


def _complex_noise(n: int, per_component_var: float, rng: np.random.Generator) -> np.ndarray:
    if per_component_var == 0.0:
        return np.zeros(n, dtype=complex)
    s = np.sqrt(per_component_var)
    return s * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


ZERO_SNAP = 1e-12


def snap_zero_components(u: np.ndarray, eta: float = ZERO_SNAP) -> np.ndarray:
    """Zero out real/imag components below eta times the peak magnitude.

    Samples that are zero in exact arithmetic come out of the FFT path as
    sign-arbitrary rounding residues; snapping them keeps the quantizer's
    non-negative-zero convention deterministic (and scale-invariant) for
    noiseless scenarios. Any genuine signal or noise sits far above the
    threshold.
    """
    re, im = u.real.copy(), u.imag.copy()
    scale = max(np.abs(re).max(initial=0.0), np.abs(im).max(initial=0.0))
    if scale > 0.0:
        re[np.abs(re) <= eta * scale] = 0.0
        im[np.abs(im) <= eta * scale] = 0.0
    return re + 1j * im


def _padded_taps(chan: ChannelRealization, cfg: SystemConfig) -> np.ndarray:
    """Zero-pad each user's tap vector to N_c: shape (M, K, N_c)."""
    g = np.zeros((cfg.M, cfg.K, cfg.N_c), dtype=complex)
    g[:, :, : cfg.L_tap] = chan.taps.reshape(cfg.M, cfg.K, cfg.L_tap)
    return g


def synthesize_pilot_rx(
    cfg: SystemConfig,
    pilots: PilotSet,
    chan: ChannelRealization,
    rng: np.random.Generator,
) -> np.ndarray:
    """One-bit pilot-phase labels, shape (M, 2*N_c) with entries in {+-1}.

    Per antenna: sign of the real-stacked circular convolution of the
    time-domain pilots with the channel taps plus noise; the unquantized
    path goes through the FFT, never a dense matrix product.
    """
    g = _padded_taps(chan, cfg)
    var = noise_variance(cfg)
    td_pilots = ifft_normalized(pilots.fd_pilots)  # (K, N_c)
    labels = np.empty((cfg.M, 2 * cfg.N_c))
    for i in range(cfg.M):
        u = np.zeros(cfg.N_c, dtype=complex)
        for k in range(cfg.K):
            u += circulant_apply(td_pilots[k], g[i, k])
        u += _complex_noise(cfg.N_c, var, rng)
        labels[i] = sign_pm(real_stack_vector(snap_zero_components(u)))
    return labels


def generate_data_symbols(
    cfg: SystemConfig,
    constellation: Constellation,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Uniform i.i.d. symbols for all users, plus the generating bits.

    Returns (x_fd, bits): x_fd concatenates the K users' frequency-domain
    symbol vectors (length K*N_c); bits is the flat Gray bit record used
    for error-rate scoring.
    """
    idx = rng.integers(0, constellation.points.shape[0], size=cfg.K * cfg.N_c)
    return constellation.points[idx], constellation.bits_for_indices(idx)


def synthesize_data_rx(
    cfg: SystemConfig,
    chan: ChannelRealization,
    x_fd: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """One-bit data-phase labels, shape (2*M*N_c,) with entries in {+-1}.

    Antenna blocks are stacked before real stacking, so entry ordering is
    [Re y_1; ...; Re y_M; Im y_1; ...; Im y_M] in time-sample order.
    """
    x_fd = np.asarray(x_fd, dtype=complex)
    if x_fd.shape != (cfg.K * cfg.N_c,):
        raise ValueError(f"x_fd must have shape ({cfg.K * cfg.N_c},), got {x_fd.shape}")
    g = _padded_taps(chan, cfg)
    var = noise_variance(cfg)
    td = ifft_normalized(x_fd.reshape(cfg.K, cfg.N_c))  # per-user time signals
    y = np.empty((cfg.M, cfg.N_c), dtype=complex)
    for i in range(cfg.M):
        u = np.zeros(cfg.N_c, dtype=complex)
        for k in range(cfg.K):
            u += circulant_apply(g[i, k], td[k])
        y[i] = snap_zero_components(u + _complex_noise(cfg.N_c, var, rng))
    return sign_pm(real_stack_vector(y.reshape(-1)))


@dataclass
class DetectionOperator:
    """Implicit real-stacked frequency-domain channel operator.

    Represents the 2*M*N_c x 2*K*N_c real matrix relating the real-stacked
    transmitted symbol vector to the unquantized received samples. Built
    from channel taps (true or estimated); rows and antenna blocks are
    computed on demand so the dense matrix is never materialized.
    """

    freq_response: np.ndarray  # (M, K, N_c) per-subcarrier channel gains
    _twiddle: np.ndarray | None = field(default=None, repr=False)

    @property
    def M(self) -> int:
        return self.freq_response.shape[0]

    @property
    def K(self) -> int:
        return self.freq_response.shape[1]

    @property
    def N_c(self) -> int:
        return self.freq_response.shape[2]

    @property
    def n_rows(self) -> int:
        return 2 * self.M * self.N_c

    @property
    def n_cols(self) -> int:
        return 2 * self.K * self.N_c

    def _w(self) -> np.ndarray:
        # W[n, p] = exp(2j*pi*n*p/N)/sqrt(N): row n of the inverse DFT matrix
        if self._twiddle is None:
            n = self.N_c
            grid = np.outer(np.arange(n), np.arange(n))
            self._twiddle = np.exp(2j * np.pi * grid / n) / np.sqrt(n)
        return self._twiddle

    def antenna_block(self, i: int, out: np.ndarray | None = None) -> np.ndarray:
        """Complex (N_c, K*N_c) block of rows for antenna i."""
        w = self._w()
        d = self.freq_response[i]
        n = self.N_c
        if out is None:
            out = np.empty((n, self.K * n), dtype=complex)
        for k in range(self.K):
            np.multiply(w, d[k][None, :], out=out[:, k * n : (k + 1) * n])
        return out

    def apply_real(self, x_real: np.ndarray) -> np.ndarray:
        """Matrix-vector product with the real-stacked operator (FFT path)."""
        x_real = np.asarray(x_real, dtype=float)
        if x_real.shape != (self.n_cols,):
            raise ValueError(f"expected shape ({self.n_cols},), got {x_real.shape}")
        half = self.K * self.N_c
        x = (x_real[:half] + 1j * x_real[half:]).reshape(self.K, self.N_c)
        s = np.einsum("mkn,kn->mn", self.freq_response, x)
        y = np.fft.ifft(s, norm="ortho", axis=-1).reshape(-1)
        return real_stack_vector(y)

    def _as_columns(self, u: np.ndarray | None) -> np.ndarray | None:
        if u is None:
            return None
        u = np.asarray(u, dtype=float)
        if u.ndim == 1:
            u = u[:, None]
        if u.shape[0] != self.n_rows:
            raise ValueError(f"expected {self.n_rows} rows, got {u.shape[0]}")
        return u

    def row_stats(
        self,
        linear: np.ndarray | None = None,
        squares: np.ndarray | None = None,
    ) -> tuple[np.ndarray | None, np.ndarray | None]:
        """Row-weighted first/second moments in a single block sweep.

        For each column u of ``linear`` computes sum_j u_j * g_j, and for
        each column v of ``squares`` computes sum_j v_j * g_j**2 (rows g_j
        of the real-stacked operator). One shared per-antenna block pass;
        O(M*K*N_c^2) work, O(K*N_c^2) memory, nothing dense materialized.
        """
        lin = self._as_columns(linear)
        sq = self._as_columns(squares)
        half = self.M * self.N_c
        n = self.N_c
        cols = self.K * n
        lin_first = lin_second = sq_first = sq_second = None
        if lin is not None:
            lin_first = np.zeros((cols, lin.shape[1]))
            lin_second = np.zeros_like(lin_first)
        if sq is not None:
            sq_first = np.zeros((cols, sq.shape[1]))
            sq_second = np.zeros_like(sq_first)
        scratch = np.empty((n, cols), dtype=complex)
        for i in range(self.M):
            b = self.antenna_block(i, out=scratch)
            rows_re = slice(i * n, (i + 1) * n)
            rows_im = slice(half + i * n, half + (i + 1) * n)
            if lin is not None:
                t = b.T @ (lin[rows_re] - 1j * lin[rows_im])
                lin_first += t.real
                lin_second -= t.imag
            if sq is not None:
                p = b.real**2
                q = b.imag**2
                sq_first += p.T @ sq[rows_re] + q.T @ sq[rows_im]
                sq_second += q.T @ sq[rows_re] + p.T @ sq[rows_im]
        lin_out = None if lin is None else np.concatenate([lin_first, lin_second], axis=0)
        sq_out = None if sq is None else np.concatenate([sq_first, sq_second], axis=0)
        return lin_out, sq_out

    def transpose_apply_real(self, u: np.ndarray) -> np.ndarray:
        """Product of the operator's transpose with u (or each column of u)."""
        single = np.asarray(u).ndim == 1
        out, _ = self.row_stats(linear=u)
        return out[:, 0] if single else out

    def squared_transpose_apply_real(self, u: np.ndarray) -> np.ndarray:
        """Weighted sum of elementwise-squared rows: sum_j u_j * g_j**2."""
        single = np.asarray(u).ndim == 1
        _, out = self.row_stats(squares=u)
        return out[:, 0] if single else out

    def row_real(self, j: int) -> np.ndarray:
        """Row j of the real-stacked operator, j in [0, 2*M*N_c)."""
        half = self.M * self.N_c
        if not 0 <= j < 2 * half:
            raise ValueError(f"row index {j} out of range [0, {2 * half})")
        r = j if j < half else j - half
        i, n = divmod(r, self.N_c)
        w_row = np.exp(2j * np.pi * n * np.arange(self.N_c) / self.N_c) / np.sqrt(self.N_c)
        c = (w_row[None, :] * self.freq_response[i]).reshape(-1)
        if j < half:
            return np.concatenate([c.real, -c.imag])
        return np.concatenate([c.imag, c.real])


def detection_operator(taps: np.ndarray, cfg: SystemConfig) -> DetectionOperator:
    """Build the implicit operator from an (M, K*L_tap) tap matrix.

    Accepts true channel taps or an estimator's output; only the first
    L_tap entries per user are meaningful and they are zero-padded to N_c.
    """
    taps = np.asarray(taps, dtype=complex)
    if taps.shape != (cfg.M, cfg.K * cfg.L_tap):
        raise ValueError(
            f"taps must have shape ({cfg.M}, {cfg.K * cfg.L_tap}), got {taps.shape}"
        )
    g = np.zeros((cfg.M, cfg.K, cfg.N_c), dtype=complex)
    g[:, :, : cfg.L_tap] = taps.reshape(cfg.M, cfg.K, cfg.L_tap)
    return DetectionOperator(freq_response=np.fft.fft(g, axis=-1))
