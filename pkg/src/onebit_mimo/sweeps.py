"""Monte-Carlo sweep orchestration and runtime benchmarking.

Sweeps fan one scenario axis (SNR, iteration count, user count or
subcarrier count) across variants and trials, producing long-format
records persisted as CSV plus a JSON metadata sidecar. Benchmarks time
the per-antenna estimator and the detector with warm-up and repeats.
"""

from __future__ import annotations

import csv
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .airlink import (
    Constellation,
    build_pilots,
    detection_operator,
    generate_channel,
    generate_data_symbols,
    synthesize_data_rx,
    synthesize_pilot_rx,
)
from .boosting import BoostConfig
from .config import ConfigError, SystemConfig, substream
from .gda import RIDGE_SCALE, VAR_CLAMP, DegenerateClassError
from .metrics import ber, nmse
from .receivers import (
    EstimatorVariant,
    detect_data,
    estimate_channel_all,
    estimate_channel_antenna,
)

logger = logging.getLogger("onebit_mimo")

MODE_CHANNEL_ESTIMATION = "channel_estimation"
MODE_DETECTION_PERFECT = "detection_perfect_csi"
MODE_DETECTION_ESTIMATED = "detection_estimated_csi"
MODE_BENCH = "bench_runtime"

_MODES = (
    MODE_CHANNEL_ESTIMATION,
    MODE_DETECTION_PERFECT,
    MODE_DETECTION_ESTIMATED,
    MODE_BENCH,
)
_AXES = ("snr_db", "T", "K", "N_c")

CSV_HEADER = ("mode", "variant", "axis", "axis_value", "metric", "value", "trials", "seed", "wall_s")


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: a base scenario, an axis with values, variants, trials."""

    base: SystemConfig
    axis: str
    values: tuple
    variants: tuple[EstimatorVariant, ...]
    trials: int
    mode: str
    n_jobs: int | None = None
    bench_reps: int = 5
    bench_warmup: int = 2
    bench_ops: tuple[str, ...] = ("estimator", "detector")

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {_MODES}")
        if self.axis not in _AXES:
            raise ValueError(f"unknown axis {self.axis!r}; expected one of {_AXES}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if len(self.values) == 0:
            raise ValueError("values must be non-empty")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError(f"axis values must be strictly increasing, got {self.values}")
        if not self.variants:
            raise ValueError("at least one variant is required")
        if any(op not in ("estimator", "detector") for op in self.bench_ops):
            raise ValueError(f"bench_ops must be estimator/detector, got {self.bench_ops}")


@dataclass(frozen=True)
class Record:
    mode: str
    variant: str
    axis: str
    axis_value: float
    metric: str
    value: float
    trials: int
    seed: int
    wall_s: float


@dataclass
class ResultsTable:
    """Long-format records plus in-memory per-trial values and metadata."""

    records: list[Record] = field(default_factory=list)
    per_trial: dict = field(default_factory=dict)  # (mode, variant, axis_value, metric) -> array
    discarded: dict = field(default_factory=dict)  # "variant@axis_value" -> count
    metadata: dict = field(default_factory=dict)

    def write_csv(self, path: str | Path) -> Path:
        path = Path(path)
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for r in self.records:
                writer.writerow(
                    [r.mode, r.variant, r.axis, r.axis_value, r.metric,
                     repr(r.value) if isinstance(r.value, float) else r.value,
                     r.trials, r.seed, f"{r.wall_s:.6f}"]
                )
        return path

    def write_metadata(self, csv_path: str | Path) -> Path:
        path = Path(csv_path).with_suffix(".meta.json")
        payload = dict(self.metadata)
        payload["discarded_trials"] = self.discarded
        payload["version"] = __version__
        path.write_text(json.dumps(payload, indent=2, default=str) + "\n")
        return path


def _derive_config(base: SystemConfig, axis: str, value) -> SystemConfig:
    if axis == "snr_db":
        return base.replace(snr_db=float(value))
    return base.replace(**{axis: int(value)})


_PILOT_CACHE: dict[tuple[int, int, int], object] = {}


def _pilots_for(cfg: SystemConfig):
    key = (cfg.K, cfg.N_c, cfg.L_tap)
    if key not in _PILOT_CACHE:
        if len(_PILOT_CACHE) > 16:
            _PILOT_CACHE.clear()
        _PILOT_CACHE[key] = build_pilots(cfg)
    return _PILOT_CACHE[key]


def _estimation_trial(cfg: SystemConfig, variant: EstimatorVariant, trial: int) -> float:
    pilots = _pilots_for(cfg)
    chan = generate_channel(cfg, substream(cfg.seed, "channel", trial))
    labels = synthesize_pilot_rx(cfg, pilots, chan, substream(cfg.seed, "pilot_noise", trial))
    est = estimate_channel_all(labels, pilots, variant, cfg)
    return nmse(chan.taps, est.taps, cfg.K)


def _detection_trial(
    cfg: SystemConfig, variant: EstimatorVariant, trial: int, estimated_csi: bool
) -> float:
    constellation = Constellation.qpsk()
    chan = generate_channel(cfg, substream(cfg.seed, "channel", trial))
    x_fd, bits = generate_data_symbols(
        cfg, constellation, substream(cfg.seed, "data_symbols", trial)
    )
    labels = synthesize_data_rx(cfg, chan, x_fd, substream(cfg.seed, "data_noise", trial))
    if estimated_csi:
        pilots = _pilots_for(cfg)
        pilot_labels = synthesize_pilot_rx(
            cfg, pilots, chan, substream(cfg.seed, "pilot_noise", trial)
        )
        taps = estimate_channel_all(pilot_labels, pilots, variant, cfg).taps
    else:
        taps = chan.taps
    op = detection_operator(taps, cfg)
    result = detect_data(op, labels, variant, constellation, cfg)
    return ber(bits, result.bits)


def _trial_worker(payload) -> tuple[int, float | None]:
    """Top-level trial entry point (picklable for process pools)."""
    mode, cfg, variant, trial = payload
    try:
        if mode == MODE_CHANNEL_ESTIMATION:
            return trial, _estimation_trial(cfg, variant, trial)
        return trial, _detection_trial(cfg, variant, trial, mode == MODE_DETECTION_ESTIMATED)
    except DegenerateClassError as exc:
        logger.warning("discarding trial %d (%s, %s): %s", trial, variant.value, mode, exc)
        return trial, None


def _resolve_jobs(n_jobs: int | None) -> int:
    if n_jobs is not None:
        return max(1, n_jobs)
    return max(1, min(os.cpu_count() or 1, 8))


def run_sweep(
    spec: SweepSpec,
    progress: Callable[[Record], None] | None = None,
) -> ResultsTable:
    """Run a Monte-Carlo sweep and aggregate per-point mean metrics.

    Degenerate trials (single-class label draws) are logged, counted and
    excluded from the means. Invalid axis points are reported in the
    metadata and skipped; the sweep continues.
    """
    if spec.mode == MODE_BENCH:
        return bench_runtime(spec, progress=progress)
    metric_name = "nmse" if spec.mode == MODE_CHANNEL_ESTIMATION else "ber"
    table = ResultsTable()
    table.metadata = _base_metadata(spec)
    jobs = _resolve_jobs(spec.n_jobs)
    executor = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for value in spec.values:
            try:
                cfg = _derive_config(spec.base, spec.axis, value)
            except ConfigError as exc:
                logger.warning("skipping %s=%s: %s", spec.axis, value, exc)
                table.metadata.setdefault("config_errors", []).append(
                    {"axis_value": value, "error": str(exc)}
                )
                continue
            for variant in spec.variants:
                t0 = time.perf_counter()
                payloads = [(spec.mode, cfg, variant, t) for t in range(spec.trials)]
                if executor is None:
                    outcomes = [_trial_worker(p) for p in payloads]
                else:
                    chunk = max(1, spec.trials // (4 * jobs))
                    outcomes = list(executor.map(_trial_worker, payloads, chunksize=chunk))
                values = np.full(spec.trials, np.nan)
                for idx, v in outcomes:
                    if v is not None:
                        values[idx] = v
                valid = values[~np.isnan(values)]
                n_bad = spec.trials - valid.size
                if n_bad:
                    table.discarded[f"{variant.value}@{value}"] = n_bad
                if valid.size == 0:
                    logger.error("all trials degenerate at %s=%s", spec.axis, value)
                    continue
                wall = time.perf_counter() - t0
                rec = Record(
                    mode=spec.mode,
                    variant=variant.value,
                    axis=spec.axis,
                    axis_value=value,
                    metric=metric_name,
                    value=float(valid.mean()),
                    trials=int(valid.size),
                    seed=spec.base.seed,
                    wall_s=wall,
                )
                table.records.append(rec)
                table.per_trial[(spec.mode, variant.value, value, metric_name)] = valid
                if progress is not None:
                    progress(rec)
    finally:
        if executor is not None:
            executor.shutdown()
    return table


def _time_call(fn, warmup: int, reps: int) -> tuple[float, list[float]]:
    for _ in range(warmup):
        fn()
    raw = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        raw.append(time.perf_counter() - t0)
    return float(np.median(raw)), raw


def bench_runtime(
    spec: SweepSpec,
    progress: Callable[[Record], None] | None = None,
) -> ResultsTable:
    """Time the per-antenna estimator and/or the detector along the axis.

    Median of ``bench_reps`` timings after ``bench_warmup`` discarded
    warm-up calls; the timed region runs on a single worker. Raw timings
    are kept in the metadata sidecar.
    """
    table = ResultsTable()
    table.metadata = _base_metadata(spec)
    raw_all: dict[str, list[float]] = {}
    constellation = Constellation.qpsk()
    for value in spec.values:
        try:
            cfg = _derive_config(spec.base, spec.axis, value)
        except ConfigError as exc:
            logger.warning("skipping %s=%s: %s", spec.axis, value, exc)
            table.metadata.setdefault("config_errors", []).append(
                {"axis_value": value, "error": str(exc)}
            )
            continue
        boost = BoostConfig(iterations=cfg.T)
        pilots = build_pilots(cfg)
        chan = generate_channel(cfg, substream(cfg.seed, "channel", 0))
        pilot_labels = synthesize_pilot_rx(
            cfg, pilots, chan, substream(cfg.seed, "pilot_noise", 0)
        )
        if "detector" in spec.bench_ops:
            x_fd, _ = generate_data_symbols(
                cfg, constellation, substream(cfg.seed, "data_symbols", 0)
            )
            data_labels = synthesize_data_rx(
                cfg, chan, x_fd, substream(cfg.seed, "data_noise", 0)
            )
            op = detection_operator(chan.taps, cfg)
        for variant in spec.variants:
            t0 = time.perf_counter()
            for op_name in spec.bench_ops:
                if op_name == "estimator":
                    fn = lambda: estimate_channel_antenna(
                        pilots.phi_real, pilot_labels[0], variant, cfg.K, boost
                    )
                    metric = "estimator_runtime_s"
                else:
                    fn = lambda: detect_data(op, data_labels, variant, constellation, cfg, boost)
                    metric = "detector_runtime_s"
                median, raw = _time_call(fn, spec.bench_warmup, spec.bench_reps)
                raw_all[f"{metric}/{variant.value}/{value}"] = raw
                rec = Record(
                    mode=MODE_BENCH,
                    variant=variant.value,
                    axis=spec.axis,
                    axis_value=value,
                    metric=metric,
                    value=median,
                    trials=spec.bench_reps,
                    seed=spec.base.seed,
                    wall_s=time.perf_counter() - t0,
                )
                table.records.append(rec)
                table.per_trial[(MODE_BENCH, variant.value, value, metric)] = np.array(raw)
                if progress is not None:
                    progress(rec)
    table.metadata["raw_timings"] = raw_all
    return table


def _base_metadata(spec: SweepSpec) -> dict:
    return {
        "config": spec.base.to_dict(),
        "mode": spec.mode,
        "axis": spec.axis,
        "values": list(spec.values),
        "variants": [v.value for v in spec.variants],
        "trials": spec.trials,
        "constellation": "qpsk",
        "bits_per_symbol": 2,
        "snr_convention": "sigma2 = K * 10**(-snr_db/10); SNR is per-antenna mean "
        "received signal power (=K) over complex noise power",
        "constants": {
            "alpha_coefficient": 0.25,
            "epsilon_clamp": 1e-10,
            "ridge_scale": RIDGE_SCALE,
            "var_clamp": VAR_CLAMP,
        },
    }


def fit_loglog_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of log(y) against log(x); scaling-exponent fit."""
    lx, ly = np.log(np.asarray(x, dtype=float)), np.log(np.asarray(y, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])
