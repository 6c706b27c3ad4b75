"""Command-line entry point: sweeps, single runs and runtime benchmarks.

Emits long-format CSV records (fixed schema) plus a JSON metadata sidecar
recording the scenario, the SNR convention and all numeric policy
constants, so every results file is self-describing.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigError, SystemConfig
from .receivers import EstimatorVariant
from .sweeps import (
    MODE_BENCH,
    MODE_CHANNEL_ESTIMATION,
    MODE_DETECTION_ESTIMATED,
    MODE_DETECTION_PERFECT,
    Record,
    SweepSpec,
    bench_runtime,
    run_sweep,
)

_DETECTION_MODES = (MODE_DETECTION_PERFECT, MODE_DETECTION_ESTIMATED)
_ALL_VARIANTS = tuple(EstimatorVariant)
_FAST_VARIANTS = (EstimatorVariant.GDA_ADA_1, EstimatorVariant.GDA_ADA_2)


def _parse_variants(text: str, mode: str) -> tuple[EstimatorVariant, ...]:
    if text == "all":
        return _ALL_VARIANTS
    if text == "default":
        # the full-covariance detector is a slow path and stays out of
        # default detection sweeps
        return _FAST_VARIANTS if mode in _DETECTION_MODES else _ALL_VARIANTS
    return tuple(EstimatorVariant.from_name(t.strip()) for t in text.split(",") if t.strip())


def _parse_values(text: str, axis: str) -> tuple:
    cast = float if axis == "snr_db" else int
    try:
        return tuple(cast(t.strip()) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise ConfigError(f"bad --values for axis {axis}: {exc}") from exc


def _add_common(parser: argparse.ArgumentParser, default_trials: int) -> None:
    parser.add_argument("--config", required=True, help="path to a SystemConfig JSON file")
    parser.add_argument("--axis", default="snr_db", choices=("snr_db", "T", "K", "N_c"))
    parser.add_argument("--values", default=None, help="comma-separated axis values")
    parser.add_argument("--variants", default="default",
                        help="comma-separated variant names, or 'all'/'default'")
    parser.add_argument("--trials", type=int, default=default_trials)
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument("--out", default=None, help="CSV output path (plus .meta.json sidecar)")
    parser.add_argument("--jobs", type=int, default=None, help="trial worker processes")


def _print_record(rec: Record) -> None:
    print(
        f"[{rec.mode}] {rec.variant} {rec.axis}={rec.axis_value}: "
        f"{rec.metric}={rec.value:.6g} (trials={rec.trials}, {rec.wall_s:.2f}s)"
    )


def _build_spec(args, mode: str) -> SweepSpec:
    cfg = SystemConfig.from_json(args.config)
    if args.seed is not None:
        cfg = cfg.replace(seed=args.seed)
    if args.values is None:
        values = (getattr(cfg, args.axis),)
    else:
        values = _parse_values(args.values, args.axis)
    return SweepSpec(
        base=cfg,
        axis=args.axis,
        values=values,
        variants=_parse_variants(args.variants, mode),
        trials=args.trials,
        mode=mode,
        n_jobs=args.jobs,
        bench_reps=getattr(args, "reps", 5),
        bench_warmup=getattr(args, "warmup", 2),
        bench_ops=tuple(getattr(args, "ops", "estimator,detector").split(",")),
    )


def _emit(table, out_path: str | None) -> None:
    if out_path:
        csv_path = table.write_csv(out_path)
        meta_path = table.write_metadata(out_path)
        print(f"wrote {len(table.records)} records to {csv_path} (metadata: {meta_path})")
    if table.discarded:
        print(f"discarded degenerate trials: {table.discarded}", file=sys.stderr)


def _merge_negative_values(argv: list[str]) -> list[str]:
    # argparse mistakes "--values -10,-5,0" for a flag; fold into "=" form
    out = []
    i = 0
    while i < len(argv):
        arg = argv[i]
        if (
            arg == "--values"
            and i + 1 < len(argv)
            and argv[i + 1].startswith("-")
            and any(ch.isdigit() for ch in argv[i + 1])
        ):
            out.append(f"--values={argv[i + 1]}")
            i += 2
            continue
        out.append(arg)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="onebit-mimo",
        description="One-bit massive MIMO-OFDM link simulator: boosted "
        "discriminant channel estimation and data detection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_est = sub.add_parser("estimate-sweep", help="channel-estimation NMSE sweep")
    _add_common(p_est, default_trials=50)

    p_det = sub.add_parser("detect-sweep", help="data-detection BER sweep")
    _add_common(p_det, default_trials=500)
    p_det.add_argument("--mode", default=MODE_DETECTION_PERFECT, choices=_DETECTION_MODES)

    p_single = sub.add_parser("single-run", help="one deterministic trial at the config point")
    _add_common(p_single, default_trials=1)
    p_single.add_argument(
        "--mode",
        default=MODE_CHANNEL_ESTIMATION,
        choices=(MODE_CHANNEL_ESTIMATION,) + _DETECTION_MODES,
    )

    p_bench = sub.add_parser("bench", help="runtime scaling benchmarks")
    _add_common(p_bench, default_trials=1)
    p_bench.add_argument("--ops", default="estimator,detector",
                         help="comma-separated subset of estimator,detector")
    p_bench.add_argument("--reps", type=int, default=5)
    p_bench.add_argument("--warmup", type=int, default=2)

    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_merge_negative_values(list(argv)))
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")

    mode = {
        "estimate-sweep": MODE_CHANNEL_ESTIMATION,
        "detect-sweep": None,
        "single-run": None,
        "bench": MODE_BENCH,
    }[args.command]
    if mode is None:
        mode = args.mode

    try:
        spec = _build_spec(args, mode)
        if args.command == "bench":
            table = bench_runtime(spec, progress=_print_record)
        else:
            table = run_sweep(spec, progress=_print_record)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    _emit(table, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
