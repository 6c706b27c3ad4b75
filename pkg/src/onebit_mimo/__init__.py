"""One-bit massive MIMO-OFDM link simulator with boosted discriminant receivers."""

__version__ = "0.1.0"

from .airlink import (
    ChannelRealization,
    snap_zero_components,
    Constellation,
    DetectionOperator,
    PilotSet,
    build_pilots,
    detection_operator,
    generate_channel,
    generate_data_symbols,
    synthesize_data_rx,
    synthesize_pilot_rx,
)
from .boosting import (
    BoostConfig,
    BoostTrace,
    alpha_from_error,
    run_boost,
    update_weights,
    weighted_error,
)
from .config import ConfigError, SystemConfig, noise_variance, substream
from .gda import (
    DegenerateClassError,
    WeightedTrainingSet,
    gda_unweighted,
    weak_gda_diag,
    weak_gda_full,
    weak_mean_diff,
    weighted_class_means,
    weighted_covariance_diag,
    weighted_covariance_full,
)
from .metrics import ber, nmse
from .receivers import (
    ChannelEstimate,
    DetectionResult,
    EstimatorVariant,
    detect_data,
    estimate_channel_all,
    estimate_channel_antenna,
    map_to_constellation,
    real_to_complex_estimate,
)
from .signal_ops import (
    circulant_apply,
    fft_normalized,
    ifft_normalized,
    one_bit_quantize,
    real_stack_matrix,
    real_stack_vector,
    real_unstack_vector,
    sign_pm,
)
from .sweeps import (
    MODE_BENCH,
    MODE_CHANNEL_ESTIMATION,
    MODE_DETECTION_ESTIMATED,
    MODE_DETECTION_PERFECT,
    Record,
    ResultsTable,
    SweepSpec,
    bench_runtime,
    fit_loglog_slope,
    run_sweep,
)

__all__ = [
    "__version__",
    "BoostConfig",
    "BoostTrace",
    "ChannelEstimate",
    "ChannelRealization",
    "ConfigError",
    "Constellation",
    "DegenerateClassError",
    "DetectionOperator",
    "DetectionResult",
    "EstimatorVariant",
    "MODE_BENCH",
    "MODE_CHANNEL_ESTIMATION",
    "MODE_DETECTION_ESTIMATED",
    "MODE_DETECTION_PERFECT",
    "PilotSet",
    "Record",
    "ResultsTable",
    "SweepSpec",
    "SystemConfig",
    "WeightedTrainingSet",
    "alpha_from_error",
    "bench_runtime",
    "ber",
    "build_pilots",
    "circulant_apply",
    "detect_data",
    "detection_operator",
    "estimate_channel_all",
    "estimate_channel_antenna",
    "fft_normalized",
    "fit_loglog_slope",
    "gda_unweighted",
    "generate_channel",
    "generate_data_symbols",
    "ifft_normalized",
    "map_to_constellation",
    "nmse",
    "noise_variance",
    "one_bit_quantize",
    "real_stack_matrix",
    "real_stack_vector",
    "real_to_complex_estimate",
    "real_unstack_vector",
    "run_boost",
    "run_sweep",
    "sign_pm",
    "snap_zero_components",
    "substream",
    "synthesize_data_rx",
    "synthesize_pilot_rx",
    "update_weights",
    "weak_gda_diag",
    "weak_gda_full",
    "weak_mean_diff",
    "weighted_class_means",
    "weighted_covariance_diag",
    "weighted_covariance_full",
    "weighted_error",
]
