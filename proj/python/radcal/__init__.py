"""Online gain/phase calibration of MIMO radar virtual arrays."""

from ._radcal import (
    ArrayGeometry,
    CleanConfig,
    Error,
    Estimator,
    angle_to_frequency,
    clean_estimate,
    compute_slls,
    estimate_doa_bias,
    estimate_txrx_gpi,
    factor_to_va,
    frequency_to_angle,
    generate_scene,
    normalize_and_detrend,
    predistort,
    reconstruct,
    run_experiment,
    sbb_check,
    step_size_at,
    synthesize_ideal,
)

__all__ = [
    "ArrayGeometry",
    "CleanConfig",
    "Error",
    "Estimator",
    "angle_to_frequency",
    "clean_estimate",
    "compute_slls",
    "estimate_doa_bias",
    "estimate_txrx_gpi",
    "factor_to_va",
    "frequency_to_angle",
    "generate_scene",
    "normalize_and_detrend",
    "predistort",
    "reconstruct",
    "run_experiment",
    "sbb_check",
    "step_size_at",
    "synthesize_ideal",
]
