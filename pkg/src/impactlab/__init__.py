"""Transient-impact market microstructure toolkit.

Simulates long-memory order flow, builds prices from single-trade impact
kernels, estimates and calibrates response functions, checks price
diffusivity, detects volatility-normalised jumps, and iterates a reduced-form
spread-volatility feedback loop.
"""

__version__ = "0.1.0"

from .calibration import (
    CalibrationResult,
    FitResult,
    VolDecomposition,
    calibrate_kernel,
    fit_powerlaw,
    hill_plot,
    hill_tail,
    vol_decomposition,
)
from .feedback import (
    CoupledSeries,
    CrisisStats,
    FeedbackParams,
    crisis_statistics,
    simulate_feedback,
    stability_threshold,
)
from .jumps import (
    JumpEvent,
    LocalVol,
    NewsFeed,
    ReturnSeries,
    detect_jumps,
    jump_tail,
    local_vol,
    match_news,
    relaxation_profile,
    split_sessions,
    synthetic_returns,
)
from .orderflow import (
    ConstantLaw,
    LognormalLaw,
    ParetoLaw,
    UniformLaw,
    estimate_sign_corr,
    gen_marks,
    gen_signs,
    law_from_spec,
)
from .propagator import (
    Kernel,
    ModelParams,
    build_price,
    critical_beta,
    make_kernel,
    predicted_response,
    response,
    signature_plot,
)
from .series import LagCurve, MarkSeries, PriceSeries, SignSeries, TradeSeries, unit_marks
from .surprise import (
    ConditionalImpactReport,
    LinearFilter,
    conditional_impact,
    filter_from_kernel,
    fit_linear_predictor,
    kernel_from_filter,
    predict_signs,
    surprise_price,
)

__all__ = [
    "__version__",
    # series
    "SignSeries", "MarkSeries", "TradeSeries", "PriceSeries", "LagCurve", "unit_marks",
    # orderflow
    "gen_signs", "gen_marks", "estimate_sign_corr", "law_from_spec",
    "ConstantLaw", "LognormalLaw", "UniformLaw", "ParetoLaw",
    # propagator
    "Kernel", "ModelParams", "make_kernel", "build_price", "response",
    "predicted_response", "signature_plot", "critical_beta",
    # surprise
    "LinearFilter", "ConditionalImpactReport", "fit_linear_predictor", "predict_signs",
    "surprise_price", "kernel_from_filter", "filter_from_kernel", "conditional_impact",
    # calibration
    "FitResult", "VolDecomposition", "CalibrationResult", "calibrate_kernel",
    "fit_powerlaw", "hill_tail", "hill_plot", "vol_decomposition",
    # jumps
    "ReturnSeries", "LocalVol", "JumpEvent", "NewsFeed", "local_vol", "detect_jumps",
    "jump_tail", "match_news", "relaxation_profile", "split_sessions", "synthetic_returns",
    # feedback
    "FeedbackParams", "CoupledSeries", "CrisisStats", "simulate_feedback",
    "stability_threshold", "crisis_statistics",
]
