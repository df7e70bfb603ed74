"""Long-range dependence diagnostics built around multifractal DFA."""

__version__ = "0.1.0"

from ._accel import backend
from .core import (
    GapPolicy,
    IngestConfig,
    TimeSeries,
    first_difference,
    integrate,
    load_csv,
    slice_calendar,
    to_csv,
)
from .generators import GeneratorSpec, generate
from .mfdfa import (
    CrossoverAnalysis,
    FluctuationCurve,
    MfdfaConfig,
    ScalingFit,
    detect_crossover,
    fit_scaling,
    fluctuation_function,
    generalized_hurst,
    hurst,
    profile,
    window_fluctuations,
)
from .seasonal import PeriodKind, SeasonalProfile, seasonal_profile
from .spectral import AcfResult, SpectrumResult, acf, smoothed_periodogram
from .stats import DescriptiveStats, TestReport, adf_test, describe, jarque_bera, kpss_test

__all__ = [
    "AcfResult",
    "CrossoverAnalysis",
    "DescriptiveStats",
    "FluctuationCurve",
    "GapPolicy",
    "GeneratorSpec",
    "IngestConfig",
    "MfdfaConfig",
    "PeriodKind",
    "ScalingFit",
    "SeasonalProfile",
    "SpectrumResult",
    "TestReport",
    "TimeSeries",
    "acf",
    "adf_test",
    "backend",
    "describe",
    "detect_crossover",
    "first_difference",
    "fit_scaling",
    "fluctuation_function",
    "generalized_hurst",
    "generate",
    "hurst",
    "integrate",
    "jarque_bera",
    "kpss_test",
    "load_csv",
    "profile",
    "seasonal_profile",
    "slice_calendar",
    "smoothed_periodogram",
    "to_csv",
    "window_fluctuations",
]
