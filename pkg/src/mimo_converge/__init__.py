"""Monte Carlo study of massive MIMO convergence toward large-antenna limits."""

from .channel import ChannelSample, CorrelationSpec, RngStream, sample_channel
from .metrics import ConvergenceMetrics, convergence_metrics
from .montecarlo import (
    ConfigError,
    LimitGap,
    Scenario,
    StatSummary,
    SweepPoint,
    SweepResult,
    compare_to_limit,
    run_scenario,
)
from .numerics import NotPSDError, SingularMatrixError
from .power import PowerProfile, limiting_moments, link_gains
from .precoding import PrecoderResult, SystemParams, precoder_result
from .presets import PRESETS, build_preset

__version__ = "0.1.0"

__all__ = [
    "ChannelSample",
    "ConfigError",
    "ConvergenceMetrics",
    "CorrelationSpec",
    "LimitGap",
    "NotPSDError",
    "PRESETS",
    "PowerProfile",
    "PrecoderResult",
    "RngStream",
    "Scenario",
    "SingularMatrixError",
    "StatSummary",
    "SweepPoint",
    "SweepResult",
    "SystemParams",
    "build_preset",
    "compare_to_limit",
    "convergence_metrics",
    "limiting_moments",
    "link_gains",
    "precoder_result",
    "run_scenario",
    "sample_channel",
]
