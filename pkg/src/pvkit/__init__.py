"""pvkit: present values for exponential income and loss streams.

The library evaluates cash streams of the form sign * magnitude * e^(g*t)
under continuous-compounding discount rates, applies risk to the rate in the
direction the stream kind demands (multiplied upward for income, divided
downward or subtracted for losses), fits the adjustment rate that reconciles
an expected stream with a realized one, and checks that fit's sign both
analytically and by Monte-Carlo sampling.
"""

from ._version import __version__
from .engine import (
    CurvePoint,
    CurveSeries,
    discounted_value,
    net_rate,
    pv_curve,
    sample_times,
    stream_value,
)
from .errors import (
    BadDistributionError,
    BadGridError,
    ConfigError,
    ConfigParseError,
    IllegalPairingError,
    MismatchedInitialsError,
    MismatchedKindsError,
    NegativeTimeError,
    NoConvergenceError,
    UnknownKeyError,
    ValidationError,
    ValuationError,
    ZeroBaseRateError,
)
from .fit import (
    DirectionVerdict,
    FitProblem,
    classify_direction,
    fit_closed_form,
    fit_numeric,
)
from .mc import GrowthDistribution, McReport, Normal, Uniform, mc_fit_distribution
from .model import (
    SIGN_TOLERANCE,
    FitResult,
    Rate,
    RiskMode,
    RiskPolicy,
    SignClass,
    StreamKind,
    StreamSpec,
    as_rate,
    classify_sign,
    risk_ratio,
    signed_initial,
)
from .scenario import (
    ScenarioConfig,
    ScenarioReport,
    dump_config,
    emit_csv,
    emit_curve_csv,
    emit_json,
    load_config,
    parse_config_text,
    parse_rate_token,
    scenario_run,
)

__all__ = [
    "__version__",
    # model
    "Rate",
    "as_rate",
    "StreamKind",
    "StreamSpec",
    "RiskMode",
    "RiskPolicy",
    "SignClass",
    "classify_sign",
    "SIGN_TOLERANCE",
    "FitResult",
    "signed_initial",
    "risk_ratio",
    # engine
    "CurvePoint",
    "CurveSeries",
    "stream_value",
    "discounted_value",
    "net_rate",
    "sample_times",
    "pv_curve",
    # fit
    "FitProblem",
    "DirectionVerdict",
    "fit_closed_form",
    "fit_numeric",
    "classify_direction",
    # mc
    "Uniform",
    "Normal",
    "GrowthDistribution",
    "McReport",
    "mc_fit_distribution",
    # scenario
    "ScenarioConfig",
    "ScenarioReport",
    "scenario_run",
    "load_config",
    "parse_config_text",
    "dump_config",
    "parse_rate_token",
    "emit_csv",
    "emit_curve_csv",
    "emit_json",
    # errors
    "ValuationError",
    "ValidationError",
    "ZeroBaseRateError",
    "NegativeTimeError",
    "BadGridError",
    "IllegalPairingError",
    "MismatchedKindsError",
    "MismatchedInitialsError",
    "BadDistributionError",
    "NoConvergenceError",
    "ConfigError",
    "ConfigParseError",
    "UnknownKeyError",
]
