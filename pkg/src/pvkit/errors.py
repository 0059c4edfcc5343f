"""Exception hierarchy shared across the package.

Everything derives from :class:`ValuationError`. Input-contract violations
additionally derive from :class:`ValidationError` (itself a ``ValueError``),
so callers who only know the stdlib still catch them.
"""


class ValuationError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(ValuationError, ValueError):
    """An input violates a documented contract."""


class ZeroBaseRateError(ValidationError):
    """Rate ratio requested against a zero base rate."""


class NegativeTimeError(ValidationError):
    """Evaluation time must be a finite number of years, >= 0."""


class BadGridError(ValidationError):
    """Sampling grid violates 0 < step <= horizon."""


class IllegalPairingError(ValidationError):
    """Stream kind combined with a risk mode that inverts its risk semantics."""


class MismatchedKindsError(ValidationError):
    """Fit requested between an income stream and a loss stream."""


class MismatchedInitialsError(ValidationError):
    """Fit requested between streams with different initial magnitudes."""


class BadDistributionError(ValidationError):
    """Growth distribution parameters are out of range."""


class NoConvergenceError(ValuationError):
    """Numeric solver exhausted its bracketing or iteration budget."""


class ConfigError(ValidationError):
    """Base class for configuration problems."""


class ConfigParseError(ConfigError):
    """Configuration text is malformed."""


class UnknownKeyError(ConfigError):
    """Configuration contains a key this tool does not define."""
