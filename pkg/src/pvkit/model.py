"""Domain types for cash streams, rates, and risk policies.

Every type here is an immutable value: safe to hash, compare, copy, and send
between threads. Rates are dimensionless fractions per year under continuous
compounding (0.01427 means 1.427%/yr); percent notation exists only at I/O
boundaries, never inside the model.
"""

import math
from dataclasses import dataclass
from enum import Enum

from .errors import ValidationError, ZeroBaseRateError

# Dead band for classifying a fitted adjustment as positive/negative/zero.
SIGN_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Rate:
    """An annual continuously-compounded growth or discount rate.

    The value is a plain fraction per year and may be negative (loss-side
    growth rates legitimately are); it only has to be finite.
    """

    value: float

    def __post_init__(self):
        value = float(self.value)
        if not math.isfinite(value):
            raise ValidationError(f"rate must be finite, got {self.value!r}")
        object.__setattr__(self, "value", value)

    @classmethod
    def from_percent(cls, percent: float) -> "Rate":
        return cls(float(percent) / 100.0)

    @property
    def percent(self) -> float:
        return self.value * 100.0

    def __float__(self) -> float:
        return self.value


def as_rate(value: "Rate | float | int") -> Rate:
    """Coerce a bare number to :class:`Rate`; Rate instances pass through."""
    if isinstance(value, Rate):
        return value
    return Rate(float(value))


class StreamKind(Enum):
    """Which side of the ledger a stream lives on; fixes the sign of its values."""

    INCOME = "income"
    LOSS = "loss"

    @property
    def sign(self) -> float:
        return 1.0 if self is StreamKind.INCOME else -1.0


@dataclass(frozen=True)
class StreamSpec:
    """An exponential cash stream.

    Signed values are ``kind.sign * initial_magnitude * e^(growth * t)``; the
    magnitude is kept strictly positive so the sign convention is structural
    rather than caller discipline.
    """

    kind: StreamKind
    initial_magnitude: float
    growth: Rate

    def __post_init__(self):
        if not isinstance(self.kind, StreamKind):
            raise ValidationError(f"kind must be a StreamKind, got {self.kind!r}")
        magnitude = float(self.initial_magnitude)
        if not (math.isfinite(magnitude) and magnitude > 0.0):
            raise ValidationError(
                f"initial_magnitude must be finite and > 0, got {self.initial_magnitude!r}"
            )
        object.__setattr__(self, "initial_magnitude", magnitude)
        object.__setattr__(self, "growth", as_rate(self.growth))


class RiskMode(Enum):
    """How a risk factor transforms the base discount rate."""

    MULTIPLICATIVE = "multiplicative"
    DIVISIVE = "divisive"
    SUBTRACTIVE = "subtractive"


@dataclass(frozen=True)
class RiskPolicy:
    """A risk adjustment applied to a base rate.

    Multiplicative and divisive policies carry a dimensionless factor >= 1
    (1 being the risk-free identity); values below 1 would silently invert
    the risk semantics and are rejected. Subtractive policies carry a
    :class:`Rate` delta that is subtracted from the base rate.
    """

    mode: RiskMode
    parameter: "float | Rate"

    def __post_init__(self):
        if not isinstance(self.mode, RiskMode):
            raise ValidationError(f"mode must be a RiskMode, got {self.mode!r}")
        if self.mode is RiskMode.SUBTRACTIVE:
            object.__setattr__(self, "parameter", as_rate(self.parameter))
            return
        if isinstance(self.parameter, Rate):
            raise ValidationError(
                f"{self.mode.value} policies take a dimensionless factor, not a Rate"
            )
        factor = float(self.parameter)
        if not math.isfinite(factor):
            raise ValidationError(f"risk factor must be finite, got {self.parameter!r}")
        if factor < 1.0:
            raise ValidationError(
                f"risk factor must be >= 1 (1 is the risk-free identity), got {factor!r}"
            )
        object.__setattr__(self, "parameter", factor)

    @classmethod
    def multiplicative(cls, factor: float) -> "RiskPolicy":
        return cls(RiskMode.MULTIPLICATIVE, factor)

    @classmethod
    def divisive(cls, factor: float) -> "RiskPolicy":
        return cls(RiskMode.DIVISIVE, factor)

    @classmethod
    def subtractive(cls, delta: "Rate | float") -> "RiskPolicy":
        return cls(RiskMode.SUBTRACTIVE, as_rate(delta))

    @property
    def factor(self) -> float:
        if self.mode is RiskMode.SUBTRACTIVE:
            raise ValidationError("subtractive policies carry a delta, not a factor")
        return self.parameter

    @property
    def delta(self) -> Rate:
        if self.mode is not RiskMode.SUBTRACTIVE:
            raise ValidationError(f"{self.mode.value} policies carry a factor, not a delta")
        return self.parameter


class SignClass(Enum):
    """Sign of a fitted adjustment, with a dead band of SIGN_TOLERANCE around zero."""

    POSITIVE = "positive"
    NEGATIVE = "negative"
    ZERO = "zero"


def classify_sign(value: float, tolerance: float = SIGN_TOLERANCE) -> SignClass:
    """Classify a fitted adjustment value as positive, negative, or zero."""
    if value > tolerance:
        return SignClass.POSITIVE
    if value < -tolerance:
        return SignClass.NEGATIVE
    return SignClass.ZERO


@dataclass(frozen=True)
class FitResult:
    """A fitted risk-adjustment rate with sign classification and diagnostics.

    ``residual`` is the maximum absolute mismatch, in currency units, between
    the risk-adjusted expected stream and the realized discounted stream over
    the evaluation grid; the closed-form path reports zero by construction.
    """

    adjustment: Rate
    sign_class: SignClass
    residual: float

    def __post_init__(self):
        object.__setattr__(self, "adjustment", as_rate(self.adjustment))
        residual = float(self.residual)
        if not (math.isfinite(residual) and residual >= 0.0):
            raise ValidationError(f"residual must be finite and >= 0, got {self.residual!r}")
        object.__setattr__(self, "residual", residual)
        expected = classify_sign(self.adjustment.value)
        if self.sign_class is not expected:
            raise ValidationError(
                f"sign_class {self.sign_class!r} inconsistent with adjustment "
                f"{self.adjustment.value!r} (expected {expected!r})"
            )

    @classmethod
    def from_adjustment(cls, value: "Rate | float", residual: float = 0.0) -> "FitResult":
        rate = as_rate(value)
        return cls(rate, classify_sign(rate.value), residual)


def signed_initial(spec: StreamSpec) -> float:
    """Initial stream value carrying the sign mandated by its kind."""
    return spec.kind.sign * spec.initial_magnitude


def risk_ratio(d_target: "Rate | float", d_base: "Rate | float") -> float:
    """Ratio of a risk-bearing rate to a base rate: the implied risk factor.

    Raises:
        ZeroBaseRateError: if the base rate is exactly zero.
    """
    target = as_rate(d_target)
    base = as_rate(d_base)
    if base.value == 0.0:
        raise ZeroBaseRateError("cannot form a rate ratio against a zero base rate")
    return target.value / base.value
