"""Discounting engine: stream evaluation, net-of-risk rates, sampled PV curves.

Risk moves the discount rate in opposite directions for the two stream kinds:
income risk raises the rate (multiplicative factor), loss risk lowers it
(divisive factor, or an equivalent subtractive delta). :func:`net_rate`
enforces those directions; the scenario layer exposes an explicit override
for plotting deliberately wrong-direction comparison curves.

All functions are pure and stateless; evaluation is plain double precision,
which at these exponent magnitudes is nowhere near overflow.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import BadGridError, IllegalPairingError, NegativeTimeError
from .model import (
    Rate,
    RiskMode,
    RiskPolicy,
    StreamKind,
    StreamSpec,
    as_rate,
    signed_initial,
)


class CurvePoint(NamedTuple):
    t: float
    raw_value: float
    discounted_value: float


@dataclass(frozen=True)
class CurveSeries:
    """A sampled present-value curve plus the inputs that produced it.

    Points are ordered by strictly increasing ``t`` starting at 0, where the
    raw and discounted values both equal the signed initial value.
    """

    spec: StreamSpec
    rate: Rate
    points: tuple[CurvePoint, ...]

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def times(self) -> list[float]:
        return [p.t for p in self.points]

    def raw_values(self) -> list[float]:
        return [p.raw_value for p in self.points]

    def discounted_values(self) -> list[float]:
        return [p.discounted_value for p in self.points]


def _checked_time(t: float) -> float:
    t = float(t)
    if not (math.isfinite(t) and t >= 0.0):
        raise NegativeTimeError(f"time must be a finite number of years >= 0, got {t!r}")
    return t


def stream_value(spec: StreamSpec, t: float) -> float:
    """Undiscounted stream value at year ``t``: signed initial times e^(growth*t).

    Raises:
        NegativeTimeError: if ``t`` is negative or not finite.
    """
    t = _checked_time(t)
    return signed_initial(spec) * math.exp(spec.growth.value * t)


def discounted_value(spec: StreamSpec, d: "Rate | float", t: float) -> float:
    """Present value at year ``t`` under rate ``d``: signed initial times e^((growth-d)*t).

    At ``t = 0`` this returns the signed initial value exactly.

    Raises:
        NegativeTimeError: if ``t`` is negative or not finite.
    """
    t = _checked_time(t)
    d = as_rate(d)
    return signed_initial(spec) * math.exp((spec.growth.value - d.value) * t)


def net_rate(d_tvm: "Rate | float", policy: RiskPolicy, kind: StreamKind) -> Rate:
    """Apply a risk policy to the base time-value rate for a given stream kind.

    Multiplicative factors pair with income (risk means returns below
    expectation, so the rate rises); divisive factors pair with losses (risk
    means damages above expectation, so the rate falls). Subtractive deltas
    are accepted for either kind, except that a negative delta on income is
    rejected.

    Raises:
        IllegalPairingError: income with a divisive policy, loss with a
            multiplicative policy, or income with a negative subtractive
            delta. Callers that want the wrong-direction curve on purpose go
            through the scenario override instead.
    """
    d = as_rate(d_tvm)
    if not isinstance(policy, RiskPolicy):
        raise IllegalPairingError(f"policy must be a RiskPolicy, got {policy!r}")
    if policy.mode is RiskMode.MULTIPLICATIVE:
        if kind is not StreamKind.INCOME:
            raise IllegalPairingError(
                "multiplicative risk raises the rate and would shrink loss magnitudes; "
                "losses take divisive or subtractive policies"
            )
        return Rate(d.value * policy.factor)
    if policy.mode is RiskMode.DIVISIVE:
        if kind is not StreamKind.LOSS:
            raise IllegalPairingError(
                "divisive risk lowers the rate and would inflate income; "
                "income takes multiplicative policies"
            )
        return Rate(d.value / policy.factor)
    delta = policy.delta.value
    if kind is StreamKind.INCOME and delta < 0.0:
        raise IllegalPairingError(
            "negative subtractive delta on income is rejected; "
            "added income risk is expressed through a multiplicative factor"
        )
    return Rate(d.value - delta)


def sample_times(horizon: float, step: float) -> list[float]:
    """Uniform grid 0, step, 2*step, ... capped by ``horizon`` as the exact final point.

    When the horizon is not a multiple of the step, it is appended as an
    extra final point, so curve endpoints are reproducible bit for bit.

    Raises:
        BadGridError: unless 0 < step <= horizon with both finite.
    """
    horizon = float(horizon)
    step = float(step)
    if not (math.isfinite(horizon) and horizon > 0.0):
        raise BadGridError(f"horizon must be finite and > 0, got {horizon!r}")
    if not (math.isfinite(step) and 0.0 < step <= horizon):
        raise BadGridError(f"step must satisfy 0 < step <= horizon, got {step!r}")
    n = math.floor(horizon / step)
    times = [i * step for i in range(n + 1)]
    if times[-1] != horizon:
        if times[-1] > horizon:
            raise BadGridError(
                f"floor(horizon/step)*step = {times[-1]!r} overshoots horizon {horizon!r}; "
                "pick a step without this floating-point degeneracy"
            )
        times.append(horizon)
    return times


def pv_curve(spec: StreamSpec, d: "Rate | float", horizon: float, step: float) -> CurveSeries:
    """Sample raw and discounted stream values over a uniform grid.

    Raises:
        BadGridError: for a non-positive horizon or step, or step > horizon.
    """
    d = as_rate(d)
    points = tuple(
        CurvePoint(t, stream_value(spec, t), discounted_value(spec, d, t))
        for t in sample_times(horizon, step)
    )
    return CurveSeries(spec=spec, rate=d, points=points)
