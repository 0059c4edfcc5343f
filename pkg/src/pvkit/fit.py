"""Correct-fit risk adjustment between an expected and a realized stream.

The adjustment sought is the rate that, added to the base discount, makes the
risk-adjusted expected stream coincide with the realized discounted stream.
Two independent routes compute it:

* :func:`fit_closed_form` — the exact answer for exponential streams, the
  difference of growth rates (expected minus realized). Its sign is the whole
  story: positive for income whose realized growth lags expectation, negative
  for losses whose realized growth outruns expectation.
* :func:`fit_numeric` — bracketed bisection on the grid mismatch between the
  two curves. It never assumes the closed form, so agreement between the two
  routes is a genuine check rather than a tautology.

The base rate appears in both exponents and cancels from the fit; it is kept
in :class:`FitProblem` because the mismatch objective and residual reporting
evaluate discounted values.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .engine import sample_times
from .errors import MismatchedInitialsError, MismatchedKindsError, NoConvergenceError
from .model import (
    FitResult,
    Rate,
    SignClass,
    StreamKind,
    StreamSpec,
    as_rate,
    signed_initial,
)

# Bisection stops when the bracket is this narrow (per year).
BRACKET_TOLERANCE = 1e-12
MAX_BISECTIONS = 200
# Bracket doublings outward from [-1, +1] before giving up.
MAX_EXPANSIONS = 60


@dataclass(frozen=True)
class FitProblem:
    """An expected stream vs. a realized stream under a common base rate.

    Both streams must be the same kind and start at the same magnitude;
    comparing an income stream against a loss stream is meaningless, as is
    fitting streams with different starting points. ``horizon``/``step``
    define the evaluation grid used by the numeric route and by residual
    reporting; the closed form ignores them.
    """

    expected: StreamSpec
    actual: StreamSpec
    d_tvm: Rate
    horizon: float = 100.0
    step: float = 1.0

    def __post_init__(self):
        if self.expected.kind is not self.actual.kind:
            raise MismatchedKindsError(
                f"cannot fit {self.expected.kind.value} against {self.actual.kind.value}"
            )
        if self.expected.initial_magnitude != self.actual.initial_magnitude:
            raise MismatchedInitialsError(
                f"streams must start at the same magnitude, got "
                f"{self.expected.initial_magnitude!r} vs {self.actual.initial_magnitude!r}"
            )
        object.__setattr__(self, "d_tvm", as_rate(self.d_tvm))
        object.__setattr__(self, "horizon", float(self.horizon))
        object.__setattr__(self, "step", float(self.step))
        sample_times(self.horizon, self.step)  # grid must be valid even for the closed form

    def grid(self) -> list[float]:
        return sample_times(self.horizon, self.step)


class DirectionVerdict(Enum):
    """Whether a fitted sign matches the direction risk must take for the kind."""

    CONSISTENT = "consistent"
    CONTRADICTORY = "contradictory"
    DEGENERATE = "degenerate"


def fit_closed_form(problem: FitProblem) -> FitResult:
    """Exact fit: expected growth minus realized growth, residual zero."""
    value = problem.expected.growth.value - problem.actual.growth.value
    return FitResult.from_adjustment(Rate(value), residual=0.0)


def _signed_infinity(exponent_gap: np.ndarray) -> np.ndarray:
    return np.where(exponent_gap > 0.0, np.inf, np.where(exponent_gap < 0.0, -np.inf, 0.0))


def fit_numeric(problem: FitProblem) -> FitResult:
    """Solve for the adjustment by bracketed bisection on the grid mismatch.

    The signed objective is the sum over the grid of (risk-adjusted expected
    minus realized) discounted values, divided by the signed initial value.
    It is strictly decreasing in the adjustment, so a sign change brackets
    the root. The search starts on [-1, +1] per year, doubles outward while
    the root lies outside, then bisects until the bracket is narrower than
    BRACKET_TOLERANCE. The reported residual is the achieved maximum absolute
    mismatch in currency units.

    Raises:
        NoConvergenceError: if no sign change is found within the expansion
            budget or the bisection budget is exhausted.
    """
    ts = np.asarray(problem.grid(), dtype=float)
    g_expected = problem.expected.growth.value
    g_actual = problem.actual.growth.value
    base = problem.d_tvm.value
    with np.errstate(over="ignore"):
        realized = np.exp((g_actual - base) * ts)

    def mismatch(adjustment: float) -> float:
        exponent = (g_expected - base - adjustment) * ts
        with np.errstate(over="ignore", invalid="ignore"):
            diff = np.exp(exponent) - realized
        bad = np.isnan(diff)
        if bad.any():
            # both exponentials overflowed; order the infinities by exponent
            diff = np.where(bad, _signed_infinity(exponent - (g_actual - base) * ts), diff)
        return float(np.sum(diff))

    lo, hi = -1.0, 1.0
    for _ in range(MAX_EXPANSIONS):
        if mismatch(lo) >= 0.0 >= mismatch(hi):
            break
        lo *= 2.0
        hi *= 2.0
    else:
        raise NoConvergenceError(
            f"no sign change in [{lo:g}, {hi:g}] after {MAX_EXPANSIONS} bracket doublings"
        )

    iterations = 0
    while hi - lo > BRACKET_TOLERANCE:
        if iterations >= MAX_BISECTIONS:
            raise NoConvergenceError(
                f"bracket still {hi - lo:g} wide after {MAX_BISECTIONS} bisections"
            )
        mid = 0.5 * (lo + hi)
        if mismatch(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
        iterations += 1

    adjustment = 0.5 * (lo + hi)
    with np.errstate(over="ignore"):
        achieved = np.exp((g_expected - base - adjustment) * ts)
    residual = float(
        np.max(np.abs(signed_initial(problem.expected) * (achieved - realized)))
    )
    return FitResult.from_adjustment(Rate(adjustment), residual=residual)


def classify_direction(kind: StreamKind, fit: FitResult) -> DirectionVerdict:
    """Classify a fit against the directional rule for its stream kind.

    Income risk (realized growth below expected) demands a positive
    adjustment; loss risk (realized damages outgrowing expected) demands a
    negative one. A zero fit is degenerate; any other combination means the
    realized ordering violated the risk premise.
    """
    if fit.sign_class is SignClass.ZERO:
        return DirectionVerdict.DEGENERATE
    if kind is StreamKind.INCOME and fit.sign_class is SignClass.POSITIVE:
        return DirectionVerdict.CONSISTENT
    if kind is StreamKind.LOSS and fit.sign_class is SignClass.NEGATIVE:
        return DirectionVerdict.CONSISTENT
    return DirectionVerdict.CONTRADICTORY
