"""Monte-Carlo probe of fit-adjustment signs under random realized growth.

Each draw takes a realized growth rate from a configured distribution, fits
the adjustment in closed form against a fixed expected growth, and the report
aggregates the signs: the fraction of negative fits equals the fraction of
draws whose realized growth exceeds the expected growth, draw for draw.

Determinism contract: draws come from numpy's counter-based Philox bit
generator seeded with the report seed. Uniform variates use the generator's
standard 53-bit conversion; normal variates apply the inverse-CDF transform
(``statistics.NormalDist.inv_cdf``) to those same uniforms, with an exact 0.0
draw nudged to 2^-54 first. Equal (kind, expected growth, distribution, n,
seed) inputs therefore reproduce the report field for field.
"""

import math
import statistics
from dataclasses import dataclass

import numpy as np

from .errors import BadDistributionError, ValidationError
from .model import Rate, StreamKind, as_rate

_STD_NORMAL = statistics.NormalDist()
_TINY_UNIFORM = 2.0**-54

# Retained head of the draw stream, enough to spot-check per-draw signs.
HEAD_DRAWS = 100


@dataclass(frozen=True)
class Uniform:
    """Uniform growth distribution on [lo, hi)."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise BadDistributionError(f"uniform bounds must be finite, got {self.lo!r}, {self.hi!r}")
        if not lo < hi:
            raise BadDistributionError(f"uniform requires lo < hi, got {lo!r} >= {hi!r}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)


@dataclass(frozen=True)
class Normal:
    """Normal growth distribution."""

    mean: float
    stddev: float

    def __post_init__(self):
        mean, stddev = float(self.mean), float(self.stddev)
        if not (math.isfinite(mean) and math.isfinite(stddev)):
            raise BadDistributionError(f"normal parameters must be finite, got {self.mean!r}, {self.stddev!r}")
        if not stddev > 0.0:
            raise BadDistributionError(f"normal requires stddev > 0, got {stddev!r}")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "stddev", stddev)


GrowthDistribution = Uniform | Normal


@dataclass(frozen=True)
class McReport:
    """Aggregate fit statistics over random realized-growth draws.

    ``quantiles`` holds the nearest-rank 5th/50th/95th percentiles of the
    fitted adjustments; ``first_draws`` retains the head of the stream as
    (realized growth, adjustment) pairs for per-draw spot checks.
    """

    kind: StreamKind
    expected_growth: Rate
    n: int
    seed: int
    n_negative: int
    n_positive: int
    n_zero: int
    frac_negative: float
    frac_actual_above_expected: float
    mean_adjustment: Rate
    quantiles: tuple[Rate, Rate, Rate]
    first_draws: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if self.n_negative + self.n_positive + self.n_zero != self.n:
            raise ValidationError("sign counts must account for every draw")
        for name in ("frac_negative", "frac_actual_above_expected"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {value!r}")
        if self.frac_negative != self.frac_actual_above_expected:
            raise ValidationError(
                "frac_negative must equal frac_actual_above_expected: "
                "each draw's sign is fixed by that comparison"
            )
        q05, q50, q95 = self.quantiles
        if not q05.value <= q50.value <= q95.value:
            raise ValidationError(f"quantiles must be ordered, got {self.quantiles!r}")


def _sample(dist: GrowthDistribution, gen: np.random.Generator, n: int) -> np.ndarray:
    u = gen.random(n)
    if isinstance(dist, Uniform):
        return dist.lo + (dist.hi - dist.lo) * u
    u = np.where(u == 0.0, _TINY_UNIFORM, u)
    z = np.fromiter((_STD_NORMAL.inv_cdf(x) for x in u), dtype=float, count=n)
    return dist.mean + dist.stddev * z


def mc_fit_distribution(
    kind: StreamKind,
    expected_growth: "Rate | float",
    dist: GrowthDistribution,
    d_tvm: "Rate | float",
    n: int,
    seed: int,
) -> McReport:
    """Draw realized growths, fit each in closed form, and aggregate.

    ``d_tvm`` is validated and accepted for interface symmetry only: the
    fitted adjustment is a growth-rate difference in which the base rate
    cancels, so the report never depends on it.

    Raises:
        BadDistributionError: if ``dist`` is not a valid growth distribution.
        ValidationError: if ``n`` < 1.
    """
    if not isinstance(dist, (Uniform, Normal)):
        raise BadDistributionError(f"dist must be Uniform or Normal, got {dist!r}")
    if not isinstance(kind, StreamKind):
        raise ValidationError(f"kind must be a StreamKind, got {kind!r}")
    n = int(n)
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n!r}")
    seed = int(seed)
    as_rate(d_tvm)
    g_expected = as_rate(expected_growth).value

    gen = np.random.Generator(np.random.Philox(seed))
    draws = _sample(dist, gen, n)
    fits = g_expected - draws

    n_negative = int(np.count_nonzero(fits < 0.0))
    n_positive = int(np.count_nonzero(fits > 0.0))
    n_zero = n - n_negative - n_positive
    n_above = int(np.count_nonzero(draws > g_expected))

    sorted_fits = np.sort(fits)

    def nearest_rank(p: float) -> Rate:
        index = max(math.ceil(p * n), 1) - 1
        return Rate(float(sorted_fits[index]))

    mean = math.fsum(fits) / n
    head = tuple((float(draws[i]), float(fits[i])) for i in range(min(HEAD_DRAWS, n)))

    return McReport(
        kind=kind,
        expected_growth=Rate(g_expected),
        n=n,
        seed=seed,
        n_negative=n_negative,
        n_positive=n_positive,
        n_zero=n_zero,
        frac_negative=n_negative / n,
        frac_actual_above_expected=n_above / n,
        mean_adjustment=Rate(mean),
        quantiles=(nearest_rank(0.05), nearest_rank(0.50), nearest_rank(0.95)),
        first_draws=head,
    )
