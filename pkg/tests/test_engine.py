import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pvkit import (
    BadGridError,
    IllegalPairingError,
    NegativeTimeError,
    Rate,
    RiskPolicy,
    StreamKind,
    StreamSpec,
    discounted_value,
    net_rate,
    pv_curve,
    sample_times,
    signed_initial,
    stream_value,
)

INCOME = StreamKind.INCOME
LOSS = StreamKind.LOSS


def income(magnitude=1.0, growth=0.0):
    return StreamSpec(INCOME, magnitude, Rate(growth))


def loss(magnitude=1.0, growth=0.0):
    return StreamSpec(LOSS, magnitude, Rate(growth))


class TestStreamValue:
    def test_growth_example(self):
        # 100 * exp(0.03 * 10)
        assert stream_value(income(100, 0.03), 10) == pytest.approx(
            134.9858807576003, rel=1e-12
        )

    def test_t_zero_is_signed_initial(self):
        assert stream_value(income(100, 0.03), 0) == 100.0

    def test_loss_example(self):
        # -100 * exp(0.02 * 50)
        assert stream_value(loss(100, 0.02), 50) == pytest.approx(
            -271.8281828459045, rel=1e-12
        )

    @pytest.mark.parametrize("bad_t", [-1.0, -1e-9, float("nan"), float("inf")])
    def test_bad_time_rejected(self, bad_t):
        with pytest.raises(NegativeTimeError):
            stream_value(income(), bad_t)


class TestDiscountedValue:
    def test_income_example(self):
        # 100 * exp((0.03 - 0.01427) * 10)
        assert discounted_value(income(100, 0.03), Rate(0.01427), 10) == pytest.approx(
            117.03466652401518, rel=1e-12
        )

    def test_flat_income_century(self):
        # 100 * exp(-1.427)
        assert discounted_value(income(100, 0.0), Rate(0.01427), 100) == pytest.approx(
            24.00279269783342, rel=1e-12
        )

    def test_loss_example(self):
        # -100 * exp((0.02 - 0.01427) * 50)
        assert discounted_value(loss(100, 0.02), Rate(0.01427), 50) == pytest.approx(
            -133.17581678942094, rel=1e-12
        )

    @given(
        kind=st.sampled_from(list(StreamKind)),
        magnitude=st.floats(min_value=1e-6, max_value=1e9),
        rate=st.floats(min_value=-0.5, max_value=0.5, allow_nan=False),
        t=st.floats(min_value=0.0, max_value=500.0),
    )
    def test_rate_equal_to_growth_cancels_exactly(self, kind, magnitude, rate, t):
        spec = StreamSpec(kind, magnitude, Rate(rate))
        assert discounted_value(spec, Rate(rate), t) == signed_initial(spec)

    def test_negative_time_rejected(self):
        with pytest.raises(NegativeTimeError):
            discounted_value(income(), Rate(0.01), -2)

    def test_composition_against_direct_formula(self):
        # discounted == raw * exp(-d*t) over 10^4 random draws, 1e-12 relative
        rng = np.random.Generator(np.random.Philox(2024))
        for _ in range(10_000):
            kind = INCOME if rng.random() < 0.5 else LOSS
            magnitude = float(rng.uniform(1e-3, 1e6))
            g = float(rng.uniform(-0.3, 0.3))
            d = float(rng.uniform(-0.3, 0.5))
            t = float(rng.uniform(0.0, 300.0))
            spec = StreamSpec(kind, magnitude, Rate(g))
            lhs = discounted_value(spec, Rate(d), t)
            rhs = stream_value(spec, t) * math.exp(-d * t)
            assert math.isclose(lhs, rhs, rel_tol=1e-12)


class TestNetRate:
    def test_multiplicative_income(self):
        d = net_rate(Rate(0.01427), RiskPolicy.multiplicative(3.57), INCOME)
        assert d.value == pytest.approx(0.0509439, rel=1e-12)

    def test_divisive_loss(self):
        d = net_rate(Rate(0.01427), RiskPolicy.divisive(3.57), LOSS)
        assert d.value == pytest.approx(0.01427 / 3.57, rel=1e-15)  # prints as 0.0039972

    def test_identity_factor(self):
        assert net_rate(Rate(0.01427), RiskPolicy.multiplicative(1.0), INCOME).value == 0.01427

    def test_subtractive_loss_matches_divisive(self):
        delta = 0.01427 * (1 - 1 / 3.57)
        d = net_rate(Rate(0.01427), RiskPolicy.subtractive(delta), LOSS)
        assert d.value == pytest.approx(0.01427 / 3.57, rel=1e-15)

    def test_income_with_divisive_rejected(self):
        with pytest.raises(IllegalPairingError):
            net_rate(Rate(0.01427), RiskPolicy.divisive(3.57), INCOME)

    def test_loss_with_multiplicative_rejected(self):
        with pytest.raises(IllegalPairingError):
            net_rate(Rate(0.01427), RiskPolicy.multiplicative(3.57), LOSS)

    def test_income_negative_subtractive_delta_rejected(self):
        with pytest.raises(IllegalPairingError):
            net_rate(Rate(0.01427), RiskPolicy.subtractive(-0.01), INCOME)

    def test_income_nonnegative_subtractive_delta_allowed(self):
        assert net_rate(Rate(0.05), RiskPolicy.subtractive(0.01), INCOME).value == pytest.approx(0.04)

    def test_loss_negative_subtractive_delta_allowed(self):
        assert net_rate(Rate(0.05), RiskPolicy.subtractive(-0.01), LOSS).value == pytest.approx(0.06)

    @pytest.mark.parametrize("d", [0.01427, 0.05, 0.1, 0.3])
    @pytest.mark.parametrize("factor", [1.0, 1.5, 2.0, 3.57, 4.0])
    def test_divisive_subtractive_equivalence(self, d, factor):
        divided = net_rate(Rate(d), RiskPolicy.divisive(factor), LOSS)
        subtracted = net_rate(Rate(d), RiskPolicy.subtractive(d * (1 - 1 / factor)), LOSS)
        assert subtracted.value == pytest.approx(divided.value, rel=1e-15)

    @given(
        d=st.floats(min_value=1e-6, max_value=0.5),
        factor=st.floats(min_value=1.0, max_value=50.0),
    )
    def test_divisive_subtractive_equivalence_wide(self, d, factor):
        # cancellation in d - delta grows with the factor: ~factor * eps relative
        divided = net_rate(Rate(d), RiskPolicy.divisive(factor), LOSS)
        subtracted = net_rate(Rate(d), RiskPolicy.subtractive(d * (1 - 1 / factor)), LOSS)
        assert subtracted.value == pytest.approx(divided.value, rel=1e-13)


class TestDirectionalOrdering:
    @given(
        g=st.floats(min_value=-0.2, max_value=0.2, allow_nan=False),
        d1=st.floats(min_value=-0.3, max_value=0.3, allow_nan=False),
        gap=st.floats(min_value=1e-6, max_value=0.3),
        t=st.floats(min_value=0.1, max_value=300.0),
    )
    def test_income_pv_decreases_with_rate(self, g, d1, gap, t):
        spec = income(1.0, g)
        assert discounted_value(spec, Rate(d1), t) > discounted_value(spec, Rate(d1 + gap), t)

    @given(
        factor=st.floats(min_value=1.001, max_value=100.0),
        d=st.floats(min_value=1e-4, max_value=0.5),
        t=st.floats(min_value=0.1, max_value=300.0),
        g=st.floats(min_value=-0.2, max_value=0.2, allow_nan=False),
    )
    def test_loss_risk_is_more_negative_than_tvm(self, factor, d, t, g):
        spec = loss(1.0, g)
        risky = net_rate(Rate(d), RiskPolicy.divisive(factor), LOSS)
        assert discounted_value(spec, risky, t) < discounted_value(spec, Rate(d), t)

    @given(
        factor=st.floats(min_value=1.001, max_value=100.0),
        d=st.floats(min_value=1e-4, max_value=0.5),
        t=st.floats(min_value=0.1, max_value=300.0),
        g=st.floats(min_value=-0.2, max_value=0.2, allow_nan=False),
    )
    def test_income_risk_is_below_tvm(self, factor, d, t, g):
        spec = income(1.0, g)
        risky = net_rate(Rate(d), RiskPolicy.multiplicative(factor), INCOME)
        assert discounted_value(spec, risky, t) < discounted_value(spec, Rate(d), t)


class TestSampleTimes:
    def test_uniform_grid_with_exact_multiple(self):
        assert sample_times(300, 1)[:3] == [0.0, 1.0, 2.0]
        assert len(sample_times(300, 1)) == 301
        assert sample_times(300, 1)[-1] == 300.0

    def test_horizon_appended_when_not_multiple(self):
        assert sample_times(10, 3) == [0.0, 3.0, 6.0, 9.0, 10.0]

    def test_single_step(self):
        assert sample_times(300, 300) == [0.0, 300.0]

    @pytest.mark.parametrize(
        "horizon,step",
        [(0, 1), (-5, 1), (10, 0), (10, -1), (10, 11), (float("nan"), 1), (10, float("inf"))],
    )
    def test_bad_grids_rejected(self, horizon, step):
        with pytest.raises(BadGridError):
            sample_times(horizon, step)


class TestPvCurve:
    def test_flat_income_endpoint_tvm(self):
        series = pv_curve(income(), Rate(0.01427), 300, 300)
        assert series.points[-1].discounted_value == pytest.approx(0.013828826343417538, rel=1e-12)

    def test_flat_income_endpoint_high_rate(self):
        series = pv_curve(income(), Rate(0.051), 300, 300)
        assert series.points[-1].discounted_value == pytest.approx(2.2661801277657141e-07, rel=1e-12)

    def test_flat_loss_endpoint_low_rate(self):
        series = pv_curve(loss(), Rate(0.0039972), 300, 300)
        assert series.points[-1].discounted_value == pytest.approx(-0.3014473213412857, rel=1e-12)

    def test_first_row_anchors_at_signed_initial(self):
        series = pv_curve(loss(7.5, 0.04), Rate(0.02), 50, 2.5)
        first = series.points[0]
        assert first.t == 0.0
        assert first.raw_value == -7.5
        assert first.discounted_value == -7.5

    def test_times_strictly_increasing_and_end_exact(self):
        series = pv_curve(income(), Rate(0.01), 10.5, 1)
        times = series.times()
        assert times[-1] == 10.5
        assert all(b > a for a, b in zip(times, times[1:]))
        assert len(series) == 12  # floor(10.5) + 1 grid points + appended horizon

    def test_sign_never_flips(self):
        series = pv_curve(loss(1.0, 0.03), Rate(0.2), 300, 1)
        assert all(p.raw_value < 0 and p.discounted_value < 0 for p in series)

    def test_metadata_echoed(self):
        spec = income(2.0, 0.01)
        series = pv_curve(spec, 0.03, 10, 1)
        assert series.spec == spec
        assert series.rate == Rate(0.03)
