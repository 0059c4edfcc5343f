import math

import pytest

from pvkit import (
    BadDistributionError,
    McReport,
    Normal,
    Rate,
    StreamKind,
    Uniform,
    ValidationError,
    mc_fit_distribution,
)

INCOME = StreamKind.INCOME
LOSS = StreamKind.LOSS


class TestDistributions:
    def test_uniform_requires_ordered_bounds(self):
        with pytest.raises(BadDistributionError):
            Uniform(0.04, 0.04)
        with pytest.raises(BadDistributionError):
            Uniform(0.05, 0.01)

    def test_uniform_requires_finite_bounds(self):
        with pytest.raises(BadDistributionError):
            Uniform(float("nan"), 0.04)

    def test_normal_requires_positive_stddev(self):
        with pytest.raises(BadDistributionError):
            Normal(0.02, 0.0)
        with pytest.raises(BadDistributionError):
            Normal(0.02, -0.01)

    def test_normal_requires_finite_parameters(self):
        with pytest.raises(BadDistributionError):
            Normal(float("inf"), 0.01)


class TestMcFitDistribution:
    def test_bit_identical_reproduction(self):
        first = mc_fit_distribution(LOSS, 0.02, Uniform(0.00, 0.04), 0.01427, 50_000, 42)
        second = mc_fit_distribution(LOSS, 0.02, Uniform(0.00, 0.04), 0.01427, 50_000, 42)
        assert first == second

    def test_different_seed_changes_draws(self):
        a = mc_fit_distribution(LOSS, 0.02, Uniform(0.00, 0.04), 0.01427, 1000, 1)
        b = mc_fit_distribution(LOSS, 0.02, Uniform(0.00, 0.04), 0.01427, 1000, 2)
        assert a.first_draws != b.first_draws

    def test_all_draws_above_expected_growth(self):
        report = mc_fit_distribution(LOSS, 0.02, Uniform(0.02, 0.06), 0.01427, 10_000, 42)
        assert report.frac_negative == 1.0
        assert report.frac_actual_above_expected == 1.0
        assert report.n_negative == report.n

    def test_symmetric_uniform_splits_evenly(self):
        report = mc_fit_distribution(LOSS, 0.02, Uniform(0.00, 0.04), 0.01427, 100_000, 42)
        assert 0.49 <= report.frac_negative <= 0.51

    def test_seed_42_fixture(self):
        # frozen output of the stock seed: pins the Philox stream and the
        # uniform conversion against generator regressions
        report = mc_fit_distribution(LOSS, 0.02, Uniform(0.00, 0.04), 0.01427, 100_000, 42)
        assert report.n_negative == 50064
        assert report.n_positive == 49936
        assert report.n_zero == 0
        assert report.frac_negative == 0.50064
        assert report.mean_adjustment.value == -8.945299997345286e-06
        assert report.quantiles[0].value == -0.01800933617650696
        assert report.quantiles[1].value == -2.523160382905676e-05
        assert report.quantiles[2].value == 0.018013361990588412
        assert report.first_draws[0] == (0.0034431052294113897, 0.01655689477058861)
        assert report.first_draws[1] == (0.005662292951165293, 0.014337707048834707)
        assert report.first_draws[2] == (0.01080372140190988, 0.009196278598090121)

    def test_income_draws_below_expected_growth(self):
        report = mc_fit_distribution(INCOME, 0.05, Uniform(0.00, 0.05), 0.01427, 10_000, 7)
        assert report.frac_negative == 0.0
        assert report.mean_adjustment.value > 0

    def test_sign_bookkeeping_accounts_for_all_draws(self):
        report = mc_fit_distribution(LOSS, 0.02, Uniform(0.00, 0.04), 0.0, 9_999, 5)
        assert report.n_negative + report.n_positive + report.n_zero == report.n

    def test_per_draw_sign_consistency_in_head(self):
        report = mc_fit_distribution(LOSS, 0.02, Uniform(0.00, 0.04), 0.0, 5_000, 12)
        assert len(report.first_draws) == 100
        for realized, adjustment in report.first_draws:
            assert adjustment == 0.02 - realized
            if realized > 0.02:
                assert adjustment < 0
            elif realized < 0.02:
                assert adjustment > 0

    def test_base_rate_never_enters_the_statistics(self):
        low = mc_fit_distribution(LOSS, 0.02, Uniform(0.00, 0.04), 0.0, 20_000, 3)
        high = mc_fit_distribution(LOSS, 0.02, Uniform(0.00, 0.04), 0.09, 20_000, 3)
        assert low == high

    def test_quantiles_are_ordered_and_nearest_rank(self):
        report = mc_fit_distribution(LOSS, 0.02, Uniform(0.00, 0.04), 0.01, 100, 8)
        q05, q50, q95 = (q.value for q in report.quantiles)
        assert q05 <= q50 <= q95
        # with n = 100 the head retains every draw; recompute the ranks directly
        fits = sorted(adjustment for _, adjustment in report.first_draws)
        assert q05 == fits[math.ceil(0.05 * 100) - 1]
        assert q50 == fits[math.ceil(0.50 * 100) - 1]
        assert q95 == fits[math.ceil(0.95 * 100) - 1]

    def test_mean_adjustment_matches_head_for_tiny_run(self):
        report = mc_fit_distribution(INCOME, 0.05, Uniform(0.00, 0.05), 0.0, 50, 21)
        fits = [adjustment for _, adjustment in report.first_draws]
        assert report.mean_adjustment.value == pytest.approx(math.fsum(fits) / 50, rel=1e-15)

    def test_normal_draw_moments(self):
        report = mc_fit_distribution(LOSS, 0.02, Normal(0.02, 0.01), 0.0, 20_000, 11)
        # adjustment = expected - realized, so its mean is near 0 and spread near stddev
        assert abs(report.mean_adjustment.value) < 0.001
        assert report.quantiles[1].value == pytest.approx(0.0, abs=0.001)
        spread = report.quantiles[2].value - report.quantiles[0].value
        assert spread == pytest.approx(2 * 1.6448536269514722 * 0.01, rel=0.05)

    def test_normal_is_reproducible(self):
        a = mc_fit_distribution(LOSS, 0.02, Normal(0.02, 0.01), 0.0, 5_000, 77)
        b = mc_fit_distribution(LOSS, 0.02, Normal(0.02, 0.01), 0.0, 5_000, 77)
        assert a == b

    def test_single_draw(self):
        report = mc_fit_distribution(LOSS, 0.02, Uniform(0.00, 0.04), 0.0, 1, 9)
        assert report.n == 1
        assert len(report.first_draws) == 1
        assert report.quantiles[0] == report.quantiles[2]

    def test_invalid_inputs(self):
        with pytest.raises(ValidationError):
            mc_fit_distribution(LOSS, 0.02, Uniform(0.0, 0.04), 0.0, 0, 42)
        with pytest.raises(BadDistributionError):
            mc_fit_distribution(LOSS, 0.02, "uniform", 0.0, 10, 42)
        with pytest.raises(ValidationError):
            mc_fit_distribution("loss", 0.02, Uniform(0.0, 0.04), 0.0, 10, 42)


class TestMcReportInvariants:
    def test_fraction_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            McReport(
                kind=LOSS,
                expected_growth=Rate(0.02),
                n=10,
                seed=1,
                n_negative=5,
                n_positive=5,
                n_zero=0,
                frac_negative=0.5,
                frac_actual_above_expected=0.4,
                mean_adjustment=Rate(0.0),
                quantiles=(Rate(-0.01), Rate(0.0), Rate(0.01)),
                first_draws=(),
            )

    def test_unordered_quantiles_rejected(self):
        with pytest.raises(ValidationError):
            McReport(
                kind=LOSS,
                expected_growth=Rate(0.02),
                n=10,
                seed=1,
                n_negative=5,
                n_positive=5,
                n_zero=0,
                frac_negative=0.5,
                frac_actual_above_expected=0.5,
                mean_adjustment=Rate(0.0),
                quantiles=(Rate(0.01), Rate(0.0), Rate(-0.01)),
                first_draws=(),
            )

    def test_count_leak_rejected(self):
        with pytest.raises(ValidationError):
            McReport(
                kind=LOSS,
                expected_growth=Rate(0.02),
                n=10,
                seed=1,
                n_negative=5,
                n_positive=4,
                n_zero=0,
                frac_negative=0.5,
                frac_actual_above_expected=0.5,
                mean_adjustment=Rate(0.0),
                quantiles=(Rate(-0.01), Rate(0.0), Rate(0.01)),
                first_draws=(),
            )
