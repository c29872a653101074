"""
Unit tests for asymptotic fitting

Author: Mohammed Ismail AbdElmageid
"""
import io
import math
import pytest
from fractions import Fraction

from core.config import ToolkitConfig
from core.exceptions import ConfigurationError
from core.fan import OrbifoldWeights
from core.points import Variant
from counting.count_manager import CountRun
from counting.fitting import (
    FitComparison,
    correction_exponent,
    count_and_fit,
    doubling_ratios,
    fit_counts,
    write_report_csv,
)
from series.constants import coprime_pair_oracle

BOUNDS = [2 ** k for k in range(4, 17)]


class TestFitCounts:
    """Test least squares on synthetic counts"""

    def test_log_power(self):
        """Test N = 7 B log B recovers c = 7 with b = 2"""
        counts = [7 * B * math.log(B) for B in BOUNDS]
        fit = fit_counts(BOUNDS, counts, 2)
        assert fit.c == pytest.approx(7, rel=1e-8)
        assert max(abs(r) for r in fit.residuals) < 1e-8

    def test_log_power_with_correction(self):
        """Test N = 7 B log B + 3 B recovers both coefficients"""
        counts = [7 * B * math.log(B) + 3 * B for B in BOUNDS]
        fit = fit_counts(BOUNDS, counts, 2, correction=True)
        assert fit.c == pytest.approx(7, rel=1e-6)
        assert fit.c2 == pytest.approx(3, rel=1e-5)
        assert fit.correction == "B(log B)^0"

    def test_power_saving_correction(self):
        """Test N = 5 B + 2 B^(1/2) with b = 1"""
        counts = [5 * B + 2 * math.sqrt(B) for B in BOUNDS]
        fit = fit_counts(BOUNDS, counts, 1, correction=True, theta=0.5)
        assert fit.c == pytest.approx(5, rel=1e-6)
        assert fit.c2 == pytest.approx(2, rel=1e-4)

    def test_min_bound_drops_points(self):
        """Test checkpoints below the minimum bound are ignored"""
        counts = [5 * B for B in BOUNDS]
        fit = fit_counts(BOUNDS, counts, 1, min_bound=1000)
        assert min(fit.bounds) >= 1000

    def test_too_few_points(self):
        """Test a fit with fewer checkpoints than parameters plus one is rejected"""
        with pytest.raises(ConfigurationError):
            fit_counts([100], [500], 1)
        with pytest.raises(ConfigurationError):
            fit_counts([100, 200], [500, 1000], 1, correction=True)

    def test_ill_conditioned(self):
        """Test a non-finite condition number counts as ill conditioned"""
        fit = fit_counts(BOUNDS, [5 * B for B in BOUNDS], 1)
        assert not fit.ill_conditioned(1e12)
        fit.condition_number = math.inf
        assert fit.ill_conditioned(1e12)


class TestCorrectionExponent:
    """Test the secondary-term exponent"""

    def test_squarefull(self):
        """Test m=(2,2) gives 1 - (1/2 - 1/3) = 5/6"""
        assert correction_exponent(OrbifoldWeights((2, 2))) == Fraction(5, 6)

    def test_minimum_over_weights(self):
        """Test the largest weight sets the exponent and infinite weights are skipped"""
        assert correction_exponent(OrbifoldWeights((2, 3, float("inf")))) == Fraction(11, 12)

    def test_all_infinite(self):
        assert correction_exponent(OrbifoldWeights((float("inf"),))) == Fraction(1, 2)


class TestDoublingRatios:
    """Test N(B) / N(B/2) diagnostics"""

    def test_linear_counts(self):
        """Test linear growth gives ratio 2 and skips B <= 1"""
        run = CountRun("P1", "1,1", "campana", Fraction(8), [Fraction(1), Fraction(2), Fraction(4), Fraction(8)],
                       [1, 2, 4, 8], 0.0)
        ratios = doubling_ratios(run)
        assert [r.bound for r in ratios] == [4.0, 8.0]
        assert all(r.observed == 2 and r.expected == 2 for r in ratios)
        assert all(abs(r.deviation) < 1e-12 for r in ratios)

    def test_log_power_expected(self):
        """Test b = 2 expects 2 log B / log(B/2)"""
        run = CountRun("P1xP1", "2,2,2,2", "campana", Fraction(16), [Fraction(8), Fraction(16)], [10, 25], 0.0,
                       picard_rank=2)
        (ratio,) = doubling_ratios(run)
        assert ratio.expected == pytest.approx(2 * math.log(16) / math.log(8))
        assert ratio.observed == 2.5


class TestCountAndFit:
    """Test the full count, fit and comparison path"""

    def test_rational_points_on_p1(self, p1):
        """Test the fitted constant for P1 with m=1 is close to 12/pi^2"""
        config = ToolkitConfig(workers=1, checkpoints=8, fit_min_bound=100.0)
        c_pred = float(coprime_pair_oracle())
        run, comparison = count_and_fit(p1, OrbifoldWeights((1, 1)), Variant.CAMPANA, 20000, c_pred, config)
        assert run.final_count > 0
        assert comparison.ratio == pytest.approx(1, abs=0.06)

    def test_report_csv(self):
        """Test the report CSV has the four fields"""
        fit = fit_counts(BOUNDS, [5 * B for B in BOUNDS], 1)
        stream = io.StringIO()
        write_report_csv(FitComparison(fit, 4.0), stream=stream)
        header, row = stream.getvalue().splitlines()
        assert header == "c_fit,c_fit_err,c_pred,ratio"
        assert row.endswith(",4,1.250000")
