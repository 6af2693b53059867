import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from seqentropy.baseline import EnsembleStats, replica_series, run_ensemble, stride_checkpoints
from seqentropy.engine import cumulative_entropies
from seqentropy.stats import linear_trend, zscore, zscore_series
from seqentropy.synthetic import social_sequence, uniform_sequence


class TestZScore:
    def test_at_mean(self):
        assert zscore(5, 5, 2) == 0.0

    def test_two_below(self):
        assert zscore(4, 6, 1) == -2.0

    def test_zero_deviation(self):
        assert math.isnan(zscore(4, 6, 0))
        assert zscore(6, 6, 0) == 0.0

    def test_arrays(self):
        z = zscore([1.0, 2.0, 3.0], [1.0, 1.0, 1.0], [0.0, 0.0, 2.0])
        assert z[0] == 0.0 and math.isnan(z[1]) and z[2] == 1.0


finite = st.floats(-1e3, 1e3, allow_nan=False)


@given(finite, finite, st.floats(1e-3, 1e3), finite.filter(lambda a: abs(a) > 1e-3), finite)
def test_zscore_equivariance(s, mu, sigma, a, b):
    z = zscore(s, mu, sigma)
    zt = zscore(a * s + b, a * mu + b, abs(a) * sigma)
    assert zt == pytest.approx(math.copysign(1, a) * z, rel=1e-6, abs=1e-6)


def _stats(mean, std):
    n = len(mean)
    return EnsembleStats(np.arange(1, n + 1), np.arange(n), 2, 0, "uniform", "sender",
                         {"S2": np.asarray(mean, float)}, {"S2": np.asarray(std, float)})


class TestZScoreSeries:
    def test_constant_equals_mean(self):
        z = zscore_series(np.full(5, 3.0), _stats([3.0] * 5, [0.5] * 5), "S2")
        assert np.all(z.values == 0.0)
        assert z.defined.all()

    def test_below_mean_is_negative(self):
        z = zscore_series(np.array([1.0, 2.0, 2.5]), _stats([2.0, 3.0, 4.0], [1.0, 0.5, 0.1]), "S2")
        assert np.all(z.values < 0)

    def test_undefined_points(self):
        z = zscore_series(np.array([1.0, 2.0]), _stats([1.0, 3.0], [0.0, 0.0]), "S2")
        assert z.values[0] == 0.0 and math.isnan(z.values[1])
        assert z.defined.tolist() == [True, False]

    def test_mapping_input(self):
        z = zscore_series({"S2": np.array([2.0])}, _stats([1.0], [1.0]), "S2")
        assert z.values.tolist() == [1.0]

    def test_checkpoint_mismatch(self):
        with pytest.raises(ValueError):
            zscore_series(np.zeros(3), _stats([0.0] * 4, [1.0] * 4), "S2")
        with pytest.raises(ValueError, match="checkpoints"):
            zscore_series(np.zeros(2), _stats([0.0] * 2, [1.0] * 2), "S2", checkpoints=[2, 4])

    def test_concentrated_sequence_drifts_negative(self):
        real = social_sequence(30, 3000, n_pairs=30, seed=4)
        cp = stride_checkpoints(len(real), 100)
        stats = run_ensemble(real, 30, "uniform", cp, master_seed=8)
        series = cumulative_entropies(real.senders, real.receivers)
        z = zscore_series({m: v[cp - 1] for m, v in series.items()}, stats, "S2")
        assert z.values[-1] < -3
        assert linear_trend(z.values).slope < 0

    def test_replica_from_same_ensemble_is_unremarkable(self):
        real = uniform_sequence(25, 5000, seed=12)
        cp = stride_checkpoints(len(real), 25)
        stats = run_ensemble(real, 100, "uniform", cp, master_seed=500)
        # a replica drawn from the same scheme but outside the ensemble seeds
        other = replica_series(real, "uniform", 10_000, "sender", cp)
        for m in ("S1", "S2", "S3"):
            z = zscore_series(other, stats, m)
            assert np.mean(np.abs(z.values[z.defined]) < 4) >= 0.99


def normal_equation_fit(x, y):
    """Independent OLS: solve (X^T X) beta = X^T y."""
    X = np.column_stack([np.ones_like(x), x])
    return np.linalg.solve(X.T @ X, X.T @ y)


class TestTrend:
    def test_exact_line(self):
        fit = linear_trend([1, 2, 3, 4])
        assert (fit.slope, fit.intercept, fit.residual_std) == (1.0, 1.0, 0.0)

    def test_constant(self):
        fit = linear_trend([5, 5, 5])
        assert fit.slope == 0.0 and fit.residual_std == 0.0 and fit.intercept == 5.0

    def test_zigzag_against_normal_equations(self):
        y = np.array([0.0, 1.0, 0.0, 1.0])
        intercept, slope = normal_equation_fit(np.arange(4.0), y)
        fit = linear_trend(y)
        assert fit.slope == pytest.approx(slope, abs=1e-12)
        assert fit.intercept == pytest.approx(intercept, abs=1e-12)
        assert fit.slope == pytest.approx(0.2, abs=1e-12)
        resid = y - (intercept + slope * np.arange(4.0))
        assert fit.residual_std == pytest.approx(math.sqrt(resid @ resid / 2), abs=1e-12)

    def test_skips_undefined(self):
        fit = linear_trend([1.0, np.nan, 3.0, 4.0])
        assert fit.slope == pytest.approx(1.0) and fit.n_points == 3

    def test_explicit_x(self):
        fit = linear_trend([2.0, 4.0, 6.0], x=[10, 20, 30])
        assert fit.slope == pytest.approx(0.2)
        assert fit(40) == pytest.approx(8.0)

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            linear_trend([1.0])
        with pytest.raises(ValueError):
            linear_trend([np.nan, 2.0, np.nan])

    def test_degenerate_x(self):
        with pytest.raises(ValueError):
            linear_trend([1.0, 2.0], x=[3, 3])


@given(st.lists(st.integers(-50, 50), min_size=3, max_size=30))
def test_trend_matches_normal_equations(values):
    y = np.array(values, dtype=float)
    x = np.arange(len(y), dtype=float)
    intercept, slope = normal_equation_fit(x, y)
    fit = linear_trend(y)
    assert fit.slope == pytest.approx(slope, abs=1e-8)
    assert fit.intercept == pytest.approx(intercept, abs=1e-7)


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(3, 30))
def test_collinear_points_have_zero_residual(a, b, n):
    fit = linear_trend([a + b * i for i in range(n)])
    assert fit.residual_std == pytest.approx(0.0, abs=1e-9)


@given(st.lists(st.integers(-50, 50), min_size=3, max_size=30))
def test_non_collinear_points_have_positive_residual(values):
    y = np.array(values, dtype=float)
    second_diff = np.diff(y, 2)
    assume(np.any(second_diff != 0))
    assert linear_trend(y).residual_std > 0
