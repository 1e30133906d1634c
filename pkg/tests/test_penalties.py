import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from scsa.penalties import (
    EXPONENTIAL,
    DeltaApproximation,
    PenaltyParams,
    big_f,
    f_sigma,
    log_penalty,
    mm_weights,
)


class TestFSigma:
    def test_zero(self):
        assert f_sigma(0.0, 3.0) == 0.0

    def test_half(self):
        assert f_sigma(2.0 * math.log(2), 2.0) == pytest.approx(0.5, abs=1e-15)

    def test_saturation(self):
        assert abs(f_sigma(100.0, 1.0) - 1.0) <= 1e-15

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            f_sigma(-1.0, 1.0)

    def test_bad_sigma(self):
        with pytest.raises(ValueError):
            f_sigma(1.0, 0.0)

    def test_pointwise_l0_limit(self):
        for x in (1e-3, 0.5, 7.0):
            assert f_sigma(x, x / math.log(1000)) >= 0.999 - 1e-12

    def test_concavity(self, rng):
        for _ in range(1000):
            a, b, c = np.sort(rng.uniform(0, 10, 3))
            if c == a:
                continue
            t = (b - a) / (c - a)
            lhs = f_sigma(b, 1.3)
            rhs = (1 - t) * f_sigma(a, 1.3) + t * f_sigma(c, 1.3)
            assert lhs >= rhs - 1e-12


class TestBigF:
    def test_zero_vector(self):
        assert big_f(np.zeros(5), 1.0) == 0.0

    def test_two_halves(self):
        s = 0.7
        assert big_f([s * math.log(2), -s * math.log(2)], s) == pytest.approx(1.0, abs=1e-15)

    def test_l1_limit(self, rng):
        for _ in range(100):
            x = rng.standard_normal(20) * rng.uniform(0.1, 10)
            sigma = 1e4 * np.max(np.abs(x))
            l1 = np.abs(x).sum()
            assert abs(sigma * big_f(x, sigma) - l1) / l1 <= 1e-3


class TestMMWeights:
    def test_unit(self):
        np.testing.assert_array_equal(mm_weights(np.zeros(3), 1.0), np.ones(3))

    def test_values(self):
        np.testing.assert_allclose(mm_weights([0.0, math.log(2)], 1.0), [1.0, 0.5], rtol=1e-15)

    def test_large_sigma_uniform(self):
        w = mm_weights(np.array([0.0, 1.0, 5.0]), 1e9)
        np.testing.assert_allclose(w * 1e9, 1.0, rtol=1e-8)

    def test_positive_under_underflow(self):
        assert mm_weights(np.array([1e6]), 1e-3)[0] > 0

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            mm_weights([-1.0], 1.0)

    # beyond a few sigma, F is within rounding of its saturation value and a
    # central difference no longer resolves the weight to 1e-6
    @given(st.lists(st.floats(0, 5), min_size=1, max_size=8), st.floats(0.1, 10))
    def test_gradient_matches_finite_differences(self, ratios, sigma):
        x = np.array(ratios) * sigma
        h = 1e-6 * sigma
        w = mm_weights(x, sigma)
        for i in range(x.size):
            xp, xm = x.copy(), x.copy()
            xp[i] += h
            xm[i] = max(x[i] - h, 0.0)
            fd = (big_f(xp, sigma) - big_f(xm, sigma)) / (xp[i] - xm[i])
            assert fd == pytest.approx(w[i], rel=1e-6, abs=1e-12)

    @given(st.lists(st.floats(0, 1e3), min_size=1, max_size=8), st.floats(1e-3, 1e3))
    def test_range(self, xs, sigma):
        w = mm_weights(np.array(xs), sigma)
        assert np.all(w > 0) and np.all(w <= 1 / sigma)


class TestLogPenalty:
    def test_zero(self):
        assert log_penalty(np.zeros(4), 1.0) == 0.0

    def test_e(self):
        assert log_penalty([math.e - 1], 1.0) == pytest.approx(1.0, abs=1e-15)

    def test_direct_value(self):
        assert log_penalty([1.0, 1.0], 0.01) == pytest.approx(0.019900661706336184, rel=1e-12)

    def test_beta(self):
        with pytest.raises(ValueError):
            log_penalty([1.0], 0.0)


class TestInterface:
    def test_exponential_family(self):
        assert isinstance(EXPONENTIAL, DeltaApproximation)
        assert EXPONENTIAL.gamma == 1.0
        assert EXPONENTIAL.derivative(np.array([0.0]))[0] == pytest.approx(EXPONENTIAL.gamma)

    def test_scaled_forms(self):
        x = np.array([0.0, 0.3, 2.0])
        np.testing.assert_allclose(EXPONENTIAL.scaled_value(x, 0.5), f_sigma(x, 0.5))
        np.testing.assert_allclose(EXPONENTIAL.scaled_derivative(x, 0.5), mm_weights(x, 0.5))

    def test_params(self):
        assert PenaltyParams(0.0).gamma == 1.0
        with pytest.raises(ValueError):
            PenaltyParams(-1.0)
        with pytest.raises(ValueError):
            PenaltyParams(1.0, gamma=0.0)
