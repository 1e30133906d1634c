import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from scsa.metrics import (
    SNR_CAP_DB,
    MetricRecord,
    msnr_from_errors,
    msnr_rec,
    mse,
    snr_rec,
    srr,
    success_rate,
)
from scsa.problems import RNG_ALGORITHM, gen_problem, load_problem, rng_for, save_problem


class TestGenProblem:
    @pytest.mark.parametrize("dist", ["gaussian", "rademacher"])
    @pytest.mark.parametrize("sigma_w", [0.0, 1e-2])
    def test_invariants(self, dist, sigma_w):
        p = gen_problem(30, 60, 7, dist=dist, sigma_w=sigma_w, seed=3)
        assert p.A.shape == (30, 60) and p.b.shape == (30,)
        assert np.max(np.abs(np.linalg.norm(p.A, axis=0) - 1)) <= 1e-12
        assert np.count_nonzero(p.x_true) == 7
        if sigma_w > 0:
            assert abs(np.linalg.norm(p.x_true) - math.sqrt(7)) <= 1e-12
        else:
            np.testing.assert_array_equal(p.b, p.A @ p.x_true)

    def test_rademacher_amplitudes(self):
        p = gen_problem(30, 60, 9, dist="rademacher", sigma_w=1e-2, seed=1)
        np.testing.assert_allclose(np.abs(p.x_true[p.support]), 1.0, rtol=0, atol=1e-15)

    def test_noise_level(self):
        p = gen_problem(400, 800, 5, sigma_w=0.1, seed=2)
        w = p.b - p.A @ p.x_true
        assert np.std(w) == pytest.approx(0.1, rel=0.15)

    def test_deterministic(self):
        a = gen_problem(20, 40, 3, sigma_w=1e-3, seed=42)
        b = gen_problem(20, 40, 3, sigma_w=1e-3, seed=42)
        for f in ("A", "b", "x_true"):
            assert getattr(a, f).tobytes() == getattr(b, f).tobytes()

    def test_seeds_differ(self):
        a = gen_problem(20, 40, 3, seed=1)
        b = gen_problem(20, 40, 3, seed=2)
        assert not np.array_equal(a.A, b.A)

    def test_column_normalization_idempotent(self):
        A = gen_problem(20, 40, 3, seed=5).A
        np.testing.assert_allclose(A / np.linalg.norm(A, axis=0), A, rtol=0, atol=1e-15)

    def test_support_uniform(self):
        counts = np.zeros(20)
        for seed in range(2000):
            counts[gen_problem(10, 20, 2, seed=seed).support] += 1
        # each index expects 200 hits; a 5-sigma band is about +-70
        assert counts.min() > 130 and counts.max() < 270

    @pytest.mark.parametrize("args", [(10, 20, 0), (10, 20, 10), (20, 10, 3), (10, 10, 3)])
    def test_dimensions(self, args):
        with pytest.raises(ValueError):
            gen_problem(*args)

    def test_bad_dist_and_noise(self):
        with pytest.raises(ValueError):
            gen_problem(10, 20, 2, dist="laplace")
        with pytest.raises(ValueError):
            gen_problem(10, 20, 2, sigma_w=-1.0)
        with pytest.raises(ValueError):
            rng_for(-1)

    def test_roundtrip(self, tmp_path):
        p = gen_problem(12, 24, 3, dist="rademacher", sigma_w=1e-3, seed=9)
        save_problem(p, tmp_path / "prob")
        meta = json.loads((tmp_path / "prob" / "meta.json").read_text())
        assert meta == {"n": 12, "m": 24, "s": 3, "dist": "rademacher", "sigma_w": 1e-3,
                        "seed": 9, "rng": RNG_ALGORITHM}
        q = load_problem(tmp_path / "prob")
        for f in ("A", "b", "x_true"):
            np.testing.assert_array_equal(getattr(p, f), getattr(q, f))
        assert (q.s, q.dist, q.sigma_w, q.seed) == (3, "rademacher", 1e-3, 9)


class TestSnr:
    def test_exact_capped(self):
        x = np.array([1.0, -2.0])
        assert snr_rec(x, x) == SNR_CAP_DB == 300

    def test_twenty_db(self):
        x = np.array([3.0, 4.0])
        assert snr_rec(x, x + np.array([0.3, 0.4])) == pytest.approx(20.0, abs=1e-12)

    def test_zero_estimate(self):
        assert snr_rec(np.array([1.0, 2.0]), np.zeros(2)) == pytest.approx(0.0, abs=1e-14)

    def test_zero_truth(self):
        with pytest.raises(ValueError):
            snr_rec(np.zeros(2), np.ones(2))

    @given(st.floats(1e-6, 1e3), st.floats(1e-6, 1e3))
    def test_strictly_decreasing(self, e1, e2):
        x = np.array([1.0, 0.0, -1.0])
        d = np.array([0.3, -0.2, 0.5]) / np.linalg.norm([0.3, -0.2, 0.5])
        if e1 < e2 and snr_rec(x, x + e1 * d) < SNR_CAP_DB:
            assert snr_rec(x, x + e1 * d) > snr_rec(x, x + e2 * d)


class TestMsnr:
    def test_hand_median(self):
        assert msnr_from_errors(9.0, [1.0, 4.0, 9.0]) == pytest.approx(3.5218251811136247,
                                                                         abs=1e-12)

    def test_even_median(self):
        assert msnr_from_errors(10.0, [1.0, 3.0]) == pytest.approx(10 * math.log10(5))

    def test_all_exact(self):
        x = [np.array([1.0, 2.0])] * 3
        assert msnr_rec(x, x) == 300

    def test_single_trial(self):
        x, y = np.array([3.0, 4.0]), np.array([3.3, 4.4])
        assert msnr_rec([x], [y]) == pytest.approx(snr_rec(x, y), abs=1e-12)

    def test_empty(self):
        with pytest.raises(ValueError):
            msnr_rec([], [])
        with pytest.raises(ValueError):
            msnr_from_errors(1.0, [])


class TestSrr:
    def test_exact(self):
        x = np.array([0.0, 1.0, 0.0, -2.0])
        assert srr(x, x, 2)

    def test_zero_estimate(self):
        assert not srr(np.array([1.0, 0.0]), np.zeros(2), 1)

    def test_swapped_entry(self):
        x = np.array([0.0, 1.0, 0.0, -2.0])
        y = np.array([1.5, 0.5, 0.0, -2.0])
        assert not srr(x, y, 2)

    def test_ties_lower_index(self):
        x = np.array([1.0, 0.0, 0.0])
        assert srr(x, np.array([0.5, 0.5, 0.5]), 1)
        assert not srr(np.array([0.0, 1.0, 0.0]), np.array([0.5, 0.5, 0.5]), 1)

    @given(st.floats(1e-3, 1e3), st.integers(0, 1000))
    def test_scale_invariant(self, c, seed):
        r = np.random.default_rng(seed)
        x = np.zeros(10)
        x[r.choice(10, 3, replace=False)] = 1.0
        y = x + 0.3 * r.standard_normal(10)
        assert srr(x, y, 3) == srr(x, c * y, 3)


def record(snr, err=0.0):
    return MetricRecord("e", "a", 1, 2, 1, 0.0, 0.1, 0, 0, "ok", snr, snr >= 60, True, err, 1, 0.0)


class TestAggregates:
    def test_success_rate(self):
        assert success_rate([record(300)] * 4) == 1.0
        assert success_rate([59.0, 61.0, 59.0, 61.0]) == 0.5
        assert success_rate([60.0]) == 1.0

    def test_mse(self):
        assert mse([1.0, 3.0]) == 2.0
        assert mse([record(1, 1.0), record(1, 3.0)]) == 2.0

    def test_empty(self):
        with pytest.raises(ValueError):
            success_rate([])
        with pytest.raises(ValueError):
            mse([])

    def test_columns(self):
        assert ",".join(MetricRecord.columns()) == (
            "experiment,algorithm,n,m,s,sigma_w,c,trial,seed,status,snr_db,success,"
            "support_exact,sq_error,iters,wall_time_ms")
