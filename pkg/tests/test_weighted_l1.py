import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from scsa.exceptions import InfeasibleError
from scsa.weighted_l1 import (
    WeightedL1Problem,
    WeightedL1Solver,
    solve_weighted_l1,
    split_positive_orthant,
)

from conftest import gaussian_matrix
from oracles import weighted_l1_linprog, weighted_l1_vertices


class TestSplit:
    def test_definition(self):
        xp, xm = split_positive_orthant([1.0, -2.0, 0.0])
        np.testing.assert_array_equal(xp, [1, 0, 0])
        np.testing.assert_array_equal(xm, [0, 2, 0])

    def test_nonnegative_input(self):
        _, xm = split_positive_orthant([0.0, 3.0])
        assert not xm.any()

    @given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=20))
    def test_recombination(self, xs):
        x = np.array(xs)
        xp, xm = split_positive_orthant(x)
        np.testing.assert_array_equal(xp - xm, x)
        assert np.all(xp * xm == 0) and np.all(xp >= 0) and np.all(xm >= 0)


class TestSolve:
    @pytest.mark.parametrize("method", ["ipm", "admm"])
    def test_single_constraint(self, method):
        x = solve_weighted_l1([[1.0, 2.0]], [2.0], method=method)
        np.testing.assert_allclose(x, [0.0, 1.0], atol=1e-8)

    @pytest.mark.parametrize("method", ["ipm", "admm"])
    def test_single_constraint_weighted(self, method):
        x = solve_weighted_l1([[1.0, 2.0]], [2.0], w=[1.0, 10.0], method=method)
        np.testing.assert_allclose(x, [2.0, 0.0], atol=1e-8)

    @pytest.mark.parametrize("method", ["ipm", "admm"])
    def test_against_linprog(self, method):
        A = gaussian_matrix(10, 20, 4)
        b = np.random.default_rng(5).standard_normal(10)
        x = solve_weighted_l1(A, b, method=method)
        ref, _ = weighted_l1_linprog(A, b, np.ones(20))
        assert abs(np.abs(x).sum() - ref) <= 1e-6 * (1 + ref)
        assert np.linalg.norm(A @ x - b) <= 1e-8 * max(1, np.linalg.norm(b))

    def test_zero_rhs(self):
        x = solve_weighted_l1(np.eye(2, 3), np.zeros(2))
        assert not x.any()

    def test_certified_solution(self):
        A = gaussian_matrix(40, 80, 9)
        x_true = np.zeros(80)
        x_true[[3, 17, 50]] = [1.0, -2.0, 0.5]
        sol = WeightedL1Solver(A).solve(A @ x_true)
        assert sol.certified
        np.testing.assert_allclose(sol.x, x_true, atol=1e-9)

    def test_weight_scale_invariance(self, rng):
        A = gaussian_matrix(8, 16, 2)
        b = rng.standard_normal(8)
        w = rng.uniform(0.5, 2.0, 16)
        x1 = solve_weighted_l1(A, b, w)
        x2 = solve_weighted_l1(A, b, 1e3 * w)
        np.testing.assert_allclose(x1, x2, atol=1e-8)

    def test_no_split_overlap(self, rng):
        A = gaussian_matrix(12, 30, 3)
        x = solve_weighted_l1(A, rng.standard_normal(12), rng.uniform(0.1, 1, 30))
        xp, xm = split_positive_orthant(x)
        assert np.all(np.minimum(xp, xm) <= 1e-9)

    @given(st.integers(0, 10_000), st.integers(2, 6), st.integers(0, 4))
    def test_vertex_enumeration(self, seed, n, extra):
        m = min(n + 1 + extra, 10)
        r = np.random.default_rng(seed)
        A = r.standard_normal((n, m))
        b = r.standard_normal(n)
        w = r.uniform(0.1, 3.0, m)
        x = solve_weighted_l1(A, b, w)
        ref = weighted_l1_vertices(A, b, w)
        assert abs(np.sum(w * np.abs(x)) - ref) <= 1e-8 * (1 + ref)
        assert np.linalg.norm(A @ x - b) <= 1e-8 * max(1, np.linalg.norm(b))

    def test_solver_reuse_tracks_linprog(self, rng):
        A = gaussian_matrix(30, 60, 11)
        solver = WeightedL1Solver(A)
        for _ in range(5):
            b = rng.standard_normal(30)
            w = np.exp(-rng.uniform(0, 20, 60))
            sol = solver.solve(b, w)
            ref, _ = weighted_l1_linprog(A, b, w)
            assert abs(sol.objective - ref) <= 1e-6 * (1 + ref)


class TestValidation:
    def test_nonpositive_weights(self):
        with pytest.raises(ValueError):
            WeightedL1Problem(np.eye(2, 3), np.ones(2), np.array([1.0, 0.0, 1.0]))

    def test_bad_method(self):
        with pytest.raises(ValueError):
            WeightedL1Solver(np.eye(2, 3), method="simplex")

    def test_rank_deficient_rows(self):
        with pytest.raises(InfeasibleError):
            WeightedL1Solver(np.array([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0]]))

    def test_objective(self):
        p = WeightedL1Problem(np.eye(2, 3), np.ones(2), np.array([1.0, 2.0, 3.0]))
        assert p.objective([1.0, -1.0, 0.0]) == 3.0
