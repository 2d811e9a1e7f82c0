import numpy as np
import pytest

from tvrec.ensembles import gaussian_matrix
from tvrec.gradients import gen_gradient_sparse, grad_matrix
from tvrec.solvers import (MAX_ITER, OPTIMAL, SolverOptions, operator_norm,
                           tv_lp_oracle, tv_primal_dual, tv_stack_norm)

TIGHT = SolverOptions(max_iterations=400_000, tolerance=1e-9)


def random_instance(i, n_max=12):
    rng = np.random.default_rng(10_000 + i)
    n = int(rng.integers(4, n_max + 1))
    m = int(rng.integers(2, n + 1))
    s = int(rng.integers(0, min(4, n)))
    x0 = gen_gradient_sparse(n, s, 20_000 + i)
    a = gaussian_matrix(m, n, 30_000 + i).matrix
    return a, x0


class TestLpOracle:
    def test_identity_returns_y(self):
        y = np.random.default_rng(0).standard_normal(6)
        res = tv_lp_oracle(np.eye(6), y)
        assert res.status == OPTIMAL
        assert np.allclose(res.x_hat, y, atol=1e-9)
        assert res.residual <= 1e-9

    def test_zero_measurements_zero_tv(self):
        a = gaussian_matrix(3, 8, 1).matrix
        res = tv_lp_oracle(a, np.zeros(3))
        assert res.status == OPTIMAL
        assert res.objective == pytest.approx(0.0, abs=1e-9)

    def test_infeasible_system(self):
        res = tv_lp_oracle(np.zeros((2, 5)), np.array([1.0, 0.0]))
        assert res.status == "Infeasible"
        assert res.x_hat is None

    def test_overdetermined_consistent_system(self):
        x0 = gen_gradient_sparse(6, 2, 77)
        a = gaussian_matrix(10, 6, 78).matrix
        res = tv_lp_oracle(a, a @ x0)
        assert res.status == OPTIMAL
        assert np.linalg.norm(res.x_hat - x0) <= 1e-8

    def test_recovery_rate_n12_s2_m8(self):
        # measured success probability of this regime is ~0.92 (500-trial
        # Monte Carlo); the gate sits below it with room for seed noise
        hits = 0
        for t in range(100):
            x0 = gen_gradient_sparse(12, 2, 500 + t)
            a = gaussian_matrix(8, 12, 900 + t).matrix
            res = tv_lp_oracle(a, a @ x0)
            hits += np.linalg.norm(res.x_hat - x0) <= 1e-6
        assert hits >= 88


class TestPrimalDual:
    def test_identity_point_feasible_set(self):
        y = np.array([0.3, -1.2, 0.8, 0.8])
        res = tv_primal_dual(np.eye(4), y, 0.0)
        assert res.status == OPTIMAL
        assert np.linalg.norm(res.x_hat - y) <= 1e-6

    def test_large_eps_gives_zero_objective(self):
        a = gaussian_matrix(3, 6, 2).matrix
        y = a @ np.random.default_rng(3).standard_normal(6)
        res = tv_primal_dual(a, y, np.linalg.norm(y) * 1.001)
        assert res.objective <= 1e-8

    def test_eps_validation(self):
        with pytest.raises(ValueError):
            tv_primal_dual(np.eye(3), np.zeros(3), -0.1)

    def test_matches_lp_oracle(self):
        for i in range(40):
            a, x0 = random_instance(i)
            y = a @ x0
            lp = tv_lp_oracle(a, y)
            pd = tv_primal_dual(a, y, 0.0, TIGHT)
            assert abs(lp.objective - pd.objective) <= 1e-6
            assert pd.residual <= 1e-7

    def test_feasibility_invariant(self):
        for i, eps in [(3, 0.0), (5, 0.1), (9, 0.5)]:
            a, x0 = random_instance(i)
            y = a @ x0
            res = tv_primal_dual(a, y, eps, TIGHT)
            if res.status == OPTIMAL:
                assert res.residual <= eps + 1e-7

    def test_objective_monotone_in_eps(self):
        a, x0 = random_instance(11)
        y = a @ x0
        objs = [tv_primal_dual(a, y, eps, TIGHT).objective
                for eps in (0.0, 0.05, 0.2, 1.0)]
        for lo, hi in zip(objs, objs[1:]):
            assert hi <= lo + 1e-7

    def test_scale_equivariance(self):
        a, x0 = random_instance(17)
        y = a @ x0
        base = tv_primal_dual(a, y, 0.1, TIGHT)
        for c in (2.0, 7.5):
            scaled = tv_primal_dual(a, c * y, c * 0.1, TIGHT)
            assert scaled.objective == pytest.approx(c * base.objective, abs=1e-6 * c)

    def test_deterministic_bit_for_bit(self):
        a, x0 = random_instance(23)
        y = a @ x0
        r1 = tv_primal_dual(a, y, 0.0)
        r2 = tv_primal_dual(a, y, 0.0)
        assert np.array_equal(r1.x_hat, r2.x_hat)
        assert r1.objective == r2.objective
        assert r1.iterations == r2.iterations

    def test_max_iter_status(self):
        a, x0 = random_instance(29)
        res = tv_primal_dual(a, a @ x0, 0.0, SolverOptions(max_iterations=5))
        assert res.status == MAX_ITER
        assert res.iterations == 5


class TestOperatorNorm:
    def test_identity(self):
        assert operator_norm(np.eye(5)) == pytest.approx(1.0, abs=1e-6)

    def test_grad_only_stack(self):
        # A = 0 leaves the pure gradient operator; its norm is 2 sin((n-1)pi/2n)
        for n in (3, 8, 20):
            exact = 2.0 * np.sin((n - 1) * np.pi / (2 * n))
            est = tv_stack_norm(np.zeros((1, n)))
            assert est == pytest.approx(exact, abs=2e-6)
            assert est <= 2.0 + 1e-6

    def test_matches_dense_svd_on_random_stacks(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            a = rng.standard_normal((20, 12))
            stack = np.vstack([grad_matrix(12), a])
            dense = np.linalg.svd(stack, compute_uv=False)[0]
            assert tv_stack_norm(a) == pytest.approx(dense, abs=1e-5 * dense)

    def test_zero_operator(self):
        assert operator_norm(np.zeros((3, 3))) == 0.0
