import numpy as np
import pytest

from helpers import S, T, block_instance, rel_err
from slicescale import (
    ScalingVectors,
    SolverError,
    SolverOptions,
    Status,
    apply_scaling,
    build_frame,
    generate_feasible,
    gradient_hessian_reduced,
    newton_scale,
    objective,
    residual,
    same_zero_pattern,
    solve_kkt_step,
    verify_certificate,
)
from slicescale.tensor import all_slice_sums


def fd_gradient(fun, c, h):
    g = np.zeros_like(c)
    for j in range(c.size):
        e = np.zeros_like(c)
        e[j] = h
        g[j] = (fun(c + e) - fun(c - e)) / (2 * h)
    return g


class TestObjective:
    def test_examples(self):
        assert objective(T(np.ones((2, 2))), np.zeros(4)) == 4
        x = ScalingVectors(([np.log(2), 0], [0, 0]))
        assert objective(T(np.ones((2, 2))), x) == pytest.approx(6, rel=1e-15)
        assert objective(T([[0, 1], [1, 1]]), np.zeros(4)) == 3

    def test_shifted_branch_matches_direct(self):
        B = T([[1, 2], [3, 4]])
        y = np.array([200.0, 190.0, 180.0, 175.0])
        direct = np.sum(B.to_dense() * np.exp(np.add.outer(y[:2], y[2:])))
        assert objective(B, y) == pytest.approx(direct, rel=1e-13)


class TestDerivatives:
    @pytest.mark.parametrize("seed", range(5))
    def test_gradient_and_hessian_match_finite_differences(self, seed):
        B, s = generate_feasible((3, 2, 3) if seed % 2 else (3, 4), 0.7, seed)
        f = build_frame(B, s)
        Q = f.basis_Vperp
        rng = np.random.default_rng(seed)
        for _ in range(3):
            c = rng.normal(scale=0.5, size=f.p)
            g, H = gradient_hessian_reduced(B, s, f, c)
            g_fd = fd_gradient(lambda cc: objective(B, Q @ cc), c, 1e-5)
            assert np.max(np.abs(g - g_fd)) <= 1e-6 * np.max(np.abs(g))
            H_fd = np.column_stack([
                fd_gradient(lambda cc, j=j: gradient_hessian_reduced(B, s, f, cc)[0][j], c, 1e-5)
                for j in range(f.p)
            ]).T
            assert np.max(np.abs(H - H_fd)) <= 1e-5 * np.max(np.abs(H))

    @pytest.mark.parametrize("seed", range(4))
    def test_first_order_condition_at_solution(self, seed):
        B, s = generate_feasible((3, 4), 0.6, 20 + seed)
        f = build_frame(B, s)
        res = newton_scale(B, s, frame=f)
        # the reported scaling is a Vperp point plus a constant shift on mode 0
        shift = np.zeros((f.n, 1))
        shift[:B.dims[0]] = 1.0
        coef, *_ = np.linalg.lstsq(np.hstack([f.basis_Vperp, shift]), res.scaling.stacked(),
                                   rcond=None)
        g, _ = gradient_hessian_reduced(B, s, f, coef[:-1])
        q = f.basis_Vperp.T @ s.stacked()
        assert np.max(np.abs(g - q)) <= 1e-9 * np.max(np.abs(s.stacked()))

    @pytest.mark.parametrize("seed", range(5))
    def test_hessian_positive_definite(self, seed):
        rng = np.random.default_rng(seed)
        B, s = block_instance(rng, (3, 3, 2))
        f = build_frame(B, s)
        _, H = gradient_hessian_reduced(B, s, f, rng.normal(size=f.p))
        assert np.min(np.linalg.eigvalsh(H)) > 0


class TestKKTStep:
    def test_identity(self):
        np.testing.assert_allclose(solve_kkt_step(np.eye(3), [1.0, 0, 0]), [-1, 0, 0])

    def test_diagonal(self):
        np.testing.assert_allclose(solve_kkt_step(np.diag([2.0, 4.0]), [2.0, 4.0]), [-1, -1])

    def test_random_spd(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            M = rng.normal(size=(5, 5))
            H = M @ M.T + 0.1 * np.eye(5)
            g = rng.normal(size=5)
            d = solve_kkt_step(H, g)
            assert np.linalg.norm(H @ d + g) <= 1e-10 * np.linalg.norm(g)

    def test_singular_psd_retried_with_ridge(self):
        d = solve_kkt_step(np.diag([1.0, 0.0]), [1.0, 0.0])
        np.testing.assert_allclose(d, [-1, 0], atol=1e-12)

    def test_indefinite_fails(self):
        with pytest.raises(SolverError):
            solve_kkt_step(np.diag([1.0, -1.0]), [1.0, 1.0])

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            solve_kkt_step(np.eye(2), [1.0, 2.0, 3.0])


class TestNewtonExamples:
    def test_flat_matrix(self):
        res = newton_scale(T(np.ones((2, 2))), S([1, 1], [1, 1]))
        assert res.status is Status.CONVERGED and res.converged
        np.testing.assert_allclose(res.scaled_tensor.to_dense(), 0.5, rtol=1e-12)
        assert res.residual <= 1e-12

    def test_rank_one(self):
        res = newton_scale(T(np.ones((2, 2))), S([1, 2], [2, 1]))
        np.testing.assert_allclose(res.scaled_tensor.to_dense(), [[2 / 3, 1 / 3], [4 / 3, 2 / 3]],
                                   rtol=1e-10)

    def test_cube(self):
        res = newton_scale(T(np.ones((2, 2, 2))), S([4, 4], [4, 4], [4, 4]))
        np.testing.assert_allclose(res.scaled_tensor.to_dense(), 1.0, rtol=1e-12)

    def test_infeasible_diverges_with_certificate(self):
        B, s = T([[0, 1], [1, 1]]), S([1, 1], [1.5, 0.5])
        res = newton_scale(B, s)
        assert res.status is Status.DIVERGED
        assert not res.certificate.feasible
        assert verify_certificate(B, s, res.certificate.certificate)


class TestNewtonProperties:
    @pytest.mark.parametrize("seed", range(8))
    def test_postconditions(self, seed):
        B, s = generate_feasible((3, 3, 3) if seed % 2 else (4, 5), 0.6, 40 + seed)
        res = newton_scale(B, s)
        assert res.converged and res.residual <= 1e-10
        A = res.scaled_tensor
        assert same_zero_pattern(A, B)
        # A really is the diagonal scaling of B by the reported vectors
        assert rel_err(apply_scaling(B, res.scaling).values, A.values) <= 1e-12
        np.testing.assert_allclose(res.multipliers, res.multipliers[0], rtol=1e-9)
        for got, want in zip(all_slice_sums(A), s.vectors):
            assert rel_err(got, want) <= 1e-10

    @pytest.mark.parametrize("seed", range(5))
    def test_objective_trace_monotone(self, seed):
        # on U the linear term s.y vanishes, so Armijo descent shows up in f itself
        B, s = generate_feasible((4, 4), 0.6, seed, value_spread=2.0)
        res = newton_scale(B, s)
        assert res.converged
        assert len(res.objective_trace) == res.iterations + 1
        f = np.array([e.objective for e in res.objective_trace])
        assert np.all(np.diff(f) <= 1e-12 * f[0])

    def test_block_instance_start_independent(self):
        rng = np.random.default_rng(3)
        B, s = block_instance(rng, (3, 4, 3))
        f = build_frame(B, s)
        assert f.v > 0
        a = newton_scale(B, s, seed=1, frame=f).scaled_tensor
        b = newton_scale(B, s, seed=2, frame=f).scaled_tensor
        assert rel_err(a.values, b.values) <= 1e-8

    def test_target_scale_invariance(self):
        B, s = generate_feasible((3, 4), 0.8, 12)
        a = newton_scale(B, s).scaled_tensor
        b = newton_scale(B, s.scaled(1e3)).scaled_tensor
        assert rel_err(b.values, 1e3 * a.values) <= 1e-9

    def test_max_iters(self):
        B, s = generate_feasible((5, 5), 1.0, 3, value_spread=3.0)
        res = newton_scale(B, s, SolverOptions(max_iters=1))
        assert res.status is Status.MAX_ITERS and res.iterations == 1

    def test_residual_matches(self):
        B, s = generate_feasible((3, 5), 0.7, 8)
        res = newton_scale(B, s)
        assert res.residual == residual(res.scaled_tensor, s)

    def test_bad_start_length(self):
        with pytest.raises(ValueError):
            newton_scale(T(np.ones((2, 2))), S([1, 1], [1, 1]), start=np.zeros(7))
