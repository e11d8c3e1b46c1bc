import numpy as np
import pytest

from coggen.core_math import svd_small
from coggen.errors import BadInputs, DimMismatch, StepSizeTooLarge
from coggen.theory import (
    LinearProblem,
    StageLinearReport,
    StageWeighting,
    acceleration_bound,
    acceleration_experiment,
    diagonal_curriculum_problem,
    geometric_bound_factor,
    landweber_trajectory,
    noise_imprint_bounds,
    pl_constants,
    random_quadratic,
    run_verification,
    simulate_weighted_noise_error,
    spectral_check,
    verify_stage_linear,
)


class TestLandweber:
    def test_diagonal_steady_state(self):
        p = LinearProblem(np.diag([2.0, 1.0, 0.1]), np.zeros(3), np.full(3, 0.01), 0.1)
        traj = landweber_trajectory(p, 100_000)
        # singular values come out sorted, so modes are (2, 1, 0.1)
        np.testing.assert_allclose(traj.sigma, [2, 1, 0.1])
        np.testing.assert_allclose(np.abs(traj.final), [0.005, 0.01, 0.1], rtol=0.01)

    def test_noiseless_geometric_decay(self, rng):
        A = rng.standard_normal((5, 5)) / np.sqrt(5)
        s = svd_small(A)[1]
        p = LinearProblem(A, rng.standard_normal(5), np.zeros(5), 1.0 / s[0] ** 2)
        traj = landweber_trajectory(p, 30)
        factor = 1.0 - p.eta * traj.sigma**2
        expected = traj.history[0] * factor[None, :] ** np.arange(31)[:, None]
        np.testing.assert_allclose(traj.history, expected, atol=1e-12)
        assert np.all(np.abs(traj.final) <= np.abs(traj.history[0]) + 1e-15)

    def test_fixed_point_identity(self, rng):
        A = rng.standard_normal((4, 4))
        s = svd_small(A)[1]
        p = LinearProblem(A, rng.standard_normal(4), 0.1 * rng.standard_normal(4), 1.0 / s[0] ** 2)
        traj = landweber_trajectory(p, 1)
        # a mode sitting at eps_i / sigma_i is left unchanged by one step
        x_ss = p.x_star + p.V[:, : traj.sigma.size] @ traj.steady_state
        one = landweber_trajectory(p, 1, x0=x_ss)
        np.testing.assert_allclose(one.history[1], one.history[0], atol=1e-10)

    def test_fixed_point_contraction_inequality(self, rng):
        A = rng.standard_normal((6, 6)) / np.sqrt(6)
        s = svd_small(A)[1]
        p = LinearProblem(A, rng.standard_normal(6), 0.1 * rng.standard_normal(6), 1.5 / s[0] ** 2)
        traj = landweber_trajectory(p, 300)
        rho = np.abs(1 - p.eta * traj.sigma**2)
        dist = np.abs(traj.history - traj.steady_state)
        bound = rho[None, :] ** np.arange(301)[:, None] * dist[0]
        assert np.all(dist <= bound + 1e-10)

    def test_random_square_steady_state(self):
        for seed in range(3):
            rep = spectral_check(seed)
            assert rep["passed"], rep
            assert rep["max_relative_error"] < 0.01

    def test_step_size_guard(self):
        with pytest.raises(StepSizeTooLarge):
            LinearProblem(np.diag([2.0, 1.0]), np.zeros(2), np.zeros(2), 0.6)
        with pytest.raises(DimMismatch):
            LinearProblem(np.eye(2), np.zeros(3), np.zeros(2), 0.5)


class TestPl:
    def test_identity(self):
        c = pl_constants(np.eye(3), np.eye(3), np.ones(3))
        assert (c.mu, c.L) == pytest.approx((2.0, 2.0))

    def test_near_null_direction(self):
        small = 1e-3
        c = pl_constants(np.eye(2), np.eye(2), np.array([1.0, small]))
        assert c.mu == pytest.approx(2 * small**2, rel=1e-12)
        assert c.L == pytest.approx(2.0)
        c0 = pl_constants(np.eye(2), np.eye(2), np.array([1.0, 0.0]))
        assert c0.mu == pytest.approx(2.0) and c0.tangent.shape == (2, 1)

    def test_random_against_svd(self, rng):
        A = rng.standard_normal((8, 6))
        J = rng.standard_normal((6, 4))
        v = rng.uniform(0.2, 1.0, 8)
        c = pl_constants(J, A, v)
        s = np.linalg.svd(np.diag(v) @ A @ J, compute_uv=False)
        assert c.mu == pytest.approx(2 * s[-1] ** 2, rel=1e-10)
        assert c.L == pytest.approx(2 * s[0] ** 2, rel=1e-10)

    def test_rayleigh_quotients_bracketed(self, rng):
        A = rng.standard_normal((8, 5))
        J = rng.standard_normal((5, 5))
        v = rng.uniform(0.2, 1.0, 8)
        c = pl_constants(J, A, v)
        B = np.diag(v) @ A @ J
        for _ in range(100):
            z = c.tangent @ rng.standard_normal(c.tangent.shape[1])
            q = 2 * np.linalg.norm(B @ z) ** 2 / np.linalg.norm(z) ** 2
            assert c.mu * (1 - 1e-10) <= q <= c.L * (1 + 1e-10)

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatch):
            pl_constants(np.eye(2), np.eye(3), np.ones(3))
        with pytest.raises(DimMismatch):
            pl_constants(np.eye(2), np.eye(2), np.ones(3))


class TestStageLinear:
    def test_aligned_eigenvector_ratio(self):
        rep = verify_stage_linear(np.diag([1.0, 4.0]), np.array([1.0, 0.0]), 20, eta=0.25)
        np.testing.assert_allclose(rep.ratios, 0.75**2, rtol=1e-12)
        assert rep.holds and rep.mu == 1.0 and rep.L == 4.0

    def test_start_at_minimizer(self):
        star = np.array([0.3, -1.0])
        rep = verify_stage_linear(np.diag([1.0, 4.0]), star, 10, eta=0.25, theta_star=star)
        assert np.all(rep.gaps == 0)

    def test_random_quadratics(self, rng):
        for n in (4, 10):
            for rank in (n, n // 2):
                H, t0 = random_quadratic(rng, n, rank)
                rep = verify_stage_linear(H, t0, 200)
                assert rep.holds
                assert np.all(rep.gaps[1:] <= rep.bound[1:] * (1 + 1e-9))

    def test_violation_detected(self):
        # an eta above 1/L is refused outright
        with pytest.raises(StepSizeTooLarge):
            verify_stage_linear(np.diag([1.0, 4.0]), np.ones(2), 5, eta=0.3)

    def test_report_flags_excess_gap(self):
        gaps = np.array([1.0, 0.5, 0.3])
        bound = np.array([1.0, 0.5, 0.25])
        assert not StageLinearReport(1.0, 1.0, 0.5, gaps, bound).holds
        assert StageLinearReport(1.0, 1.0, 0.5, gaps, bound * 1.2).holds


class TestAcceleration:
    def test_formula(self):
        kc, kd = acceleration_bound(0.01, 0.1, 2.0, 1.0)
        assert kc == pytest.approx(np.log(100) / 0.2) and kd == pytest.approx(np.log(100) / 0.1)
        assert round(kc, 2) == 23.03 and round(kd, 2) == 46.05

    @pytest.mark.parametrize("args", [(0.01, 0.1, 1.0, 1.0), (0.01, 0.1, 0.5, 1.0), (1.5, 0.1, 2, 1), (0.01, 0, 2, 1)])
    def test_bad_inputs(self, args):
        with pytest.raises(BadInputs):
            acceleration_bound(*args)

    def test_masked_dft_experiment(self):
        rep = acceleration_experiment()
        assert rep.mu_early > rep.mu_uniform
        assert 0 <= rep.k_coggen_measured <= rep.k_coggen_bound
        assert rep.k_uniform_measured <= rep.k_dip_bound


def _two_step(v_bar):
    return StageWeighting([np.ones(1), np.ones(1)], [1, 1], tau=1, v_bar=v_bar, rho=[0.5, 0.5])


class TestNoiseBounds:
    def test_two_term_example(self):
        assert noise_imprint_bounds(_two_step(0.5), 1.0, 1.0, 1.0, 2) == pytest.approx((1.5, 1.25))

    def test_continuity_at_unit_vbar(self):
        d1, c1 = noise_imprint_bounds(_two_step(1.0), 1.0, 1.0, 1.0)
        assert d1 == c1
        d, c = noise_imprint_bounds(_two_step(1 - 1e-9), 1.0, 1.0, 1.0)
        assert c < d and d - c < 1e-8

    def test_dominance_margin(self, rng):
        rho = list(rng.uniform(0.3, 0.95, 3))
        w = StageWeighting([np.ones(2)] * 3, [7, 5, 9], tau=9, v_bar=0.4, rho=rho)
        d, c = noise_imprint_bounds(w, 1.3, 0.7, 0.2)
        per_step = np.repeat(rho, [7, 5, 9])
        tails = [np.prod(per_step[t + 1 :]) for t in range(21)]
        assert d - c == pytest.approx((1 - 0.4) * 0.2 * 1.3 * 0.7 * sum(tails[:9]), rel=1e-12)

    @pytest.mark.parametrize("rho,T", [(0.3, 5), (0.9, 40), (0.99, 300)])
    def test_geometric_closed_form(self, rho, T):
        w = StageWeighting([np.ones(1)], [T], tau=T, v_bar=1.0, rho=[rho])
        d, _ = noise_imprint_bounds(w, 2.0, 3.0, 0.5)
        assert d / (0.5 * 2.0 * 3.0) == pytest.approx(geometric_bound_factor(rho, T), rel=1e-12)

    def test_zero_noise_trajectory(self, rng):
        A = rng.standard_normal((5, 3))
        s = svd_small(A)[1]
        p = LinearProblem(A, np.zeros(3), np.zeros(5), 0.5 / s[0] ** 2)
        w = StageWeighting.measure(A, [np.full(5, 0.5), np.ones(5)], [10, 10], p.eta, np.ones(5))
        traj = simulate_weighted_noise_error(p, w)
        assert np.all(traj.norms == 0)

    def test_uniform_weights_within_dip_bound(self, rng):
        A = rng.standard_normal((6, 4)) / np.sqrt(6)
        s = svd_small(A)[1]
        noise = rng.standard_normal(6)
        p = LinearProblem(A, np.zeros(4), noise, 0.8 / s[0] ** 2)
        w = StageWeighting.measure(A, [np.ones(6)], [80], p.eta, noise)
        traj = simulate_weighted_noise_error(p, w)
        assert traj.b_dip == pytest.approx(traj.b_coggen)
        assert traj.final <= traj.b_dip * (1 + 1e-9)

    def test_curriculum_beats_uniform_on_diagonal_problem(self):
        wins = 0
        for seed in range(10):
            p, cur, uni = diagonal_curriculum_problem(seed=seed)
            assert cur.tau == 100 and cur.v_bar < 1.0
            a = simulate_weighted_noise_error(p, cur)
            b = simulate_weighted_noise_error(p, uni)
            assert a.b_coggen < a.b_dip
            wins += a.final < b.final
        assert wins >= 9

    def test_invalid_weighting(self):
        with pytest.raises(BadInputs):
            StageWeighting([np.ones(1)], [3], tau=1, v_bar=0.5, rho=[1.0])
        with pytest.raises(BadInputs):
            noise_imprint_bounds(_two_step(0.5), 1.0, 1.0, 1.0, T=3)


def test_run_verification_all_sections():
    out = run_verification("all", seed=0)
    assert set(out) == {"spectral", "stage_linear", "acceleration", "noise_imprint"}
    assert all(v["passed"] for v in out.values()), out
    with pytest.raises(BadInputs):
        run_verification("nope")
