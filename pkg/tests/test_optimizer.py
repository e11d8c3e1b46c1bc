from dataclasses import replace

import numpy as np
import pytest

from coggen.errors import NonFiniteLoss
from coggen.forward import Pattern, SamplingMask, add_awgn, apply_forward, gen_vd_mask
from coggen.generator import InrConfig
from coggen.optimizer import (
    AdamState,
    Benchmark,
    CurriculumConfig,
    OptimizerKind,
    RunConfig,
    Suite,
    optimizer_step,
    reconstruct,
    run_ablation,
    suite_arms,
)
from coggen.phantom import PhantomKind, PhantomSpec, gen_phantom

TINY_INR = InrConfig(hidden_layers=1, hidden_width=16, fourier_features=8, fourier_scale=2.0)


@pytest.fixture(scope="module")
def tiny_data():
    x = gen_phantom(PhantomSpec(PhantomKind.SHEPP_LOGAN, 16, 16))
    mask = gen_vd_mask(16, 16, Pattern.VD2D, 3.0, 0.05, 1)
    y = add_awgn(apply_forward(mask, x), 0.01, 0)
    return Benchmark(x, mask, y)


def trace(config, data):
    thetas = []
    res = reconstruct(config, data.mask, data.y, data.truth, on_step=lambda it, p: thetas.append(p.theta.copy()))
    return res, np.array(thetas)


class TestOptimizerStep:
    def test_gd_zero_grad(self):
        theta = np.array([1.0, -2.0])
        new, _ = optimizer_step(theta, np.zeros(2), None, OptimizerKind.GD, 0.1)
        assert np.array_equal(new, theta)

    def test_gd_arithmetic(self):
        new, _ = optimizer_step(np.array([1.0]), np.array([2.0]), None, OptimizerKind.GD, 0.1)
        assert new[0] == pytest.approx(0.8, abs=1e-15)

    def test_adam_first_step_hand_oracle(self):
        g = np.array([0.5, -3.0, 1e-3, 0.0])
        lr, b1, b2, eps = 0.01, 0.9, 0.999, 1e-8
        m = (1 - b1) * g
        v = (1 - b2) * g * g
        step = lr * (m / (1 - b1)) / (np.sqrt(v / (1 - b2)) + eps)
        new, st = optimizer_step(np.zeros(4), g, None, OptimizerKind.ADAM, lr, (b1, b2), eps)
        np.testing.assert_allclose(new, -step, rtol=1e-15)
        # about lr per non-zero coordinate
        np.testing.assert_allclose(np.abs(new[:3]), lr, rtol=1e-4)
        assert st.t == 1

    def test_adam_second_step_hand_oracle(self):
        g1, g2 = np.array([1.0, -2.0]), np.array([0.5, 1.0])
        lr, b1, b2, eps = 0.1, 0.9, 0.999, 1e-8
        t1, s = optimizer_step(np.zeros(2), g1, None, OptimizerKind.ADAM, lr, (b1, b2), eps)
        t2, s = optimizer_step(t1, g2, s, OptimizerKind.ADAM, lr, (b1, b2), eps)
        m = b1 * (1 - b1) * g1 + (1 - b1) * g2
        v = b2 * (1 - b2) * g1**2 + (1 - b2) * g2**2
        expect = t1 - lr * (m / (1 - b1**2)) / (np.sqrt(v / (1 - b2**2)) + eps)
        np.testing.assert_allclose(t2, expect, rtol=1e-14)
        assert isinstance(s, AdamState) and s.t == 2


class TestReconstruct:
    def config(self, **kw):
        base = RunConfig(
            inr=TINY_INR,
            learning_rate=1e-3,
            log_every=5,
            curriculum=CurriculumConfig(K2=(10, 10, 20)),
        )
        return replace(base, **kw)

    def test_budget_and_curve(self, tiny_data):
        res = reconstruct(self.config(), tiny_data.mask, tiny_data.y, tiny_data.truth)
        assert res.iterations == 40
        its = res.curve_array()[:, 0]
        assert its[0] == 0 and its[-1] == 40
        assert np.all(np.diff(its) <= 5)
        assert np.all(np.isfinite(res.curve_array()))
        assert len(res.weights_per_stage) == 3
        stages = res.curve_array()[:, 1]
        assert np.all(np.diff(stages) >= 0)
        lam = [t[0] for t in res.thresholds]
        assert np.all(np.diff(lam) > 0)

    def test_weights_constant_within_stage(self, tiny_data):
        seen = []
        import coggen.optimizer as opt

        orig = opt.evaluate

        def spy(params, grid, mask, y, v, features=None):
            seen.append(v)
            return orig(params, grid, mask, y, v, features)

        opt.evaluate = spy
        try:
            reconstruct(self.config(), tiny_data.mask, tiny_data.y)
        finally:
            opt.evaluate = orig
        # one weight object per stage, reused for all of its inner steps
        assert len({id(v) for v in seen[:10]}) == 1
        assert len({id(v) for v in seen[:40]}) == 3

    def test_deterministic(self, tiny_data):
        a = reconstruct(self.config(), tiny_data.mask, tiny_data.y, tiny_data.truth)
        b = reconstruct(self.config(), tiny_data.mask, tiny_data.y, tiny_data.truth)
        assert a.curve == b.curve
        assert a.image.tobytes() == b.image.tobytes()

    @pytest.mark.parametrize("w", [1.0, 0.9])
    def test_uniform_equivalence(self, tiny_data, w):
        cur = CurriculumConfig(K2=(25, 25, 50), w1=w, w2=w, lambda0=1e12, r0=1e6)
        coggen, th_c = trace(self.config(curriculum=cur), tiny_data)
        vanilla, th_v = trace(self.config(curriculum=cur, vanilla_mode=True), tiny_data)
        assert th_c.shape == th_v.shape == (100, th_c.shape[1])
        scale = np.abs(th_v).max(axis=1, keepdims=True)
        assert np.all(np.abs(th_c - th_v) <= 1e-12 * scale)

    def test_divergence_guard(self, tiny_data):
        with pytest.raises(NonFiniteLoss) as info:
            reconstruct(self.config(learning_rate=50.0, optimizer_kind=OptimizerKind.GD), tiny_data.mask, tiny_data.y)
        assert info.value.partial is not None

    def test_gd_mode_runs(self, tiny_data):
        res = reconstruct(self.config(optimizer_kind=OptimizerKind.GD, learning_rate=1e-3), tiny_data.mask, tiny_data.y)
        assert res.iterations == 40


class TestAblation:
    def test_suite_arms(self):
        base = RunConfig(curriculum=CurriculumConfig(K2=(10, 10, 20, 20, 100)))
        assert [n for n, _ in suite_arms(Suite.BACKBONE_GAIN, base)] == ["vanilla", "coggen"]
        sizes = suite_arms(Suite.CURRICULUM_SIZE, base)
        assert [c.curriculum.K1 for _, c in sizes] == [1, 2, 3, 4, 5, 6, 8]
        assert all(sum(c.curriculum.K2) == 160 for _, c in sizes)
        modes = dict(suite_arms(Suite.MODE_WEIGHTING, base))
        assert (modes["teacher-only"].curriculum.use_student, modes["teacher-only"].curriculum.use_teacher) == (
            False,
            True,
        )
        assert (modes["student-only"].curriculum.use_student, modes["student-only"].curriculum.use_teacher) == (
            True,
            False,
        )

    def test_degenerate_mode_weighting(self, tiny_data):
        cfg = RunConfig(
            inr=TINY_INR,
            learning_rate=1e-3,
            log_every=10,
            curriculum=CurriculumConfig(K2=(5, 5, 10), w1=1.0, w2=1.0, lambda0=1e12, r0=1e6),
        )
        rep = run_ablation(Suite.MODE_WEIGHTING, cfg, tiny_data, seeds=(0,))
        finals = {r.arm: r.final_rlne for r in rep.rows}
        assert len(finals) == 4
        assert len(set(finals.values())) == 1

    def test_curriculum_size_table(self, tiny_data):
        cfg = RunConfig(inr=TINY_INR, learning_rate=1e-3, log_every=10, curriculum=CurriculumConfig(K2=(8, 8, 8, 8, 32)))
        rep = run_ablation(Suite.CURRICULUM_SIZE, cfg, tiny_data, seeds=(0,))
        assert rep.arms() == [f"K1={k}" for k in (1, 2, 3, 4, 5, 6, 8)]
        assert all(r.iterations == 64 for r in rep.rows)


@pytest.mark.benchmark
def test_full_sampling_fit_capacity():
    # noiseless, fully sampled: the 4x128 network must fit the phantom closely
    from coggen.metrics import default_roi

    x = gen_phantom(PhantomSpec(PhantomKind.SHEPP_LOGAN, 64, 64))
    mask = SamplingMask.full(64, 64)
    y = apply_forward(mask, x)
    cfg = RunConfig(
        inr=InrConfig(hidden_layers=4, hidden_width=128, fourier_scale=3.0, omega0=5.0),
        learning_rate=1e-3,
        log_every=250,
        vanilla_mode=True,
        curriculum=CurriculumConfig(K2=(5000,)),
    )
    res = reconstruct(cfg, mask, y, x, default_roi(x))
    assert res.iterations == 5000
    assert res.final_rlne < 0.05
