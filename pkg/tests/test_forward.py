import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coggen.core_math import power_iteration
from coggen.errors import BudgetInfeasible, ShapeMismatch
from coggen.forward import (
    MeasurementSet,
    Pattern,
    SamplingMask,
    add_awgn,
    apply_adjoint,
    apply_forward,
    gen_vd_mask,
    radial_distances,
)

from conftest import centred_dft2_oracle, crandn


def random_mask(rng, h=8, w=8, keep=0.4):
    sel = rng.random((h, w)) < keep
    sel[h // 2, w // 2] = True
    return SamplingMask(sel, Pattern.VD2D, sel.size / sel.sum(), 0.0, 0)


class TestMaskGeneration:
    def test_af_one_is_full(self):
        m = gen_vd_mask(64, 64, Pattern.VD2D, 1.0, 0.0, 0)
        assert m.count == 4096

    def test_vd2d_budget_and_centre(self):
        m = gen_vd_mask(64, 64, Pattern.VD2D, 8.0, 0.04, 7)
        assert 486 <= m.count <= 538
        # independent centre oracle: the ceil(0.04 N) closest lattice points
        rr, cc = np.meshgrid(np.arange(64) - 32, np.arange(64) - 32, indexing="ij")
        d = np.sqrt(rr**2 + cc**2)
        radius = np.sort(d.ravel())[int(np.ceil(0.04 * 4096)) - 1]
        assert m.selected[d <= radius].all()
        assert abs(m.achieved_af - 8.0) <= 0.05 * 8.0

    def test_vd1d_selects_whole_columns(self):
        m = gen_vd_mask(64, 64, Pattern.VD1D_PE, 6.0, 0.06, 3)
        cols = m.selected.any(axis=0)
        assert 10 <= cols.sum() <= 12
        assert (m.selected[:, cols].sum(axis=0) == 64).all()
        assert not m.selected[:, ~cols].any()

    def test_density_decays_with_radius(self):
        counts = np.zeros((64, 64))
        for seed in range(20):
            counts += gen_vd_mask(64, 64, Pattern.VD2D, 4.0, 0.0, seed).selected
        rr, cc = np.meshgrid(np.arange(64) - 32, np.arange(64) - 32, indexing="ij")
        d = np.hypot(rr, cc)
        inner, middle, outer = counts[d < 8].mean(), counts[(d >= 12) & (d < 20)].mean(), counts[d >= 28].mean()
        assert inner > middle > outer

    def test_deterministic(self):
        a = gen_vd_mask(32, 32, Pattern.VD2D, 4.0, 0.05, 11)
        b = gen_vd_mask(32, 32, Pattern.VD2D, 4.0, 0.05, 11)
        c = gen_vd_mask(32, 32, Pattern.VD2D, 4.0, 0.05, 12)
        assert a.selected.tobytes() == b.selected.tobytes()
        assert a.selected.tobytes() != c.selected.tobytes()

    def test_centre_fraction_over_budget(self):
        with pytest.raises(BudgetInfeasible):
            gen_vd_mask(32, 32, Pattern.VD2D, 8.0, 0.2, 0)

    @given(st.sampled_from([4.0, 6.0, 8.0]), st.floats(0.0, 0.08), st.integers(0, 1000))
    def test_af_within_five_percent(self, af, cf, seed):
        m = gen_vd_mask(32, 32, Pattern.VD2D, af, min(cf, 0.9 / af), seed)
        assert abs(m.achieved_af - af) <= 0.05 * af


class TestOperator:
    def test_full_mask_delta(self):
        x = np.zeros((4, 4))
        x[0, 0] = 1
        y = apply_forward(SamplingMask.full(4, 4), x)
        np.testing.assert_allclose(y.values, np.full(16, 0.25), atol=1e-15)

    def test_zero_image(self, rng):
        y = apply_forward(random_mask(rng), np.zeros((8, 8)))
        assert np.all(y.values == 0)

    def test_matches_masked_dft_oracle(self, rng):
        x = crandn(rng, 8, 8)
        m = gen_vd_mask(8, 8, Pattern.VD2D, 2.0, 0.05, 5)
        expect = centred_dft2_oracle(x)[m.selected]  # boolean indexing is row-major
        np.testing.assert_allclose(apply_forward(m, x).values, expect, atol=1e-12)

    def test_full_adjoint_inverts(self, rng):
        x = crandn(rng, 8, 8)
        m = SamplingMask.full(8, 8)
        np.testing.assert_allclose(apply_adjoint(m, apply_forward(m, x)), x, atol=1e-12)

    def test_normal_operator_matches_projection_oracle(self, rng):
        x = crandn(rng, 8, 8)
        m = random_mask(rng)
        # DFT, zero the unselected bins, then an explicit inverse-DFT sum
        k = np.roll(np.roll(centred_dft2_oracle(x) * m.selected, -4, axis=0), -4, axis=1)
        rows, cols = np.arange(8)[:, None], np.arange(8)[None, :]
        expect = np.zeros((8, 8), dtype=complex)
        for a in range(8):
            for b in range(8):
                expect += k[a, b] * np.exp(2j * np.pi * (a * rows + b * cols) / 8) / 8.0
        np.testing.assert_allclose(apply_adjoint(m, apply_forward(m, x)), expect, atol=1e-12)

    def test_adjoint_identity_and_projector(self, rng):
        for _ in range(20):
            m = random_mask(rng, 16, 8)
            x = crandn(rng, 16, 8)
            yv = crandn(rng, m.count)
            lhs = np.vdot(apply_forward(m, x).values, yv)
            rhs = np.vdot(x, apply_adjoint(m, yv))
            assert abs(lhs - rhs) <= 1e-12 * abs(lhs)
            p1 = apply_adjoint(m, apply_forward(m, x))
            p2 = apply_adjoint(m, apply_forward(m, p1))
            np.testing.assert_allclose(p2, p1, atol=1e-12)

    def test_operator_norm_at_most_one(self, rng):
        m = random_mask(rng)

        def normal(v):
            return apply_adjoint(m, apply_forward(m, v.reshape(8, 8))).ravel()

        assert power_iteration(normal, 64) <= 1 + 1e-10

    def test_shape_mismatch(self, rng):
        with pytest.raises(ShapeMismatch):
            apply_forward(random_mask(rng), np.zeros((4, 4)))
        with pytest.raises(ShapeMismatch):
            MeasurementSet(random_mask(rng), np.zeros(3))


class TestNoise:
    def test_zero_sigma_identity(self, rng):
        m = random_mask(rng)
        y = apply_forward(m, crandn(rng, 8, 8))
        assert np.array_equal(add_awgn(y, 0.0, 1).values, y.values)

    def test_noise_statistics(self):
        sel = np.zeros((100, 100), dtype=bool)
        sel[:, :] = True
        m = SamplingMask(sel)
        y = MeasurementSet(m, np.zeros(10_000))
        n = add_awgn(y, 0.01, 4).values
        assert 0.0097 <= n.real.std() <= 0.0103
        assert 0.0097 <= n.imag.std() <= 0.0103
        assert add_awgn(y, 0.01, 4).noise_sigma == 0.01

    def test_deterministic(self, rng):
        m = random_mask(rng)
        y = apply_forward(m, crandn(rng, 8, 8))
        assert np.array_equal(add_awgn(y, 0.1, 9).values, add_awgn(y, 0.1, 9).values)


class TestDistances:
    def test_centre_and_corner(self):
        sel = np.zeros((8, 8), dtype=bool)
        sel[4, 4] = sel[0, 0] = True
        d = radial_distances(SamplingMask(sel))
        # row-major order: (0,0) first
        np.testing.assert_allclose(d.distances, [np.sqrt(32), 0.0])

    def test_full_4x4_max(self):
        pts = [np.hypot(r - 2, c - 2) for r in range(4) for c in range(4)]
        d = radial_distances(SamplingMask.full(4, 4))
        assert d.max_distance == pytest.approx(max(pts)) == pytest.approx(np.sqrt(8))
