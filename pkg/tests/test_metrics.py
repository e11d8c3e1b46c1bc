import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from coggen.errors import ZeroReference
from coggen.metrics import PSNR_CAP_DB, default_roi, psnr_roi, rlne_roi


def test_rlne_examples():
    x = np.array([[1.0, 1.0]])
    assert rlne_roi(x, x) == 0.0
    assert rlne_roi(x, np.zeros_like(x)) == 1.0
    assert abs(rlne_roi(x, np.array([[1.0, 0.0]])) - 1 / np.sqrt(2)) <= 1e-12


def test_psnr_examples():
    x = np.array([[1.0, 1.0]])
    assert psnr_roi(x, x) == PSNR_CAP_DB
    assert abs(psnr_roi(x, np.array([[1.0, 0.0]])) - 20 * np.log10(np.sqrt(2))) <= 1e-12
    # max |x| = 1 and RMSE = 0.01
    xh = x + np.array([[0.01, -0.01j]])
    assert psnr_roi(x, xh) == pytest.approx(40.0, abs=1e-12)


def test_roi_restricts():
    x = np.array([[1.0, 5.0], [0.0, 2.0]])
    roi = np.array([[True, False], [False, True]])
    xh = x.copy()
    xh[0, 1] = 100.0
    assert rlne_roi(x, xh, roi) == 0.0


def test_complex_differences_count_phase():
    x = np.array([[1.0 + 0j]])
    assert rlne_roi(x, np.array([[1j]])) == pytest.approx(np.sqrt(2))


def test_zero_reference():
    with pytest.raises(ZeroReference):
        rlne_roi(np.zeros((2, 2)), np.ones((2, 2)))


def test_default_roi():
    x = np.array([[1.0, 0.04], [0.06, 0.0]])
    np.testing.assert_array_equal(default_roi(x), [[True, False], [True, False]])


@given(st.integers(0, 2**32 - 1), st.integers(-20, 20), st.booleans())
def test_rlne_scale_equivariance_power_of_two_exact(seed, k, neg):
    r = np.random.default_rng(seed)
    x = r.standard_normal((4, 4)) + 1j * r.standard_normal((4, 4))
    xh = x + 0.1 * r.standard_normal((4, 4))
    c = (-1.0 if neg else 1.0) * 2.0**k
    assert rlne_roi(c * x, c * xh) == rlne_roi(x, xh)


@given(st.integers(0, 2**32 - 1), st.floats(1e-3, 1e3), st.floats(0, 2 * np.pi))
def test_rlne_scale_equivariance_general(seed, mag, phase):
    r = np.random.default_rng(seed)
    x = r.standard_normal((4, 4)) + 1j * r.standard_normal((4, 4))
    xh = x + 0.1 * r.standard_normal((4, 4))
    c = mag * np.exp(1j * phase)
    assert rlne_roi(c * x, c * xh) == pytest.approx(rlne_roi(x, xh), rel=1e-14)


@given(st.integers(0, 2**32 - 1), st.integers(0, 15), st.floats(0.01, 1.0))
def test_psnr_decreases_with_error(seed, idx, bump):
    r = np.random.default_rng(seed)
    x = r.standard_normal((4, 4)) + 1j * r.standard_normal((4, 4))
    xh = x + 0.1 * (r.standard_normal((4, 4)) + 1j * r.standard_normal((4, 4)))
    worse = xh.copy()
    i, j = divmod(idx, 4)
    err = worse[i, j] - x[i, j]
    worse[i, j] = x[i, j] + err * (1 + bump / abs(err))
    assert psnr_roi(x, worse) < psnr_roi(x, xh)
    assert np.isfinite(psnr_roi(x, xh)) and rlne_roi(x, xh) >= 0
