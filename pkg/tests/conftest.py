import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("ci", max_examples=40, deadline=None)
settings.load_profile("ci")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def dft_matrix_1d(n, inverse=False):
    """Brute-force unitary DFT matrix from the defining sum."""
    sign = 1.0 if inverse else -1.0
    m = np.empty((n, n), dtype=np.complex128)
    for k in range(n):
        for j in range(n):
            m[k, j] = np.exp(sign * 2j * np.pi * k * j / n) / np.sqrt(n)
    return m


def dft2_oracle(x, inverse=False):
    """O(N^2) double sum over all pixels for every output bin."""
    h, w = x.shape
    sign = 1.0 if inverse else -1.0
    out = np.zeros((h, w), dtype=np.complex128)
    rows = np.arange(h)[:, None]
    cols = np.arange(w)[None, :]
    for k in range(h):
        for l in range(w):
            phase = np.exp(sign * 2j * np.pi * (k * rows / h + l * cols / w))
            out[k, l] = np.sum(x * phase) / np.sqrt(h * w)
    return out


def centred_dft2_oracle(x):
    """Brute-force DFT with the zero frequency moved to (H//2, W//2)."""
    f = dft2_oracle(x)
    h, w = x.shape
    return np.roll(np.roll(f, h // 2, axis=0), w // 2, axis=1)


# acceptance outcomes, filled by tests/test_acceptance.py and echoed at the end
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
