"""Hot numeric kernels, each in a numba and a pure-numpy flavour.

The public names (``fft_rows``, ``jacobi_sweeps``, ``sine_activation``) are
bound to one flavour at import time according to :mod:`coggen._accel`. Both
flavours are always importable under ``*_numba`` / ``*_numpy`` so tests and
the benchmark can compare them directly.
"""

from functools import lru_cache

import numpy as np

from ._accel import USE_NUMBA, njit

# --------------------------------------------------------------------------
# radix-2 FFT along the last axis of a 2D batch
# --------------------------------------------------------------------------


@lru_cache(maxsize=64)
def bit_reverse_permutation(n):
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    rev.setflags(write=False)
    return rev


@lru_cache(maxsize=64)
def twiddles(n, inverse):
    sign = 1.0 if inverse else -1.0
    k = np.arange(max(n // 2, 1))
    ang = sign * 2.0 * np.pi * k / n
    tw = np.cos(ang) + 1j * np.sin(ang)
    tw.setflags(write=False)
    return tw


@njit
def _fft_rows_kernel(a, rev, tw):
    nb, n = a.shape
    out = np.empty_like(a)
    for b in range(nb):
        for i in range(n):
            out[b, rev[i]] = a[b, i]
    h = 1
    while h < n:
        step = n // (2 * h)
        for b in range(nb):
            for start in range(0, n, 2 * h):
                for k in range(h):
                    w = tw[k * step]
                    u = out[b, start + k]
                    t = w * out[b, start + k + h]
                    out[b, start + k] = u + t
                    out[b, start + k + h] = u - t
        h *= 2
    scale = 1.0 / np.sqrt(n)
    for b in range(nb):
        for i in range(n):
            out[b, i] *= scale
    return out


def fft_rows_numba(a, inverse=False):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    n = a.shape[1]
    return _fft_rows_kernel(a, bit_reverse_permutation(n), twiddles(n, inverse))


def fft_rows_numpy(a, inverse=False):
    a = np.asarray(a, dtype=np.complex128)
    nb, n = a.shape
    tw = twiddles(n, inverse)
    out = a[:, bit_reverse_permutation(n)]
    h = 1
    while h < n:
        w = tw[:: n // (2 * h)][:h]
        blocks = out.reshape(nb, n // (2 * h), 2, h)
        even = blocks[:, :, 0, :]
        odd = w * blocks[:, :, 1, :]
        out = np.stack((even + odd, even - odd), axis=2).reshape(nb, n)
        h *= 2
    return out * (1.0 / np.sqrt(n))


# --------------------------------------------------------------------------
# one-sided (Hestenes) Jacobi SVD sweeps
# --------------------------------------------------------------------------


@njit
def _jacobi_kernel(g, v, tol, max_sweeps):
    m, n = g.shape
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = 0.0
                beta = 0.0
                gamma = g[0, p] * 0.0
                for i in range(m):
                    alpha += (g[i, p] * np.conj(g[i, p])).real
                    beta += (g[i, q] * np.conj(g[i, q])).real
                    gamma += np.conj(g[i, p]) * g[i, q]
                ag = abs(gamma)
                if ag == 0.0 or ag <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                ph = np.conj(gamma) / ag
                zeta = (beta - alpha) / (2.0 * ag)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + np.sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                for i in range(m):
                    gp = g[i, p]
                    gq = g[i, q] * ph
                    g[i, p] = c * gp - s * gq
                    g[i, q] = s * gp + c * gq
                for i in range(n):
                    vp = v[i, p]
                    vq = v[i, q] * ph
                    v[i, p] = c * vp - s * vq
                    v[i, q] = s * vp + c * vq
        if not rotated:
            return sweep + 1
    return -1


def jacobi_sweeps_numba(g, v, tol, max_sweeps):
    """Orthogonalize the columns of ``g`` in place; returns sweeps used or -1."""
    return _jacobi_kernel(g, v, tol, max_sweeps)


def jacobi_sweeps_numpy(g, v, tol, max_sweeps):
    n = g.shape[1]
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                gp, gq = g[:, p], g[:, q]
                alpha = np.vdot(gp, gp).real
                beta = np.vdot(gq, gq).real
                gamma = np.vdot(gp, gq)
                ag = abs(gamma)
                if ag == 0.0 or ag <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                ph = np.conj(gamma) / ag
                zeta = (beta - alpha) / (2.0 * ag)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + np.sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                gq = gq * ph
                g[:, p], g[:, q] = c * gp - s * gq, s * gp + c * gq
                vp, vq = v[:, p].copy(), v[:, q] * ph
                v[:, p], v[:, q] = c * vp - s * vq, s * vp + c * vq
        if not rotated:
            return sweep + 1
    return -1


# --------------------------------------------------------------------------
# fused sine activation: h = sin(w z), dh/dz = w cos(w z)
# --------------------------------------------------------------------------


# fdlibm kernel coefficients; 3-part Cody-Waite reduction is exact enough for
# |x| < 2**20 * pi / 2, far beyond what a sine layer sees.
_PIO2_1 = 1.57079632673412561417e00
_PIO2_2 = 6.07710050630396597660e-11
_PIO2_3 = 2.02226624871116645580e-21
_INVPIO2 = 6.36619772367581382433e-01
_S1, _S2, _S3 = -1.66666666666666324348e-01, 8.33333333332248946124e-03, -1.98412698298579493134e-04
_S4, _S5, _S6 = 2.75573137070700676789e-06, -2.50507602534068634195e-08, 1.58969099521155010221e-10
_C1, _C2, _C3 = 4.16666666666666019037e-02, -1.38888888888741095749e-03, 2.48015872894767294178e-05
_C4, _C5, _C6 = -2.75573143513906633035e-07, 2.08757232129817482790e-09, -1.13596475577881948265e-11


@njit
def _sine_kernel(z, omega):
    flat = z.ravel()
    n = flat.size
    h = np.empty(n)
    d = np.empty(n)
    for i in range(n):
        x = omega * flat[i]
        k = np.floor(x * _INVPIO2 + 0.5)
        r = ((x - k * _PIO2_1) - k * _PIO2_2) - k * _PIO2_3
        w = r * r
        s = r + r * w * (_S1 + w * (_S2 + w * (_S3 + w * (_S4 + w * (_S5 + w * _S6)))))
        c = 1.0 - 0.5 * w + w * w * (_C1 + w * (_C2 + w * (_C3 + w * (_C4 + w * (_C5 + w * _C6)))))
        q = np.int64(k)
        odd = (q & 1) == 1
        sign_h = 1.0 - 2.0 * ((q >> 1) & 1)
        sign_d = 1.0 - 2.0 * (((q + 1) >> 1) & 1)
        h[i] = sign_h * (c if odd else s)
        d[i] = omega * sign_d * (s if odd else c)
    return h.reshape(z.shape), d.reshape(z.shape)


def sine_activation_numba(z, omega):
    return _sine_kernel(np.ascontiguousarray(z), float(omega))


def sine_activation_numpy(z, omega):
    a = omega * z
    return np.sin(a), omega * np.cos(a)


if USE_NUMBA:
    fft_rows = fft_rows_numba
    jacobi_sweeps = jacobi_sweeps_numba
    sine_activation = sine_activation_numba
else:
    fft_rows = fft_rows_numpy
    jacobi_sweeps = jacobi_sweeps_numpy
    sine_activation = sine_activation_numpy
