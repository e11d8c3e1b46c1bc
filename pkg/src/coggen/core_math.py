"""Unitary 2D Fourier transforms and a small dense SVD.

Complex grids are plain ``complex128`` arrays of shape ``(H, W)``; small
matrices are 2D float64 or complex128 arrays.
"""

import numpy as np

from . import kernels
from .errors import BadDims, NoConvergence, NonFinite, NonPowerOfTwo

SVD_MAX_DIM = 512
MAX_SMALL_ENTRIES = 10**6


def is_power_of_two(n):
    return n >= 1 and (n & (n - 1)) == 0


def as_grid(grid):
    g = np.asarray(grid)
    if g.ndim != 2 or g.shape[0] < 1 or g.shape[1] < 1:
        raise BadDims(f"expected a non-empty 2D grid, got shape {g.shape}")
    g = g.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(g)):
        raise NonFinite("grid contains NaN or Inf")
    return g


def _dft_rows(a, inverse):
    n = a.shape[1]
    k = np.arange(n)
    sign = 1.0 if inverse else -1.0
    mat = np.exp(sign * 2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)
    return a @ mat.T


def _transform(grid, inverse, method):
    g = as_grid(grid)
    h, w = g.shape
    pow2 = is_power_of_two(h) and is_power_of_two(w)
    if method == "auto":
        method = "fft" if pow2 else "dft"
    if method == "fft":
        if not pow2:
            raise NonPowerOfTwo(f"radix-2 FFT needs power-of-two sizes, got {h}x{w}")
        rows = kernels.fft_rows
    elif method == "dft":
        rows = _dft_rows
    else:
        raise ValueError(f"unknown method {method!r}")
    out = rows(g, inverse)
    return np.ascontiguousarray(rows(out.T, inverse).T)


def fft2(grid, method="auto"):
    """Orthonormal 2D DFT (``1/sqrt(H*W)`` scaling).

    ``method`` is ``"fft"`` (radix-2, power-of-two sizes only), ``"dft"``
    (direct matrix product, any size) or ``"auto"``.
    """
    return _transform(grid, False, method)


def ifft2(grid, method="auto"):
    """Inverse of :func:`fft2`; also its adjoint."""
    return _transform(grid, True, method)


def _complete_orthonormal(u, rank):
    """Replace columns ``rank:`` of ``u`` with an orthonormal completion."""
    m, k = u.shape
    basis = [u[:, j] for j in range(rank)]
    e = 0
    while len(basis) < k:
        cand = np.zeros(m, dtype=u.dtype)
        cand[e] = 1.0
        e += 1
        for _ in range(2):
            for b in basis:
                cand = cand - np.vdot(b, cand) * b
        nrm = np.linalg.norm(cand)
        if nrm > 1e-8:
            basis.append(cand / nrm)
    return np.stack(basis, axis=1)


def svd_small(m, tol=1e-15, max_sweeps=60):
    """Thin SVD of a small dense matrix by one-sided Jacobi rotations.

    Returns ``(U, sigma, V)`` with ``m = U @ diag(sigma) @ V.conj().T``,
    ``sigma`` descending. Works for real and complex input.
    """
    a = np.asarray(m)
    if a.ndim != 2:
        raise BadDims("svd_small expects a 2D matrix")
    rows, cols = a.shape
    if rows > SVD_MAX_DIM or cols > SVD_MAX_DIM:
        raise BadDims(f"svd_small is limited to {SVD_MAX_DIM} per side")
    if not np.all(np.isfinite(a)):
        raise NonFinite("matrix contains NaN or Inf")
    dtype = np.complex128 if np.iscomplexobj(a) else np.float64
    if rows < cols:
        u, s, v = svd_small(a.conj().T, tol=tol, max_sweeps=max_sweeps)
        return v, s, u
    g = np.array(a, dtype=dtype, order="C")
    v = np.eye(cols, dtype=dtype)
    if kernels.jacobi_sweeps(g, v, tol, max_sweeps) < 0:
        raise NoConvergence(f"Jacobi SVD did not converge in {max_sweeps} sweeps")
    sigma = np.sqrt(np.sum((g * g.conj()).real, axis=0))
    order = np.argsort(-sigma, kind="stable")
    sigma, g, v = sigma[order], g[:, order], v[:, order]
    cutoff = sigma[0] * max(rows, cols) * np.finfo(np.float64).eps if cols else 0.0
    rank = int(np.sum(sigma > cutoff)) if cols and sigma[0] > 0 else 0
    u = np.zeros_like(g)
    u[:, :rank] = g[:, :rank] / sigma[:rank]
    if rank < cols:
        u = _complete_orthonormal(u, rank)
    return u, sigma, v


def power_iteration(apply, dim, iters=500, tol=1e-13, seed=0, dtype=np.complex128):
    """Largest eigenvalue of a Hermitian PSD operator given as a callable."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(dim).astype(dtype)
    if np.iscomplexobj(x):
        x = x + 1j * rng.standard_normal(dim)
    x /= np.linalg.norm(x)
    lam = 0.0
    for _ in range(iters):
        y = apply(x)
        new = float(np.vdot(x, y).real)
        nrm = np.linalg.norm(y)
        if nrm == 0.0:
            return 0.0
        x = y / nrm
        if abs(new - lam) <= tol * max(abs(new), 1e-300):
            return new
        lam = new
    return lam
