"""ROI-restricted reconstruction metrics on complex images."""

import numpy as np

from .errors import BadDims, ZeroReference

PSNR_CAP_DB = 300.0


def default_roi(truth, fraction=0.05):
    """Pixels whose magnitude exceeds ``fraction`` of the peak magnitude."""
    mag = np.abs(truth)
    return mag > fraction * mag.max()


def _restrict(x, xhat, roi):
    x = np.asarray(x, dtype=np.complex128)
    xhat = np.asarray(xhat, dtype=np.complex128)
    if x.shape != xhat.shape:
        raise BadDims(f"{x.shape} vs {xhat.shape}")
    roi = np.ones(x.shape, dtype=bool) if roi is None else np.asarray(roi, dtype=bool)
    if roi.shape != x.shape or not roi.any():
        raise BadDims("ROI must match the image and contain at least one pixel")
    return x[roi], xhat[roi]


def rlne_roi(x, xhat, roi=None):
    """``||x - xhat|| / ||x||`` over the ROI, on complex values."""
    xr, hr = _restrict(x, xhat, roi)
    ref = np.linalg.norm(xr)
    if ref == 0.0:
        raise ZeroReference("reference image is zero on the ROI")
    return float(np.linalg.norm(xr - hr) / ref)


def psnr_roi(x, xhat, roi=None):
    """``20 log10(max|x| / RMSE)`` over the ROI; capped at 300 dB."""
    xr, hr = _restrict(x, xhat, roi)
    peak = np.abs(xr).max()
    if peak == 0.0:
        raise ZeroReference("reference image is zero on the ROI")
    rmse = np.sqrt(np.mean(np.abs(xr - hr) ** 2))
    if rmse == 0.0:
        return PSNR_CAP_DB
    return float(min(20.0 * np.log10(peak / rmse), PSNR_CAP_DB))
