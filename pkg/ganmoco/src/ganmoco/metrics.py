"""PSNR and SSIM for magnitude images.

Same definitions the dataset generator uses for its reports: PSNR with
the peak taken from the reference image, SSIM with an 11x11 Gaussian
window of sigma 1.5 and the standard stability constants. The test
suite cross-checks both against the generator's command line on shared
tensors.
"""

import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

__all__ = ["psnr", "ssim"]

_WIN_RADIUS = 5
_WIN_SIGMA = 1.5
_K1 = 0.01
_K2 = 0.03


def _magnitude(image) -> np.ndarray:
    arr = np.asarray(image)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2D image, got shape {arr.shape}")
    if np.iscomplexobj(arr):
        arr = np.abs(arr)
    arr = arr.astype(np.float64, copy=False)
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains non-finite values")
    return arr


def _pair(reference, test):
    ref = _magnitude(reference)
    tst = _magnitude(test)
    if ref.shape != tst.shape:
        raise ValueError(f"image shapes differ: {ref.shape} vs {tst.shape}")
    peak = float(np.abs(ref).max())
    if peak <= 0:
        raise ValueError("reference image is identically zero")
    return ref, tst, peak


def psnr(reference, test) -> float:
    ref, tst, peak = _pair(reference, test)
    mse = float(np.mean((ref - tst) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)


def _kernel():
    offsets = np.arange(-_WIN_RADIUS, _WIN_RADIUS + 1, dtype=np.float64)
    k = np.exp(-(offsets ** 2) / (2.0 * _WIN_SIGMA ** 2))
    return k / k.sum()


def _blur(image, kernel):
    r = _WIN_RADIUS
    padded = np.pad(image, ((r, r), (0, 0)), mode="symmetric")
    rows = sliding_window_view(padded, 2 * r + 1, axis=0) @ kernel
    padded = np.pad(rows, ((0, 0), (r, r)), mode="symmetric")
    return sliding_window_view(padded, 2 * r + 1, axis=1) @ kernel


def ssim(reference, test) -> float:
    ref, tst, peak = _pair(reference, test)
    size = 2 * _WIN_RADIUS + 1
    if min(ref.shape) < size:
        raise ValueError(f"images must be at least {size}x{size}, got {ref.shape}")
    kernel = _kernel()
    c1 = (_K1 * peak) ** 2
    c2 = (_K2 * peak) ** 2

    mu_r = _blur(ref, kernel)
    mu_t = _blur(tst, kernel)
    var_r = _blur(ref * ref, kernel) - mu_r * mu_r
    var_t = _blur(tst * tst, kernel) - mu_t * mu_t
    cov = _blur(ref * tst, kernel) - mu_r * mu_t

    smap = ((2 * mu_r * mu_t + c1) * (2 * cov + c2)) / (
        (mu_r * mu_r + mu_t * mu_t + c1) * (var_r + var_t + c2)
    )
    r = _WIN_RADIUS
    # border windows lean on padding; score the fully supported interior
    return float(np.clip(smap[r:-r, r:-r].mean(), -1.0, 1.0))
