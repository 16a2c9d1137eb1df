"""PSNR and SSIM image-quality metrics.

Complex inputs are reduced to magnitude before comparison; ground truth
here is always a real-valued image. The peak (dynamic range) is taken
from the reference image in both metrics.
"""

import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

__all__ = ["psnr", "ssim"]

_WIN_RADIUS = 5  # 11x11 window
_WIN_SIGMA = 1.5
_K1 = 0.01
_K2 = 0.03


def _magnitude(image, name: str) -> np.ndarray:
    arr = np.asarray(image)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2D image, got rank {arr.ndim}")
    arr = np.abs(arr) if np.iscomplexobj(arr) else arr.astype(np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def _pair(reference, test):
    ref = _magnitude(reference, "reference")
    tst = _magnitude(test, "test")
    if ref.shape != tst.shape:
        raise ValueError(f"shape mismatch: reference {ref.shape}, test {tst.shape}")
    return ref, tst


def psnr(reference, test) -> float:
    """10 log10(peak^2 / MSE) in dB, peak = max |reference|.

    Identical images give math.inf; an all-zero reference is rejected
    because its peak is undefined.
    """
    ref, tst = _pair(reference, test)
    peak = float(np.max(np.abs(ref)))
    if peak == 0.0:
        raise ValueError("reference image is all zero: peak undefined")
    mse = float(np.mean((ref - tst) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak**2 / mse)


def _gaussian_kernel() -> np.ndarray:
    offsets = np.arange(-_WIN_RADIUS, _WIN_RADIUS + 1, dtype=np.float64)
    k = np.exp(-0.5 * (offsets / _WIN_SIGMA) ** 2)
    return k / k.sum()


def _filter2(img: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Separable windowed mean with symmetric edge padding."""
    r = kernel.size // 2
    out = np.pad(img, ((r, r), (0, 0)), mode="symmetric")
    out = sliding_window_view(out, kernel.size, axis=0) @ kernel
    out = np.pad(out, ((0, 0), (r, r)), mode="symmetric")
    return sliding_window_view(out, kernel.size, axis=1) @ kernel


def ssim(reference, test) -> float:
    """Mean local structural similarity in [-1, 1].

    11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03, dynamic
    range = peak of the reference. The window-radius border of the local
    map is cropped before averaging.
    """
    ref, tst = _pair(reference, test)
    h, w = ref.shape
    if h < 2 * _WIN_RADIUS + 1 or w < 2 * _WIN_RADIUS + 1:
        raise ValueError(f"images must be at least 11x11 for SSIM, got {h}x{w}")
    peak = float(np.max(np.abs(ref)))
    if peak == 0.0:
        raise ValueError("reference image is all zero: dynamic range undefined")

    c1 = (_K1 * peak) ** 2
    c2 = (_K2 * peak) ** 2
    kernel = _gaussian_kernel()

    mu1 = _filter2(ref, kernel)
    mu2 = _filter2(tst, kernel)
    var1 = _filter2(ref * ref, kernel) - mu1 * mu1
    var2 = _filter2(tst * tst, kernel) - mu2 * mu2
    cov = _filter2(ref * tst, kernel) - mu1 * mu2

    num = (2.0 * mu1 * mu2 + c1) * (2.0 * cov + c2)
    den = (mu1 * mu1 + mu2 * mu2 + c1) * (var1 + var2 + c2)
    smap = num / den

    r = _WIN_RADIUS
    # float error can push the identical-image case a hair past 1
    return float(np.clip(smap[r:-r, r:-r].mean(), -1.0, 1.0))
