"""Centered orthonormal 2D Fourier transforms.

Both directions place the DC component at grid index (H//2, W//2) and use
1/sqrt(HW) scaling, so fft2c and ifft2c are unitary and mutually inverse.
"""

import numpy as np

__all__ = ["fft2c", "ifft2c"]


def fft2c(x: np.ndarray) -> np.ndarray:
    """Image space to k-space over the trailing two axes."""
    x = np.asarray(x, dtype=np.complex128)
    axes = (-2, -1)
    k = np.fft.fft2(np.fft.ifftshift(x, axes=axes), axes=axes, norm="ortho")
    return np.fft.fftshift(k, axes=axes)


def ifft2c(k: np.ndarray) -> np.ndarray:
    """k-space to image space over the trailing two axes."""
    k = np.asarray(k, dtype=np.complex128)
    axes = (-2, -1)
    x = np.fft.ifft2(np.fft.ifftshift(k, axes=axes), axes=axes, norm="ortho")
    return np.fft.fftshift(x, axes=axes)
