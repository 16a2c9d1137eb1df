"""Test imagery: Shepp-Logan phantoms and grayscale PNG ingestion.

The phantom uses the canonical ten-ellipse table (the original low
contrast intensities, not the high-contrast variant), summed and clamped
to [0, 1]. Coordinates put (0, 0) exactly at the pixel (H//2, W//2) with
the y axis pointing up, consistent with the rotation center used by the
encoding operator.
"""

import numpy as np
from PIL import Image

from .encoding import rotate_image
from .fourier import fft2c, ifft2c

__all__ = ["shepp_logan", "band_limited", "phantom_slices", "ingest_png"]

# value, semi-axis a (x), semi-axis b (y), center x0, y0, rotation phi in degrees
_ELLIPSES = (
    (2.00, 0.6900, 0.9200, 0.00, 0.0000, 0.0),
    (-0.98, 0.6624, 0.8740, 0.00, -0.0184, 0.0),
    (-0.02, 0.1100, 0.3100, 0.22, 0.0000, -18.0),
    (-0.02, 0.1600, 0.4100, -0.22, 0.0000, 18.0),
    (0.01, 0.2100, 0.2500, 0.00, 0.3500, 0.0),
    (0.01, 0.0460, 0.0460, 0.00, 0.1000, 0.0),
    (0.01, 0.0460, 0.0460, 0.00, -0.1000, 0.0),
    (0.01, 0.0460, 0.0230, -0.08, -0.6050, 0.0),
    (0.01, 0.0230, 0.0230, 0.00, -0.6060, 0.0),
    (0.01, 0.0230, 0.0460, 0.06, -0.6050, 0.0),
)


def shepp_logan(height: int, width: int, scale: float = 1.0) -> np.ndarray:
    """Canonical Shepp-Logan phantom on a height x width grid, in [0, 1].

    `scale` shrinks the whole head by that factor, leaving more empty
    border; useful where a spatially concentrated object is needed.
    """
    if height < 8 or width < 8:
        raise ValueError(f"grid must be at least 8x8, got {height}x{width}")
    if not 0.0 < scale <= 1.0:
        raise ValueError(f"scale must be in (0, 1], got {scale}")

    cols = np.arange(width, dtype=np.float64)
    rows = np.arange(height, dtype=np.float64)
    x = ((cols - width // 2) / (width / 2.0))[None, :]
    y = ((height // 2 - rows) / (height / 2.0))[:, None]

    img = np.zeros((height, width))
    for value, a, b, x0, y0, phi_deg in _ELLIPSES:
        a, b, x0, y0 = a * scale, b * scale, x0 * scale, y0 * scale
        phi = np.deg2rad(phi_deg)
        dx = x - x0
        dy = y - y0
        u = dx * np.cos(phi) + dy * np.sin(phi)
        v = -dx * np.sin(phi) + dy * np.cos(phi)
        img += value * ((u / a) ** 2 + (v / b) ** 2 <= 1.0)
    return np.clip(img, 0.0, 1.0)


def band_limited(image, sigma_fraction: float = 0.125) -> np.ndarray:
    """Low-pass an image by Gaussian apodization of its k-space.

    The weight is exp(-d^2 / (2 sigma^2)) with d the distance from the DC
    bin and sigma = sigma_fraction * min(H, W). Output is not re-clamped;
    mild over/undershoot near edges is expected and harmless.
    """
    arr = np.asarray(image)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2D image, got rank {arr.ndim}")
    if sigma_fraction <= 0:
        raise ValueError(f"sigma_fraction must be positive, got {sigma_fraction}")
    h, w = arr.shape
    sigma = sigma_fraction * min(h, w)
    dv = (np.arange(h) - h // 2)[:, None]
    du = (np.arange(w) - w // 2)[None, :]
    weight = np.exp(-(dv**2 + du**2) / (2.0 * sigma**2))
    out = ifft2c(weight * fft2c(arr))
    return out if np.iscomplexobj(arr) else out.real


def phantom_slices(count: int, height: int, width: int) -> list:
    """A deterministic family of `count` distinct phantom slices.

    Slices are the base phantom rotated through angles spanning
    [-40, 40] degrees and scaled by intensity gains spanning [0.8, 1.0],
    clipped back to [0, 1]. count = 1 returns the plain phantom.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    base = shepp_logan(height, width)
    if count == 1:
        return [base]
    angles = np.linspace(-40.0, 40.0, count)
    gains = np.linspace(0.8, 1.0, count)
    return [
        np.clip(gain * rotate_image(base, angle).real, 0.0, 1.0)
        for angle, gain in zip(angles, gains)
    ]


def ingest_png(path) -> np.ndarray:
    """Load an 8- or 16-bit grayscale PNG as a float image in [0, 1]."""
    with Image.open(path) as img:
        mode = img.mode
        arr = np.asarray(img)
    if mode == "L":
        return arr.astype(np.float64) / 255.0
    if mode in ("I", "I;16"):
        # PNG grayscale tops out at 16 bits even when decoded to mode "I"
        return arr.astype(np.float64) / 65535.0
    raise ValueError(f"unsupported PNG mode {mode!r}: expected 8- or 16-bit grayscale")
