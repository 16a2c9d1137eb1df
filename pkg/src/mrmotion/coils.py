"""Synthetic receive-coil sensitivity maps.

Coil magnitudes are Gaussian bumps centered on points spaced around the
image boundary, each multiplied by a random linear phase ramp, and the
stack is normalized so that sum_c |C_c(p)|^2 = 1 at every pixel. That
normalization makes the fully sampled motion-free normal operator the
identity, which the reconstruction tests rely on.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["SensitivityMaps", "gen_gaussian_maps"]


@dataclass(frozen=True)
class SensitivityMaps:
    """C x H x W complex coil sensitivities, sum-of-squares normalized."""

    maps: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.maps, dtype=np.complex128)
        if arr.ndim != 3:
            raise ValueError(f"maps must be C x H x W, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("maps contain non-finite values")
        object.__setattr__(self, "maps", arr)

    @property
    def num_coils(self) -> int:
        return self.maps.shape[0]

    @property
    def height(self) -> int:
        return self.maps.shape[1]

    @property
    def width(self) -> int:
        return self.maps.shape[2]

    def __array__(self, dtype=None):
        # lets np.asarray(maps) unwrap the stack, so operators accept
        # either this type or a plain ndarray
        return self.maps if dtype is None else self.maps.astype(dtype)


def gen_gaussian_maps(
    num_coils: int,
    height: int,
    width: int,
    sigma_fraction: float = 0.35,
    seed: int = 0,
) -> SensitivityMaps:
    """Simulate `num_coils` sensitivity maps on a height x width grid.

    Coil c sits on the boundary circle at angle 2*pi*c/num_coils with
    Gaussian width sigma_fraction * min(height, width). Phase ramps are
    drawn from the seeded generator, so output is deterministic per seed.
    """
    if num_coils < 1:
        raise ValueError(f"num_coils must be >= 1, got {num_coils}")
    if not 0.0 < sigma_fraction <= 2.0:
        raise ValueError(f"sigma_fraction must be in (0, 2], got {sigma_fraction}")

    rng = np.random.default_rng(seed)
    rows = np.arange(height, dtype=np.float64)[:, None]
    cols = np.arange(width, dtype=np.float64)[None, :]
    radius = min(height, width) / 2.0
    sigma = sigma_fraction * min(height, width)

    # log-magnitudes first: normalizing in the exponent domain keeps the
    # sum-of-squares exact even when the raw Gaussians underflow
    expo = np.empty((num_coils, height, width))
    phase = np.empty((num_coils, height, width), dtype=np.complex128)
    for c in range(num_coils):
        angle = 2.0 * np.pi * c / num_coils
        cy = height / 2.0 - radius * np.sin(angle)
        cx = width / 2.0 + radius * np.cos(angle)
        expo[c] = -((rows - cy) ** 2 + (cols - cx) ** 2) / (2.0 * sigma**2)
        gy, gx = rng.uniform(-np.pi, np.pi, 2) / max(height, width)
        phase[c] = np.exp(1j * (gy * rows + gx * cols))

    expo -= expo.max(axis=0, keepdims=True)
    mag = np.exp(expo)
    mag /= np.sqrt((mag**2).sum(axis=0, keepdims=True))
    return SensitivityMaps(mag * phase)
