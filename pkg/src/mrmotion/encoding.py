"""Multishot SENSE encoding: shot masks, rigid motion, coil weighting, FFT.

The forward operator maps an object x to per-shot, per-coil k-space

    y[s, c] = M_s * fft2c(C_c * rotate_image(x, theta_s, t_s))

where M_s keeps the k-space rows assigned to shot s and zeroes the rest.
The object moves between shots; the coils stay fixed in the scanner
frame. The adjoint inverts each stage in reverse order, summing coils
inside each shot and shots last, so floating-point results do not depend
on how callers parallelize.
"""

from dataclasses import dataclass, field

import numpy as np

from .fourier import fft2c, ifft2c

__all__ = [
    "SamplingPattern",
    "MotionTrajectory",
    "interleaved_pattern",
    "rotate_image",
    "forward",
    "adjoint",
]


@dataclass(frozen=True)
class SamplingPattern:
    """Assignment of each k-space row to exactly one shot."""

    num_shots: int
    height: int
    shot_of_line: np.ndarray

    def __post_init__(self):
        lines = np.asarray(self.shot_of_line, dtype=np.int64)
        if self.num_shots < 1:
            raise ValueError(f"num_shots must be >= 1, got {self.num_shots}")
        if lines.shape != (self.height,):
            raise ValueError(
                f"shot_of_line must have one entry per row, got shape {lines.shape}"
            )
        if lines.min() < 0 or lines.max() >= self.num_shots:
            raise ValueError("shot assignments out of range")
        object.__setattr__(self, "shot_of_line", lines)

    def rows_of(self, shot: int) -> np.ndarray:
        """Boolean row mask for one shot."""
        return self.shot_of_line == shot


def interleaved_pattern(num_shots: int, height: int) -> SamplingPattern:
    """Row l belongs to shot l mod num_shots."""
    if num_shots < 1:
        raise ValueError(f"num_shots must be >= 1, got {num_shots}")
    if num_shots > height:
        raise ValueError(f"num_shots {num_shots} exceeds k-space height {height}")
    lines = np.arange(height, dtype=np.int64) % num_shots
    return SamplingPattern(num_shots, height, lines)


@dataclass(frozen=True)
class MotionTrajectory:
    """Per-shot rigid-motion states: rotation in degrees, translation in pixels.

    translations[s] is (t_x, t_y): t_x shifts the object along columns,
    t_y along rows.
    """

    rotations_deg: np.ndarray
    translations: np.ndarray = field(default=None)

    def __post_init__(self):
        rot = np.atleast_1d(np.asarray(self.rotations_deg, dtype=np.float64))
        if rot.ndim != 1 or rot.size == 0:
            raise ValueError("rotations_deg must be a non-empty 1D sequence")
        if not np.all(np.isfinite(rot)):
            raise ValueError("rotation angles must be finite")
        if np.any(np.abs(rot) >= 90.0):
            raise ValueError("rotation angles must satisfy |theta| < 90 degrees")
        if self.translations is None:
            trans = np.zeros((rot.size, 2))
        else:
            trans = np.asarray(self.translations, dtype=np.float64)
        if trans.shape != (rot.size, 2):
            raise ValueError(
                f"translations must be shape ({rot.size}, 2), got {trans.shape}"
            )
        if not np.all(np.isfinite(trans)):
            raise ValueError("translations must be finite")
        object.__setattr__(self, "rotations_deg", rot)
        object.__setattr__(self, "translations", trans)

    @property
    def num_shots(self) -> int:
        return self.rotations_deg.size

    def is_static(self, shot: int) -> bool:
        return self.rotations_deg[shot] == 0.0 and not self.translations[shot].any()


def rotate_image(x, theta_deg: float, t=(0.0, 0.0)) -> np.ndarray:
    """Rigid transform by bilinear interpolation: rotate, then translate.

    Rotation is about the pixel (H//2, W//2); a positive angle carries
    pixel (i, j) toward (j, H-1-i) on a square grid. t = (t_x, t_y)
    shifts along columns and rows respectively. Samples falling outside
    the grid are zero.
    """
    x = np.asarray(x)
    if x.ndim != 2:
        raise ValueError(f"expected a 2D image, got rank {x.ndim}")
    h, w = x.shape
    cy, cx = h // 2, w // 2
    tx, ty = float(t[0]), float(t[1])

    theta = np.deg2rad(theta_deg)
    ct, st = np.cos(theta), np.sin(theta)
    # inverse map: undo the translation, then rotate the output offsets
    # back onto the source grid
    da = (np.arange(h, dtype=np.float64) - ty - cy)[:, None]
    db = (np.arange(w, dtype=np.float64) - tx - cx)[None, :]
    i = cy + ct * da - st * db
    j = cx + st * da + ct * db

    i0 = np.floor(i)
    j0 = np.floor(j)
    fi = i - i0
    fj = j - j0
    i0 = i0.astype(np.int64)
    j0 = j0.astype(np.int64)

    out_dtype = np.complex128 if np.iscomplexobj(x) else np.float64
    out = np.zeros((h, w), dtype=out_dtype)
    for di, dj, wgt in (
        (0, 0, (1.0 - fi) * (1.0 - fj)),
        (0, 1, (1.0 - fi) * fj),
        (1, 0, fi * (1.0 - fj)),
        (1, 1, fi * fj),
    ):
        ii = i0 + di
        jj = j0 + dj
        valid = (ii >= 0) & (ii < h) & (jj >= 0) & (jj < w)
        out[valid] += wgt[valid] * x[ii[valid], jj[valid]]
    return out


def _coil_stack(maps) -> np.ndarray:
    arr = np.asarray(maps, dtype=np.complex128)
    if arr.ndim != 3:
        raise ValueError(f"maps must be C x H x W, got shape {arr.shape}")
    return arr


def _check_dims(shape, maps, pattern, traj):
    h, w = shape
    if maps.shape[1:] != (h, w):
        raise ValueError(f"maps grid {maps.shape[1:]} does not match image {shape}")
    if pattern.height != h:
        raise ValueError(f"pattern height {pattern.height} does not match image {shape}")
    if traj.num_shots != pattern.num_shots:
        raise ValueError(
            f"trajectory has {traj.num_shots} shots, pattern has {pattern.num_shots}"
        )


def forward(x, maps, pattern: SamplingPattern, traj: MotionTrajectory) -> np.ndarray:
    """Apply the encoding operator; returns S x C x H x W k-space.

    Entries off a shot's row mask are exactly zero.
    """
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 2:
        raise ValueError(f"expected a 2D image, got rank {x.ndim}")
    cmap = _coil_stack(maps)
    _check_dims(x.shape, cmap, pattern, traj)

    num_c = cmap.shape[0]
    h, w = x.shape
    y = np.zeros((pattern.num_shots, num_c, h, w), dtype=np.complex128)
    for s in range(pattern.num_shots):
        if traj.is_static(s):
            moved = x
        else:
            moved = rotate_image(x, traj.rotations_deg[s], traj.translations[s])
        k = fft2c(cmap * moved[None])
        rows = pattern.rows_of(s)
        y[s][:, rows, :] = k[:, rows, :]
    return y


def adjoint(y, maps, pattern: SamplingPattern, traj: MotionTrajectory) -> np.ndarray:
    """Apply the adjoint of `forward`; returns an H x W image.

    Coils are summed within each shot, shots are summed last. With a
    zero trajectory this is the exact adjoint; with motion the rotation
    stage is inverted rather than transposed.
    """
    y = np.asarray(y, dtype=np.complex128)
    cmap = _coil_stack(maps)
    num_c, h, w = cmap.shape
    if y.shape != (pattern.num_shots, num_c, h, w):
        raise ValueError(
            f"k-space shape {y.shape} does not match "
            f"({pattern.num_shots}, {num_c}, {h}, {w})"
        )
    _check_dims((h, w), cmap, pattern, traj)

    x = np.zeros((h, w), dtype=np.complex128)
    for s in range(pattern.num_shots):
        masked = np.zeros((num_c, h, w), dtype=np.complex128)
        rows = pattern.rows_of(s)
        masked[:, rows, :] = y[s][:, rows, :]
        coil_sum = (np.conj(cmap) * ifft2c(masked)).sum(axis=0)
        if traj.is_static(s):
            x += coil_sum
        else:
            x += rotate_image(
                coil_sum, -traj.rotations_deg[s], -traj.translations[s]
            )
    return x
