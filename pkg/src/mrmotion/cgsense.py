"""Conjugate-gradient SENSE reconstruction of combined k-space.

Solves (E0^H E0 + lambda I) x = E0^H y where E0 is the static-object
encoding operator. The shot masks partition the k-space rows, so after
combination E0 applies every coil weight and a full FFT; no rows are
lost. With sum-of-squares normalized maps and lambda = 0 the system
matrix is the identity and CG converges immediately, which serves as an
analytic oracle in the tests.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .encoding import SamplingPattern
from .fourier import fft2c, ifft2c

__all__ = ["CGConfig", "CGReport", "make_normal_operator", "cg_sense"]


@dataclass(frozen=True)
class CGConfig:
    max_iters: int = 20
    tol: float = 1e-8
    lam: float = 0.0

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")


@dataclass(frozen=True)
class CGReport:
    """Solve diagnostics: iteration count, per-iteration relative residuals,
    wall time in seconds."""

    iterations: int
    residuals: tuple = field(default=())
    wall_time_seconds: float = 0.0

    def as_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "residuals": list(self.residuals),
            "wall_time_seconds": self.wall_time_seconds,
        }


def _coil_stack(maps) -> np.ndarray:
    arr = np.asarray(maps, dtype=np.complex128)
    if arr.ndim != 3:
        raise ValueError(f"maps must be C x H x W, got shape {arr.shape}")
    return arr


def make_normal_operator(maps, pattern: SamplingPattern, lam: float = 0.0):
    """Return a callable applying x -> (E0^H E0 + lam I) x on H x W images."""
    cmap = _coil_stack(maps)
    _, h, w = cmap.shape
    if pattern.height != h:
        raise ValueError(f"pattern height {pattern.height} does not match maps {h}")
    conj = np.conj(cmap)

    def apply(x: np.ndarray) -> np.ndarray:
        # masks partition the rows, so the combined per-shot restriction
        # keeps the full k-space of every coil
        ax = (conj * ifft2c(fft2c(cmap * x[None]))).sum(axis=0)
        return ax + lam * x if lam else ax

    return apply


def cg_sense(y, maps, pattern: SamplingPattern, config: CGConfig = None):
    """Reconstruct combined k-space y (C x H x W) -> (image, CGReport).

    Starts from zero and stops when the relative residual of the normal
    equations drops to config.tol or after config.max_iters iterations.
    """
    if config is None:
        config = CGConfig()
    y = np.asarray(y, dtype=np.complex128)
    cmap = _coil_stack(maps)
    if y.shape != cmap.shape:
        raise ValueError(f"k-space shape {y.shape} does not match maps {cmap.shape}")
    if pattern.height != cmap.shape[1]:
        raise ValueError(
            f"pattern height {pattern.height} does not match maps {cmap.shape[1]}"
        )
    if not np.all(np.isfinite(y)):
        raise ValueError("k-space contains non-finite values")

    start = time.perf_counter()
    operator = make_normal_operator(cmap, pattern, config.lam)
    b = (np.conj(cmap) * ifft2c(y)).sum(axis=0)

    x = np.zeros_like(b)
    r = b.copy()
    rs = np.vdot(r, r).real
    norm_b = np.sqrt(rs)
    if norm_b == 0.0:
        return x, CGReport(0, (), time.perf_counter() - start)

    p = r.copy()
    residuals = []
    iterations = 0
    for _ in range(config.max_iters):
        ap = operator(p)
        alpha = rs / np.vdot(p, ap).real
        x += alpha * p
        r -= alpha * ap
        rs_next = np.vdot(r, r).real
        iterations += 1
        rel = np.sqrt(rs_next) / norm_b
        residuals.append(float(rel))
        if rel <= config.tol:
            break
        p = r + (rs_next / rs) * p
        rs = rs_next

    report = CGReport(iterations, tuple(residuals), time.perf_counter() - start)
    return x, report
