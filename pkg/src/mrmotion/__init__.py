"""Multishot MRI rigid-motion simulation and CG SENSE reconstruction toolkit."""

from .cgsense import CGConfig, CGReport, cg_sense, make_normal_operator
from .coils import SensitivityMaps, gen_gaussian_maps
from .dataset import DatasetManifest, ManifestRecord, generate_pairs, manifest_metrics
from .encoding import (
    MotionTrajectory,
    SamplingPattern,
    adjoint,
    forward,
    interleaved_pattern,
    rotate_image,
)
from .fourier import fft2c, ifft2c
from .metrics import psnr, ssim
from .motionsim import corrupt, make_trajectory
from .phantoms import band_limited, ingest_png, phantom_slices, shepp_logan
from .tensorfile import (
    BadDtypeError,
    BadMagicError,
    TensorFormatError,
    TruncatedPayloadError,
    export_png,
    load_tensor,
    save_tensor,
)

__version__ = "0.1.0"

__all__ = [
    "BadDtypeError",
    "BadMagicError",
    "CGConfig",
    "CGReport",
    "DatasetManifest",
    "ManifestRecord",
    "MotionTrajectory",
    "SamplingPattern",
    "SensitivityMaps",
    "TensorFormatError",
    "TruncatedPayloadError",
    "adjoint",
    "band_limited",
    "cg_sense",
    "corrupt",
    "export_png",
    "fft2c",
    "forward",
    "gen_gaussian_maps",
    "generate_pairs",
    "ifft2c",
    "ingest_png",
    "interleaved_pattern",
    "load_tensor",
    "make_normal_operator",
    "make_trajectory",
    "manifest_metrics",
    "phantom_slices",
    "psnr",
    "rotate_image",
    "save_tensor",
    "shepp_logan",
    "ssim",
    "__version__",
]
