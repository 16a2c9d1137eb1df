"""Adversarial motion correction for CG SENSE reconstructions.

Trains a U-Net generator against an encoder discriminator on the paired
corrupted/clean datasets that the mrmotion toolkit generates, then
corrects held-out reconstructions and reports PSNR/SSIM per motion
degree and inference timing.
"""

from .manifest import PairIndex, PairRecord
from .metrics import psnr, ssim
from .models import (
    DiscriminatorConfig,
    GeneratorConfig,
    build_discriminator,
    build_generator,
    correct,
)
from .tensorio import TensorFormatError, load_tensor, save_tensor
from .train import (
    TrainConfig,
    load_checkpoint,
    pretrain_generator,
    save_checkpoint,
    train_adversarial,
)
from .evaluate import evaluate, sample_grid, time_inference

__version__ = "0.1.0"

__all__ = [
    "PairIndex",
    "PairRecord",
    "psnr",
    "ssim",
    "GeneratorConfig",
    "DiscriminatorConfig",
    "build_generator",
    "build_discriminator",
    "correct",
    "TensorFormatError",
    "load_tensor",
    "save_tensor",
    "TrainConfig",
    "pretrain_generator",
    "train_adversarial",
    "save_checkpoint",
    "load_checkpoint",
    "evaluate",
    "time_inference",
    "sample_grid",
    "__version__",
]
