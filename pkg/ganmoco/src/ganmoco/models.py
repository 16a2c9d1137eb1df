"""Generator and discriminator architectures.

The generator is a U-Net: B encoder blocks of five 3x3 convolutions each
(the middle one at half width, the last at stride 2), mirrored by B
decoder blocks of five transposed convolutions with skip connections
joining equal spatial sizes, then a sigmoid head. The discriminator is
the same encoder stack with a global average pool and a single-unit
probability head. Block count, widths, kernel size, normalization, and
activations are this artifact's choices; the five-conv block with a
half-width middle layer and the encoder reuse are fixed structure.
"""

from dataclasses import dataclass

import numpy as np
import torch
from torch import nn

__all__ = [
    "GeneratorConfig",
    "DiscriminatorConfig",
    "build_generator",
    "build_discriminator",
    "correct",
]

_MIN_FEATURE_SIZE = 4


def _check_grid(num_blocks, base_features, height, width):
    if num_blocks < 1:
        raise ValueError(f"num_blocks must be >= 1, got {num_blocks}")
    if base_features < 2 or base_features % 2:
        raise ValueError(
            f"base_features must be even and >= 2, got {base_features}"
        )
    factor = 2 ** num_blocks
    if height % factor or width % factor:
        raise ValueError(
            f"{height}x{width} input is not divisible by 2^{num_blocks}"
        )
    if min(height, width) // factor < _MIN_FEATURE_SIZE:
        raise ValueError(
            f"{height}x{width} with {num_blocks} blocks leaves a "
            f"{min(height, width) // factor}-pixel bottom feature map, "
            f"minimum is {_MIN_FEATURE_SIZE}"
        )


@dataclass(frozen=True)
class GeneratorConfig:
    """num_blocks encoder/decoder levels, base_features at the first level
    doubling per level; height/width pin the intended input size."""

    num_blocks: int = 4
    base_features: int = 64
    height: int = 256
    width: int = 256

    def __post_init__(self):
        _check_grid(self.num_blocks, self.base_features, self.height, self.width)

    @property
    def widths(self):
        return tuple(self.base_features * 2 ** i for i in range(self.num_blocks))


@dataclass(frozen=True)
class DiscriminatorConfig:
    num_blocks: int = 4
    base_features: int = 64
    height: int = 256
    width: int = 256

    def __post_init__(self):
        _check_grid(self.num_blocks, self.base_features, self.height, self.width)

    @property
    def widths(self):
        return tuple(self.base_features * 2 ** i for i in range(self.num_blocks))


def _conv(in_ch, out_ch, stride=1):
    return nn.Conv2d(in_ch, out_ch, kernel_size=3, stride=stride, padding=1)


def _tconv(in_ch, out_ch, stride=1):
    # output_padding recovers the even target size when upsampling
    return nn.ConvTranspose2d(
        in_ch, out_ch, kernel_size=3, stride=stride, padding=1,
        output_padding=stride - 1,
    )


class _EncoderBlock(nn.Module):
    """Five convolutions: width, width, width/2, width, then a stride-2
    width conv that halves the grid. Exposes the pre-downsample features
    as the skip tensor."""

    def __init__(self, in_ch, width):
        super().__init__()
        half = width // 2
        def stage(i, o, stride=1):
            return nn.Sequential(
                _conv(i, o, stride),
                nn.InstanceNorm2d(o, affine=True),
                nn.LeakyReLU(0.2, inplace=True),
            )
        self.pre = nn.Sequential(
            stage(in_ch, width),
            stage(width, width),
            stage(width, half),
            stage(half, width),
        )
        self.down = stage(width, width, stride=2)

    def forward(self, x):
        skip = self.pre(x)
        return self.down(skip), skip


class _DecoderBlock(nn.Module):
    """Mirror of the encoder block: a stride-2 transposed convolution
    doubles the grid, the skip tensor is concatenated, then four
    stride-1 transposed convolutions with the half-width middle."""

    def __init__(self, in_ch, width, out_ch):
        super().__init__()
        half = width // 2
        def stage(i, o, stride=1):
            return nn.Sequential(
                _tconv(i, o, stride),
                nn.InstanceNorm2d(o, affine=True),
                nn.ReLU(inplace=True),
            )
        self.up = stage(in_ch, width, stride=2)
        self.post = nn.Sequential(
            stage(2 * width, width),
            stage(width, half),
            stage(half, width),
            stage(width, out_ch),
        )

    def forward(self, x, skip):
        x = self.up(x)
        if x.shape[-2:] != skip.shape[-2:]:
            raise RuntimeError(
                f"skip size {tuple(skip.shape[-2:])} does not match "
                f"upsampled size {tuple(x.shape[-2:])}"
            )
        return self.post(torch.cat([x, skip], dim=1))


class _Encoder(nn.Module):
    def __init__(self, widths):
        super().__init__()
        chans = [1] + list(widths[:-1])
        self.blocks = nn.ModuleList(
            _EncoderBlock(i, w) for i, w in zip(chans, widths)
        )

    def forward(self, x):
        skips = []
        for block in self.blocks:
            x, skip = block(x)
            skips.append(skip)
        return x, skips


class Generator(nn.Module):
    def __init__(self, config: GeneratorConfig):
        super().__init__()
        self.config = config
        widths = config.widths
        self.encoder = _Encoder(widths)
        # level i consumes widths[i] channels whether they come from the
        # encoder output (deepest level) or the previous decoder block
        self.decoder = nn.ModuleList(
            _DecoderBlock(in_ch=widths[i], width=widths[i],
                          out_ch=widths[max(i - 1, 0)])
            for i in reversed(range(len(widths)))
        )
        self.head = nn.Sequential(_conv(widths[0], 1), nn.Sigmoid())

    def forward(self, x):
        if x.ndim != 4 or x.shape[1] != 1:
            raise ValueError(f"expected N x 1 x H x W input, got {tuple(x.shape)}")
        x, skips = self.encoder(x)
        for block, skip in zip(self.decoder, reversed(skips)):
            x = block(x, skip)
        return self.head(x)


class Discriminator(nn.Module):
    def __init__(self, config: DiscriminatorConfig):
        super().__init__()
        self.config = config
        self.encoder = _Encoder(config.widths)
        self.pool = nn.AdaptiveAvgPool2d(1)
        self.head = nn.Sequential(nn.Linear(config.widths[-1], 1), nn.Sigmoid())

    def forward(self, x):
        if x.ndim != 4 or x.shape[1] != 1:
            raise ValueError(f"expected N x 1 x H x W input, got {tuple(x.shape)}")
        features, _ = self.encoder(x)
        pooled = self.pool(features).flatten(start_dim=1)
        return self.head(pooled).squeeze(dim=1)


def build_generator(config: GeneratorConfig, seed: int = 0) -> Generator:
    """Construct a generator with seed-determined initial parameters."""
    torch.manual_seed(seed)
    return Generator(config)


def build_discriminator(config: DiscriminatorConfig, seed: int = 0) -> Discriminator:
    torch.manual_seed(seed)
    return Discriminator(config)


def correct(generator, images) -> np.ndarray:
    """Run the generator on corrupted magnitude images.

    Accepts a single H x W array or an N x H x W batch; returns float32
    of the same shape, clamped to [0, 1]. The spatial size must match
    the generator's configured grid.
    """
    arr = np.asarray(images, dtype=np.float32)
    single = arr.ndim == 2
    if single:
        arr = arr[None]
    if arr.ndim != 3:
        raise ValueError(f"expected H x W or N x H x W, got shape {arr.shape}")
    cfg = generator.config
    if arr.shape[-2:] != (cfg.height, cfg.width):
        raise ValueError(
            f"images are {arr.shape[-2:]}, generator expects "
            f"{cfg.height}x{cfg.width}"
        )
    with torch.no_grad():
        out = generator(torch.from_numpy(arr).unsqueeze(1))
    result = out.squeeze(1).clamp_(0.0, 1.0).numpy().astype(np.float32)
    return result[0] if single else result
