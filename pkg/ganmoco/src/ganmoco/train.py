"""Pretraining and adversarial training loops.

The generator is first pretrained on mean absolute pixel error, then
trained against the discriminator on the minimax objective

    min_G max_D  E_x[log D(x)] + E_y[log(1 - D(G(y)))]

with the generator additionally pulled toward the target by
pixel_loss_weight times the absolute pixel error; weight 0 recovers the
bare adversarial objective. Every generator update is preceded by
exactly two discriminator updates. Log arguments are clamped to
[1e-7, 1 - 1e-7] so saturated discriminator outputs cannot produce
infinities; any non-finite loss still aborts the run.
"""

from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
import torch

from .manifest import PairIndex
from .models import (
    Discriminator,
    DiscriminatorConfig,
    Generator,
    GeneratorConfig,
)

__all__ = [
    "TrainConfig",
    "pretrain_generator",
    "train_adversarial",
    "save_checkpoint",
    "load_checkpoint",
]

_LOG_EPS = 1e-7


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-4
    batch_size: int = 16
    d_steps_per_g_step: int = 2
    pretrain_epochs: int = 5
    adversarial_epochs: int = 20
    pixel_loss_weight: float = 10.0
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.d_steps_per_g_step < 1:
            raise ValueError(
                f"d_steps_per_g_step must be >= 1, got {self.d_steps_per_g_step}"
            )
        if self.pretrain_epochs < 0 or self.adversarial_epochs < 0:
            raise ValueError("epoch counts must be >= 0")
        if self.pixel_loss_weight < 0:
            raise ValueError(
                f"pixel_loss_weight must be >= 0, got {self.pixel_loss_weight}"
            )


def _train_tensors(index: PairIndex):
    train = index.filter(split="train")
    if len(train) == 0:
        raise ValueError("manifest has no train pairs")
    corrupted = []
    targets = []
    for record in train:
        c, t = index.load_pair(record)
        corrupted.append(c)
        targets.append(t)

    def stack(arrs):
        return torch.from_numpy(np.stack(arrs)).unsqueeze(1)

    return stack(corrupted), stack(targets)


def _batches(n, batch_size, rng):
    order = rng.permutation(n)
    return [
        torch.from_numpy(order[start:start + batch_size].copy())
        for start in range(0, n, batch_size)
    ]


def _clamped_log(p):
    return torch.log(p.clamp(_LOG_EPS, 1.0 - _LOG_EPS))


def _guard(name, value, step):
    if not torch.isfinite(value):
        raise RuntimeError(f"{name} diverged to {value.item()} at step {step}")


def pretrain_generator(generator, index: PairIndex, config: TrainConfig = None):
    """Minimize mean absolute error of generator(corrupted) vs target.

    Returns a log dict with one entry per epoch; the per-epoch value is
    the mean over that epoch's batches.
    """
    if config is None:
        config = TrainConfig()
    corrupted, targets = _train_tensors(index)
    optimizer = torch.optim.RMSprop(generator.parameters(), lr=config.learning_rate)
    epochs = []
    step = 0
    for epoch in range(config.pretrain_epochs):
        rng = np.random.default_rng([config.seed, 1, epoch])
        losses = []
        for batch in _batches(len(corrupted), config.batch_size, rng):
            optimizer.zero_grad()
            loss = (generator(corrupted[batch]) - targets[batch]).abs().mean()
            _guard("pretrain pixel loss", loss, step)
            loss.backward()
            optimizer.step()
            losses.append(loss.item())
            step += 1
        epochs.append({"epoch": epoch, "pixel_loss": float(np.mean(losses))})
    return {"phase": "pretrain", "epochs": epochs, "steps": step}


def train_adversarial(generator, discriminator, index: PairIndex,
                      config: TrainConfig = None):
    """Alternate discriminator and generator updates on the train split.

    Each round runs d_steps_per_g_step discriminator updates, then one
    generator update, so the final counters always hold
    d_updates == d_steps_per_g_step * g_updates. Returns a log with per
    step losses and the counters.
    """
    if config is None:
        config = TrainConfig()
    corrupted, targets = _train_tensors(index)
    n = len(corrupted)
    g_opt = torch.optim.RMSprop(generator.parameters(), lr=config.learning_rate)
    d_opt = torch.optim.RMSprop(discriminator.parameters(), lr=config.learning_rate)

    steps = []
    d_updates = 0
    g_updates = 0
    for epoch in range(config.adversarial_epochs):
        g_rng = np.random.default_rng([config.seed, 2, epoch])
        d_rng = np.random.default_rng([config.seed, 3, epoch])
        for g_batch in _batches(n, config.batch_size, g_rng):
            for _ in range(config.d_steps_per_g_step):
                batch = torch.from_numpy(
                    d_rng.integers(0, n, size=config.batch_size)
                )
                d_opt.zero_grad()
                with torch.no_grad():
                    fake = generator(corrupted[batch])
                d_loss = -(
                    _clamped_log(discriminator(targets[batch])).mean()
                    + _clamped_log(1.0 - discriminator(fake)).mean()
                )
                _guard("discriminator loss", d_loss, d_updates)
                d_loss.backward()
                d_opt.step()
                d_updates += 1

            g_opt.zero_grad()
            fake = generator(corrupted[g_batch])
            g_adv = _clamped_log(1.0 - discriminator(fake)).mean()
            g_pix = (fake - targets[g_batch]).abs().mean()
            _guard("generator adversarial loss", g_adv, g_updates)
            _guard("generator pixel loss", g_pix, g_updates)
            (g_adv + config.pixel_loss_weight * g_pix).backward()
            g_opt.step()
            g_updates += 1
            steps.append({
                "step": g_updates,
                "d_loss": d_loss.item(),
                "g_adv_loss": g_adv.item(),
                "g_pixel_loss": g_pix.item(),
            })
    return {
        "phase": "adversarial",
        "steps": steps,
        "d_updates": d_updates,
        "g_updates": g_updates,
    }


def save_checkpoint(path, generator, discriminator=None, extra=None):
    """Write a checkpoint; the convention is <tag>_epoch<NNN>.pt for
    intermediate saves and <tag>_final.pt for the trained model."""
    payload = {
        "generator_state": generator.state_dict(),
        "generator_config": asdict(generator.config),
    }
    if discriminator is not None:
        payload["discriminator_state"] = discriminator.state_dict()
        payload["discriminator_config"] = asdict(discriminator.config)
    if extra:
        payload["extra"] = extra
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    torch.save(payload, path)


def load_checkpoint(path):
    """Return (generator, discriminator or None, extra dict)."""
    payload = torch.load(path, map_location="cpu", weights_only=True)
    generator = Generator(GeneratorConfig(**payload["generator_config"]))
    generator.load_state_dict(payload["generator_state"])
    discriminator = None
    if "discriminator_state" in payload:
        discriminator = Discriminator(
            DiscriminatorConfig(**payload["discriminator_config"])
        )
        discriminator.load_state_dict(payload["discriminator_state"])
    return generator, discriminator, payload.get("extra", {})
