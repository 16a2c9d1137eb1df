"""Command-line interface.

Reports go to standard output as a single JSON object; progress notes
go to the error stream. Exit codes: 0 success, 1 usage error, 2 runtime
failure.
"""

import argparse
import json
import sys
import time
from pathlib import Path

from .evaluate import evaluate, sample_grid, time_inference
from .manifest import PairIndex
from .models import (
    DiscriminatorConfig,
    GeneratorConfig,
    build_discriminator,
    build_generator,
)
from .train import (
    TrainConfig,
    load_checkpoint,
    pretrain_generator,
    save_checkpoint,
    train_adversarial,
)

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; this tool reserves 2 for
    runtime failures, so usage problems exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


class UsageError(ValueError):
    """Bad flag value or combination, reported with exit code 1."""


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _emit(obj) -> None:
    print(json.dumps(obj))


def _pick_blocks(height, width, requested):
    """Deepest encoder depth <= 4 that keeps the bottom feature map at
    least 4 pixels, unless the caller pinned one."""
    if requested is not None:
        return requested
    blocks = 0
    while (
        blocks < 4
        and height % 2 ** (blocks + 1) == 0
        and width % 2 ** (blocks + 1) == 0
        and min(height, width) // 2 ** (blocks + 1) >= 4
    ):
        blocks += 1
    if blocks == 0:
        raise UsageError(f"no valid block count for {height}x{width} images")
    return blocks


def _read_index(path) -> PairIndex:
    index = PairIndex.read(path)
    if len(index) == 0:
        raise UsageError(f"manifest {path} is empty")
    return index


def _load_generator(path):
    generator, _, _ = load_checkpoint(path)
    generator.eval()
    return generator


def _cmd_train(args) -> int:
    index = _read_index(args.manifest)
    height, width = index.image_shape()
    try:
        blocks = _pick_blocks(height, width, args.blocks)
        gen_cfg = GeneratorConfig(blocks, args.base_features, height, width)
        dis_cfg = DiscriminatorConfig(blocks, args.base_features, height, width)
        train_cfg = TrainConfig(
            learning_rate=args.lr,
            batch_size=args.batch_size,
            pretrain_epochs=args.pretrain_epochs,
            adversarial_epochs=args.epochs,
            pixel_loss_weight=args.lambda_pix,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    _log(f"training a {blocks}-block generator on {height}x{width} pairs")
    generator = build_generator(gen_cfg, seed=train_cfg.seed)
    discriminator = build_discriminator(dis_cfg, seed=train_cfg.seed + 1)

    started = time.perf_counter()
    pretrain_log = pretrain_generator(generator, index, train_cfg)
    _log(f"pretrain done after {pretrain_log['steps']} steps")
    adversarial_log = train_adversarial(generator, discriminator, index, train_cfg)
    elapsed = time.perf_counter() - started
    _log(
        f"adversarial done: {adversarial_log['g_updates']} generator / "
        f"{adversarial_log['d_updates']} discriminator updates"
    )

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    checkpoint = out_dir / "gan_final.pt"
    flags = {k: v for k, v in vars(args).items() if k != "func"}
    save_checkpoint(checkpoint, generator, discriminator,
                    extra={"flags": flags, "elapsed_seconds": elapsed})
    log_path = out_dir / "training_log.json"
    log_path.write_text(
        json.dumps({"pretrain": pretrain_log, "adversarial": adversarial_log},
                   indent=2) + "\n",
        encoding="utf-8",
    )
    if args.sample_png:
        generator.eval()
        sample_grid(generator, index, out_dir / "samples.png", split="test")

    last = adversarial_log["steps"][-1] if adversarial_log["steps"] else {}
    _emit({
        "checkpoint": str(checkpoint),
        "training_log": str(log_path),
        "elapsed_seconds": elapsed,
        "pretrain_final_pixel_loss": (
            pretrain_log["epochs"][-1]["pixel_loss"]
            if pretrain_log["epochs"] else None
        ),
        "d_updates": adversarial_log["d_updates"],
        "g_updates": adversarial_log["g_updates"],
        "final_step": last,
    })
    return 0


def _cmd_evaluate(args) -> int:
    index = _read_index(args.manifest)
    _emit(evaluate(_load_generator(args.checkpoint), index, split=args.split))
    return 0


def _cmd_time(args) -> int:
    index = _read_index(args.manifest)
    _emit(time_inference(_load_generator(args.checkpoint), index, split=args.split))
    return 0


def _cmd_sample(args) -> int:
    index = _read_index(args.manifest)
    sample_grid(_load_generator(args.checkpoint), index, args.out,
                split=args.split, count=args.count)
    _emit({"out": str(args.out), "count": args.count})
    return 0


def _add_model_flags(p) -> None:
    p.add_argument("--manifest", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--split", default="test", choices=("train", "test"))


def build_parser() -> _Parser:
    parser = _Parser(prog="gan-moco", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    train = sub.add_parser("train", help="pretrain and adversarially train")
    train.add_argument("--manifest", required=True)
    train.add_argument("--out-dir", required=True)
    train.add_argument("--blocks", type=int, default=None,
                       help="encoder depth; default picks the deepest valid <= 4")
    train.add_argument("--base-features", type=int, default=64)
    train.add_argument("--pretrain-epochs", type=int, default=5)
    train.add_argument("--epochs", type=int, default=20)
    train.add_argument("--batch-size", type=int, default=16)
    train.add_argument("--lr", type=float, default=1e-4)
    train.add_argument("--lambda-pix", dest="lambda_pix", type=float, default=10.0)
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--sample-png", action="store_true")
    train.set_defaults(func=_cmd_train)

    ev = sub.add_parser("evaluate", help="per-degree PSNR/SSIM on a split")
    _add_model_flags(ev)
    ev.set_defaults(func=_cmd_evaluate)

    tm = sub.add_parser("time", help="per-image inference timing")
    _add_model_flags(tm)
    tm.set_defaults(func=_cmd_time)

    sg = sub.add_parser("sample", help="corrupted/corrected/target PNG sheet")
    _add_model_flags(sg)
    sg.add_argument("--out", required=True)
    sg.add_argument("--count", type=int, default=8)
    sg.set_defaults(func=_cmd_sample)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "func", None) is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
