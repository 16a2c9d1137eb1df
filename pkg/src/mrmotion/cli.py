"""Command-line interface.

Numeric results go to standard output as JSON (a bare object or array
per invocation); progress notes go to the error stream. Infinite PSNR
values are emitted as JSON Infinity tokens. Exit codes: 0 success,
1 usage error, 2 runtime error.
"""

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .cgsense import CGConfig, cg_sense
from .coils import gen_gaussian_maps
from .dataset import DatasetManifest, generate_pairs, manifest_metrics
from .encoding import interleaved_pattern
from .metrics import psnr, ssim
from .motionsim import corrupt, make_trajectory
from .phantoms import ingest_png, phantom_slices, shepp_logan
from .tensorfile import export_png, load_tensor, save_tensor

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


def _parse_size(text: str):
    parts = text.lower().split("x")
    try:
        if len(parts) == 1:
            n = int(parts[0])
            return n, n
        if len(parts) == 2:
            return int(parts[0]), int(parts[1])
    except ValueError:
        pass
    raise UsageError(f"bad --size {text!r}: expected N or HxW")


def _parse_degrees(text: str):
    try:
        return [float(p) for p in text.split(",") if p.strip() != ""]
    except ValueError:
        raise UsageError(f"bad --degrees {text!r}: expected comma-separated numbers")


def _cg_config(args) -> CGConfig:
    return CGConfig(max_iters=args.iters, tol=args.tol, lam=args.lam)


def _add_cg_flags(p) -> None:
    p.add_argument("--iters", type=int, default=20)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)


def _load_image(path) -> np.ndarray:
    path = Path(path)
    if path.suffix.lower() == ".png":
        return ingest_png(path)
    arr = load_tensor(path)
    if arr.ndim != 2:
        raise ValueError(f"{path}: expected a 2D image, got shape {arr.shape}")
    return arr


def _maps_for(args, height, width):
    if args.maps is not None:
        arr = load_tensor(args.maps)
        if arr.shape[1:] != (height, width):
            raise ValueError(
                f"maps grid {arr.shape[1:]} does not match image {height}x{width}"
            )
        return arr
    return gen_gaussian_maps(args.coils, height, width, seed=args.seed)


def _cmd_phantom(args) -> int:
    h, w = _parse_size(args.size)
    if args.count is not None:
        if args.out_dir is None:
            raise UsageError("--count requires --out-dir")
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        files = []
        for i, img in enumerate(phantom_slices(args.count, h, w)):
            path = out_dir / f"phantom{i:04d}.mrt"
            save_tensor(path, img)
            if args.png:
                export_png(img, path.with_suffix(".png"))
            files.append(str(path))
        _emit({"count": args.count, "height": h, "width": w, "files": files})
        return 0
    if args.out is None:
        raise UsageError("--out is required without --count")
    img = shepp_logan(h, w, scale=args.scale)
    save_tensor(args.out, img)
    if args.png:
        export_png(img, Path(args.out).with_suffix(".png"))
    _emit({"height": h, "width": w, "out": str(args.out)})
    return 0


def _cmd_maps(args) -> int:
    h, w = _parse_size(args.size)
    maps = gen_gaussian_maps(args.coils, h, w, args.sigma_fraction, args.seed)
    save_tensor(args.out, maps.maps)
    if args.png:
        stem = Path(args.out)
        for c in range(maps.num_coils):
            export_png(maps.maps[c], stem.with_suffix(f".c{c}.png"))
    _emit({"coils": args.coils, "height": h, "width": w, "out": str(args.out)})
    return 0


def _cmd_corrupt(args) -> int:
    image = _load_image(args.input)
    h, w = image.shape
    maps = _maps_for(args, h, w)
    pattern = interleaved_pattern(args.shots, h)
    traj = make_trajectory(args.shots, args.degree)
    ks = corrupt(image, maps, pattern, traj)
    save_tensor(args.out, ks)
    if args.png:
        export_png(np.abs(ks).sum(axis=0), Path(args.out).with_suffix(".png"))
    _emit(
        {
            "shots": args.shots,
            "degree": args.degree,
            "coils": int(np.asarray(maps).shape[0]),
            "out": str(args.out),
        }
    )
    return 0


def _cmd_reconstruct(args) -> int:
    ks = load_tensor(args.input)
    if ks.ndim != 3:
        raise ValueError(f"{args.input}: expected C x H x W k-space, got {ks.shape}")
    _, h, w = ks.shape
    maps = _maps_for(args, h, w)
    pattern = interleaved_pattern(args.shots, h)
    image, report = cg_sense(ks, maps, pattern, _cg_config(args))
    save_tensor(args.out, image)
    if args.png:
        export_png(image, Path(args.out).with_suffix(".png"))
    _emit({**report.as_dict(), "out": str(args.out)})
    return 0


def _cmd_dataset(args) -> int:
    h, w = _parse_size(args.size)
    degrees = _parse_degrees(args.degrees)
    if args.sources_dir is not None:
        paths = sorted(Path(args.sources_dir).glob("*.png"))
        if not paths:
            raise ValueError(f"no PNG files under {args.sources_dir}")
        sources = [ingest_png(p) for p in paths]
    else:
        sources = phantom_slices(args.count, h, w)
    manifest = generate_pairs(
        sources,
        degrees,
        shots=args.shots,
        coils=args.coils,
        cg=_cg_config(args),
        seed=args.seed,
        out_dir=args.out_dir,
        workers=args.workers,
    )
    _log(f"wrote {len(manifest)} pairs under {args.out_dir}")
    _emit(
        {
            "pairs": len(manifest),
            "train": len(manifest.filter(split="train")),
            "test": len(manifest.filter(split="test")),
            "degrees": manifest.degrees(),
            "manifest": str(Path(args.out_dir) / "manifest.jsonl"),
        }
    )
    return 0


def _cmd_metrics(args) -> int:
    if args.manifest is not None:
        manifest = DatasetManifest.read(args.manifest)
        _emit(manifest_metrics(manifest, split=args.split))
        return 0
    if args.ref is None or args.test is None:
        raise UsageError("need either --manifest or both --ref and --test")
    ref = _load_image(args.ref)
    test = _load_image(args.test)
    _emit({"psnr_db": psnr(ref, test), "ssim": ssim(ref, test)})
    return 0


def _cmd_bench(args) -> int:
    h, w = _parse_size(args.size)
    slices = phantom_slices(args.count, h, w)
    maps = gen_gaussian_maps(args.coils, h, w, seed=args.seed)
    pattern = interleaved_pattern(args.shots, h)
    traj = make_trajectory(args.shots, args.degree)
    cfg = _cg_config(args)
    kspaces = [corrupt(s, maps, pattern, traj) for s in slices]

    def timed_solve(ks) -> float:
        start = time.perf_counter()
        cg_sense(ks, maps, pattern, cfg)
        return time.perf_counter() - start

    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            times = list(pool.map(timed_solve, kspaces))
    else:
        times = [timed_solve(ks) for ks in kspaces]
    _emit(
        {
            "mean_seconds": float(np.mean(times)),
            "std_seconds": float(np.std(times)),
            "count": len(times),
            "size": [h, w],
            "shots": args.shots,
            "coils": args.coils,
            "degree": args.degree,
        }
    )
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="mrmotion", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("phantom", help="generate Shepp-Logan tensors and PNGs")
    p.add_argument("--size", default="128")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--png", action="store_true")
    p.set_defaults(func=_cmd_phantom)

    p = sub.add_parser("maps", help="generate coil sensitivity maps")
    p.add_argument("--coils", type=int, default=4)
    p.add_argument("--size", default="128")
    p.add_argument("--sigma-fraction", type=float, default=0.35)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--png", action="store_true")
    p.set_defaults(func=_cmd_maps)

    p = sub.add_parser("corrupt", help="motion-corrupt one image")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--maps", default=None)
    p.add_argument("--coils", type=int, default=4)
    p.add_argument("--shots", type=int, default=2)
    p.add_argument("--degree", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--png", action="store_true")
    p.set_defaults(func=_cmd_corrupt)

    p = sub.add_parser("reconstruct", help="CG SENSE on saved combined k-space")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--maps", default=None)
    p.add_argument("--coils", type=int, default=4)
    p.add_argument("--shots", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    _add_cg_flags(p)
    p.add_argument("--out", required=True)
    p.add_argument("--png", action="store_true")
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("dataset", help="generate paired corrupted/target tensors")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--degrees", required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--size", default="64")
    p.add_argument("--sources-dir", default=None)
    p.add_argument("--shots", type=int, default=2)
    p.add_argument("--coils", type=int, default=4)
    _add_cg_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_dataset)

    p = sub.add_parser("metrics", help="PSNR/SSIM of tensors or a manifest split")
    p.add_argument("--ref", default=None)
    p.add_argument("--test", default=None)
    p.add_argument("--manifest", default=None)
    p.add_argument("--split", choices=("train", "test"), default=None)
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("bench", help="time CG SENSE solves on synthetic inputs")
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--size", default="64")
    p.add_argument("--shots", type=int, default=2)
    p.add_argument("--coils", type=int, default=4)
    p.add_argument("--degree", type=float, default=10.0)
    _add_cg_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_bench)

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
