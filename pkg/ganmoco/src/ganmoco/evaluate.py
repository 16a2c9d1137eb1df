"""Evaluation, inference timing, and sample sheets for trained models."""

import json
import shutil
import subprocess
import time

import numpy as np
from PIL import Image

from .manifest import PairIndex
from .metrics import psnr, ssim
from .models import correct

__all__ = ["evaluate", "time_inference", "sample_grid"]


def evaluate(generator, index: PairIndex, split: str = "test") -> dict:
    """Mean PSNR and SSIM of corrected and of raw corrupted images vs the
    targets, one record per motion degree."""
    subset = index.filter(split=split)
    if len(subset) == 0:
        raise ValueError(f"split {split!r} is empty")
    records = []
    for degree in subset.degrees():
        bucket = subset.filter(degree=degree)
        scores = {"psnr": [], "ssim": [], "input_psnr": [], "input_ssim": []}
        for record in bucket:
            corrupted, target = index.load_pair(record)
            corrected = correct(generator, corrupted)
            scores["psnr"].append(psnr(target, corrected))
            scores["ssim"].append(ssim(target, corrected))
            scores["input_psnr"].append(psnr(target, corrupted))
            scores["input_ssim"].append(ssim(target, corrupted))
        records.append({
            "degree": degree,
            **{key: float(np.mean(vals)) for key, vals in scores.items()},
            "n": len(bucket),
        })
    return {"split": split, "degrees": records}


def _primary_cli_recon_seconds(shots, coils, size, count=3):
    """Per-image CG reconstruction time from the dataset generator's own
    benchmark, when its command line is on PATH. Returns None otherwise."""
    if shutil.which("mrmotion") is None:
        return None
    try:
        out = subprocess.run(
            ["mrmotion", "bench", "--count", str(count), "--size", str(size),
             "--shots", str(shots), "--coils", str(coils)],
            capture_output=True, text=True, timeout=300, check=True,
        )
        return float(json.loads(out.stdout)["mean_seconds"])
    except (subprocess.SubprocessError, ValueError, KeyError):
        return None


def time_inference(generator, index: PairIndex, split: str = "test") -> dict:
    """Mean forward-pass seconds per image over the split, plus combined
    reconstruction and correction time when the generator's upstream
    benchmark is available."""
    subset = index.filter(split=split)
    if len(subset) == 0:
        raise ValueError(f"split {split!r} is empty")
    images = [index.load_pair(record)[0] for record in subset]
    correct(generator, images[0])  # warm up lazy kernels
    start = time.perf_counter()
    for image in images:
        correct(generator, image)
    g_seconds = (time.perf_counter() - start) / len(images)

    report = {"g_seconds_per_image": g_seconds, "n_images": len(images)}
    first = subset.records[0]
    if first.shots and first.coils:
        recon = _primary_cli_recon_seconds(
            first.shots, first.coils, images[0].shape[0]
        )
        if recon is not None:
            report["recon_seconds_per_image"] = recon
            report["total_seconds_per_image"] = recon + g_seconds
    return report


def sample_grid(generator, index: PairIndex, path, split: str = "test",
                count: int = 8) -> None:
    """Write a PNG sheet: corrupted row, corrected row, target row."""
    subset = index.filter(split=split)
    if len(subset) == 0:
        raise ValueError(f"split {split!r} is empty")
    columns = []
    for record in subset.records[:count]:
        corrupted, target = index.load_pair(record)
        corrected = correct(generator, corrupted)
        columns.append(np.concatenate([corrupted, corrected, target], axis=0))
    sheet = np.concatenate(columns, axis=1)
    gray = np.rint(np.clip(sheet, 0.0, 1.0) * 255.0).astype(np.uint8)
    Image.fromarray(gray, mode="L").save(path, format="PNG")
