"""Shared fixtures.

The upstream dataset generator's command line is the supported way to
produce training data, so the fixtures shell out to it; tests that only
need a manifest on disk use the local synthetic writer instead.
"""

import json
import shutil
import subprocess

import numpy as np
import pytest

from ganmoco.tensorio import save_tensor

UPSTREAM = shutil.which("mrmotion")

requires_upstream = pytest.mark.skipif(
    UPSTREAM is None, reason="mrmotion command line not installed"
)


def run_upstream(*argv):
    out = subprocess.run(
        [UPSTREAM, *map(str, argv)], capture_output=True, text=True, check=True,
    )
    return json.loads(out.stdout)


@pytest.fixture(scope="session")
def toy_manifest(tmp_path_factory):
    """200 pairs of 32x32 phantoms at 5 degrees of motion, 140/60 split."""
    if UPSTREAM is None:
        pytest.skip("mrmotion command line not installed")
    out_dir = tmp_path_factory.mktemp("toyset")
    run_upstream(
        "dataset", "--out-dir", out_dir, "--degrees", "5", "--count", "200",
        "--size", "32", "--coils", "4", "--shots", "2", "--seed", "3",
    )
    return out_dir / "manifest.jsonl"


@pytest.fixture(scope="session")
def identity_manifest(tmp_path_factory):
    """Motion-free pairs: corrupted and target are the same reconstruction."""
    if UPSTREAM is None:
        pytest.skip("mrmotion command line not installed")
    out_dir = tmp_path_factory.mktemp("idset")
    run_upstream(
        "dataset", "--out-dir", out_dir, "--degrees", "0", "--count", "120",
        "--size", "32", "--coils", "4", "--shots", "2", "--seed", "5",
    )
    return out_dir / "manifest.jsonl"


def write_synthetic_dataset(root, count=12, size=32, degrees=(0.0,),
                            noise=0.0, seed=0):
    """Write a self-contained dataset: smooth blob targets, corrupted set
    to target plus optional noise. Returns the manifest path."""
    (root / "pairs").mkdir(parents=True)
    (root / "targets").mkdir()
    grid = np.linspace(-1.0, 1.0, size)
    yy, xx = np.meshgrid(grid, grid, indexing="ij")
    records = []
    for si in range(count):
        t_rng = np.random.default_rng([seed, si])
        cy, cx = t_rng.uniform(-0.4, 0.4, 2)
        width = t_rng.uniform(0.2, 0.5)
        target = np.exp(-((yy - cy) ** 2 + (xx - cx) ** 2) / width ** 2)
        t_rel = f"targets/img{si:04d}.mrt"
        save_tensor(root / t_rel, target)
        for di, degree in enumerate(degrees):
            c_rng = np.random.default_rng([seed, si, di])
            corrupted = target + noise * c_rng.standard_normal(target.shape)
            pair_id = f"deg{di:02d}_img{si:04d}"
            c_rel = f"pairs/{pair_id}.mrt"
            save_tensor(root / c_rel, corrupted)
            records.append({
                "id": pair_id,
                "source": t_rel,
                "degree": degree,
                "shots": 0,
                "coils": 0,
                "split": "train" if si < int(count * 0.7 + 0.5) else "test",
                "corrupted": c_rel,
                "target": t_rel,
                "seed": seed,
                "norm_peak": 1.0,
            })
    manifest = root / "manifest.jsonl"
    manifest.write_text(
        "".join(json.dumps(r) + "\n" for r in records), encoding="utf-8"
    )
    return manifest
