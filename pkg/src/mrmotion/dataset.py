"""Paired dataset generation: corrupted reconstruction vs clean target.

For every (source image, degree of motion) combination the pipeline
simulates the corrupted acquisition, reconstructs it with CG SENSE, and
pairs it with the reconstruction of the motion-free acquisition of the
same source. Both images pass through the identical acquisition chain,
so motion is the only difference inside a pair. Pairs are normalized by
the target's peak, which is recorded in the manifest.

The manifest is a JSON-lines file, one record per pair, with paths
relative to its own directory. Output is a pure function of the inputs
and the seed: rerunning with the same arguments yields bit-identical
files.
"""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .cgsense import CGConfig, cg_sense
from .coils import gen_gaussian_maps
from .encoding import interleaved_pattern
from .metrics import psnr, ssim
from .motionsim import corrupt, make_trajectory
from .tensorfile import load_tensor, save_tensor

__all__ = [
    "ManifestRecord",
    "DatasetManifest",
    "generate_pairs",
    "manifest_metrics",
]

MANIFEST_NAME = "manifest.jsonl"

_FIELDS = (
    "id",
    "source",
    "degree",
    "shots",
    "coils",
    "split",
    "corrupted",
    "target",
    "seed",
    "norm_peak",
)


@dataclass(frozen=True)
class ManifestRecord:
    id: str
    source: str
    degree: float
    shots: int
    coils: int
    split: str
    corrupted: str
    target: str
    seed: int
    norm_peak: float

    def as_dict(self) -> dict:
        d = asdict(self)
        return {k: d[k] for k in _FIELDS}


@dataclass(frozen=True)
class DatasetManifest:
    """Record list plus the directory that relative paths resolve against."""

    records: tuple
    root: Path = None

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def filter(self, split: str = None, degree: float = None) -> tuple:
        out = self.records
        if split is not None:
            out = tuple(r for r in out if r.split == split)
        if degree is not None:
            out = tuple(r for r in out if r.degree == degree)
        return out

    def degrees(self) -> tuple:
        seen = []
        for r in self.records:
            if r.degree not in seen:
                seen.append(r.degree)
        return tuple(sorted(seen))

    def resolve(self, relpath: str) -> Path:
        if self.root is None:
            return Path(relpath)
        return Path(self.root) / relpath

    def load(self, relpath: str) -> np.ndarray:
        return load_tensor(self.resolve(relpath))

    def save(self, path) -> None:
        path = Path(path)
        lines = [json.dumps(r.as_dict()) for r in self.records]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def read(cls, path) -> "DatasetManifest":
        path = Path(path)
        records = []
        with path.open(encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                raw = json.loads(line)
                records.append(ManifestRecord(**{k: raw[k] for k in _FIELDS}))
        return cls(tuple(records), root=path.parent)

    def verify(self) -> None:
        """Load every referenced tensor; raises if any is missing or bad."""
        for r in self.records:
            for rel in (r.source, r.corrupted, r.target):
                self.load(rel)


def _train_count(n: int) -> int:
    # plain half-up rounding; banker's rounding would send 2.5 to 2
    return int(n * 0.7 + 0.5)


def generate_pairs(
    sources,
    degrees,
    shots: int,
    coils: int,
    cg: CGConfig = None,
    seed: int = 0,
    out_dir=".",
    workers: int = 1,
) -> DatasetManifest:
    """Generate corrupted/target pairs for every source and degree.

    Writes source, target, and corrupted tensors plus manifest.jsonl
    under out_dir and returns the manifest. The train/test split is a
    seeded 70/30 shuffle within each degree bucket.
    """
    sources = [np.asarray(s, dtype=np.float64) for s in sources]
    if not sources:
        raise ValueError("sources is empty")
    degrees = [float(d) for d in degrees]
    if not degrees:
        raise ValueError("degrees is empty")
    if len(sources) > 9999 or len(degrees) > 99:
        raise ValueError("id scheme supports at most 9999 sources and 99 degrees")
    if seed < 0:
        raise ValueError(f"seed must be >= 0, got {seed}")
    shape = sources[0].shape
    for i, s in enumerate(sources):
        if s.ndim != 2 or s.shape != shape:
            raise ValueError(f"source {i} has shape {s.shape}, expected {shape}")
        if not np.all(np.isfinite(s)):
            raise ValueError(f"source {i} contains non-finite values")
    if cg is None:
        cg = CGConfig()

    h, w = shape
    maps = gen_gaussian_maps(coils, h, w, seed=seed)
    pattern = interleaved_pattern(shots, h)

    out_dir = Path(out_dir)
    for sub in ("sources", "targets", "pairs"):
        (out_dir / sub).mkdir(parents=True, exist_ok=True)

    def recon_magnitude(job) -> np.ndarray:
        pair_id, src, degree = job
        try:
            ks = corrupt(src, maps, pattern, make_trajectory(shots, degree))
            image, _ = cg_sense(ks, maps, pattern, cg)
        except Exception as exc:
            raise RuntimeError(f"solve failed for {pair_id}: {exc}") from exc
        return np.abs(image)

    target_jobs = [
        (f"target img{si:04d}", src, 0.0) for si, src in enumerate(sources)
    ]
    pair_jobs = [
        (f"deg{di:02d}_img{si:04d}", sources[si], degree)
        for di, degree in enumerate(degrees)
        for si in range(len(sources))
    ]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            targets = list(pool.map(recon_magnitude, target_jobs))
            raw_pairs = list(pool.map(recon_magnitude, pair_jobs))
    else:
        targets = [recon_magnitude(j) for j in target_jobs]
        raw_pairs = [recon_magnitude(j) for j in pair_jobs]

    peaks = []
    for si, (src, target) in enumerate(zip(sources, targets)):
        peak = float(target.max())
        if peak <= 0.0:
            raise RuntimeError(f"target peak is zero for img{si:04d}")
        peaks.append(peak)
        save_tensor(out_dir / "sources" / f"img{si:04d}.mrt", src)
        save_tensor(out_dir / "targets" / f"img{si:04d}.mrt", target / peak)

    # seeded shuffle per degree bucket, 70% train (half-up)
    n = len(sources)
    split_of = {}
    for di in range(len(degrees)):
        order = np.random.default_rng([seed, di]).permutation(n)
        train = set(order[: _train_count(n)].tolist())
        for si in range(n):
            split_of[(di, si)] = "train" if si in train else "test"

    records = []
    job_iter = iter(raw_pairs)
    for di, degree in enumerate(degrees):
        for si in range(n):
            mag = next(job_iter)
            pair_id = f"deg{di:02d}_img{si:04d}"
            rel = f"pairs/{pair_id}.mrt"
            save_tensor(out_dir / rel, mag / peaks[si])
            records.append(
                ManifestRecord(
                    id=pair_id,
                    source=f"sources/img{si:04d}.mrt",
                    degree=degree,
                    shots=shots,
                    coils=coils,
                    split=split_of[(di, si)],
                    corrupted=rel,
                    target=f"targets/img{si:04d}.mrt",
                    seed=seed,
                    norm_peak=peaks[si],
                )
            )

    records.sort(key=lambda r: r.id)
    manifest = DatasetManifest(tuple(records), root=out_dir)
    manifest.save(out_dir / MANIFEST_NAME)
    return manifest


def manifest_metrics(manifest: DatasetManifest, split: str = None) -> list:
    """Per-degree mean PSNR/SSIM of corrupted vs target over a split.

    Returns one dict per degree: {"degree", "psnr_db", "ssim", "n_images"}.
    """
    out = []
    for degree in manifest.degrees():
        records = manifest.filter(split=split, degree=degree)
        if not records:
            continue
        psnrs = []
        ssims = []
        for r in records:
            target = manifest.load(r.target)
            corrupted = manifest.load(r.corrupted)
            psnrs.append(psnr(target, corrupted))
            ssims.append(ssim(target, corrupted))
        out.append(
            {
                "degree": degree,
                "psnr_db": float(np.mean(psnrs)),
                "ssim": float(np.mean(ssims)),
                "n_images": len(records),
            }
        )
    return out
