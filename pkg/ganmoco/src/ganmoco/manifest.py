"""Index over a generated dataset directory.

The generator writes manifest.jsonl with one record per corrupted/clean
pair: id, source, degree, shots, coils, split ("train" or "test"),
corrupted, target, seed, norm_peak. Paths are relative to the manifest's
directory. Only the fields this package consumes are kept; extras are
ignored so the schema can grow.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .tensorio import load_tensor

__all__ = ["PairRecord", "PairIndex"]

_REQUIRED = ("id", "degree", "split", "corrupted", "target")


@dataclass(frozen=True)
class PairRecord:
    id: str
    degree: float
    split: str
    corrupted: Path
    target: Path
    shots: int = 0
    coils: int = 0


class PairIndex:
    """Immutable list of pair records with split/degree filtering."""

    def __init__(self, records, root: Path):
        self.records = tuple(records)
        self.root = Path(root)

    @classmethod
    def read(cls, manifest_path) -> "PairIndex":
        manifest_path = Path(manifest_path)
        root = manifest_path.parent
        records = []
        with open(manifest_path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                row = json.loads(line)
                missing = [k for k in _REQUIRED if k not in row]
                if missing:
                    raise ValueError(
                        f"{manifest_path}:{line_no}: missing fields {missing}"
                    )
                records.append(PairRecord(
                    id=str(row["id"]),
                    degree=float(row["degree"]),
                    split=str(row["split"]),
                    corrupted=root / row["corrupted"],
                    target=root / row["target"],
                    shots=int(row.get("shots", 0)),
                    coils=int(row.get("coils", 0)),
                ))
        return cls(sorted(records, key=lambda r: r.id), root)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def filter(self, split=None, degree=None) -> "PairIndex":
        kept = [
            r for r in self.records
            if (split is None or r.split == split)
            and (degree is None or r.degree == degree)
        ]
        return PairIndex(kept, self.root)

    def degrees(self):
        return tuple(sorted({r.degree for r in self.records}))

    def load_pair(self, record: PairRecord):
        """Return (corrupted, target) as float32 H x W arrays."""
        corrupted = load_tensor(record.corrupted)
        target = load_tensor(record.target)
        if np.iscomplexobj(corrupted) or np.iscomplexobj(target):
            raise ValueError(f"{record.id}: expected magnitude images, got complex")
        corrupted = np.asarray(corrupted, dtype=np.float32)
        target = np.asarray(target, dtype=np.float32)
        if corrupted.ndim != 2 or corrupted.shape != target.shape:
            raise ValueError(
                f"{record.id}: pair shapes {corrupted.shape} vs {target.shape}"
            )
        return corrupted, target

    def image_shape(self):
        if not self.records:
            raise ValueError("empty index has no image shape")
        corrupted, _ = self.load_pair(self.records[0])
        return corrupted.shape
