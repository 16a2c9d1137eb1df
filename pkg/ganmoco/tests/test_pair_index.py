"""Manifest parsing, filtering, and pair loading."""

import json

import numpy as np
import pytest

from ganmoco.manifest import PairIndex
from ganmoco.tensorio import save_tensor

from conftest import write_synthetic_dataset


def test_read_filter_and_load(tmp_path):
    manifest = write_synthetic_dataset(
        tmp_path, count=10, size=32, degrees=(0.0, 7.0), seed=1
    )
    index = PairIndex.read(manifest)
    assert len(index) == 20
    assert index.degrees() == (0.0, 7.0)
    assert [r.id for r in index] == sorted(r.id for r in index)

    train = index.filter(split="train")
    test = index.filter(split="test")
    assert len(train) == 14 and len(test) == 6
    assert len(index.filter(split="test", degree=7.0)) == 3

    corrupted, target = index.load_pair(index.records[0])
    assert corrupted.shape == (32, 32) and target.shape == (32, 32)
    assert corrupted.dtype == np.float32 and target.dtype == np.float32
    assert index.image_shape() == (32, 32)


def test_paths_resolve_relative_to_manifest(tmp_path):
    manifest = write_synthetic_dataset(tmp_path, count=2, size=16)
    index = PairIndex.read(manifest)
    for record in index:
        assert record.corrupted.is_file()
        assert record.target.is_file()


def test_missing_field_rejected(tmp_path):
    manifest = tmp_path / "manifest.jsonl"
    manifest.write_text(json.dumps({"id": "a", "degree": 1.0}) + "\n")
    with pytest.raises(ValueError, match="missing fields"):
        PairIndex.read(manifest)


def test_unknown_fields_tolerated(tmp_path):
    save_tensor(tmp_path / "img.mrt", np.zeros((16, 16)))
    row = {
        "id": "a", "degree": 1.0, "split": "train",
        "corrupted": "img.mrt", "target": "img.mrt",
        "someday": "a new field",
    }
    manifest = tmp_path / "manifest.jsonl"
    manifest.write_text(json.dumps(row) + "\n")
    index = PairIndex.read(manifest)
    assert len(index) == 1
    assert index.records[0].shots == 0


def test_complex_pair_rejected(tmp_path):
    save_tensor(tmp_path / "img.mrt", np.zeros((16, 16), dtype=complex))
    row = {
        "id": "a", "degree": 0.0, "split": "train",
        "corrupted": "img.mrt", "target": "img.mrt",
    }
    manifest = tmp_path / "manifest.jsonl"
    manifest.write_text(json.dumps(row) + "\n")
    index = PairIndex.read(manifest)
    with pytest.raises(ValueError, match="complex"):
        index.load_pair(index.records[0])


def test_empty_index_has_no_shape(tmp_path):
    manifest = tmp_path / "manifest.jsonl"
    manifest.write_text("")
    index = PairIndex.read(manifest)
    assert len(index) == 0
    with pytest.raises(ValueError):
        index.image_shape()
