"""Evaluation, timing, sample sheets, and the command line."""

import json
import math

import numpy as np
import pytest
import torch
from PIL import Image
from torch import nn

from ganmoco.cli import main
from ganmoco.evaluate import evaluate, sample_grid, time_inference
from ganmoco.manifest import PairIndex
from ganmoco.models import GeneratorConfig, build_generator

from conftest import write_synthetic_dataset


class _IdentityGenerator(nn.Module):
    def __init__(self, height, width):
        super().__init__()
        self.config = GeneratorConfig(2, 8, height, width)

    def forward(self, x):
        return x


def _index(tmp_path, **kwargs):
    return PairIndex.read(write_synthetic_dataset(tmp_path, **kwargs))


class TestEvaluate:
    def test_identity_model_on_identity_pairs_scores_perfectly(self, tmp_path):
        index = _index(tmp_path, count=4, size=32, noise=0.0)
        report = evaluate(_IdentityGenerator(32, 32), index, split="test")
        assert report["split"] == "test"
        (record,) = report["degrees"]
        assert record["ssim"] == 1.0
        assert record["psnr"] == math.inf
        assert record["n"] == 1

    def test_one_record_per_degree(self, tmp_path):
        index = _index(tmp_path, count=6, size=32, degrees=(0.0, 7.0), noise=0.05)
        report = evaluate(_IdentityGenerator(32, 32), index, split="train")
        assert [r["degree"] for r in report["degrees"]] == [0.0, 7.0]
        for record in report["degrees"]:
            assert record["n"] == 4
            assert record["input_psnr"] > 0
            assert -1.0 <= record["input_ssim"] <= 1.0

    def test_empty_split_rejected(self, tmp_path):
        index = _index(tmp_path, count=1, size=32)  # single pair lands in train
        with pytest.raises(ValueError, match="empty"):
            evaluate(_IdentityGenerator(32, 32), index, split="test")


class TestTiming:
    def test_report_schema(self, tmp_path):
        index = _index(tmp_path, count=4, size=32)
        report = time_inference(_IdentityGenerator(32, 32), index, split="test")
        assert report["g_seconds_per_image"] > 0
        assert report["n_images"] == 1
        # synthetic manifests carry no acquisition settings, so no
        # reconstruction timing is attempted
        assert "recon_seconds_per_image" not in report


class TestSampleGrid:
    def test_writes_three_row_sheet(self, tmp_path):
        index = _index(tmp_path, count=6, size=32, noise=0.1)
        out = tmp_path / "sheet.png"
        sample_grid(_IdentityGenerator(32, 32), index, out, split="train", count=4)
        with Image.open(out) as img:
            assert img.mode == "L"
            assert img.size == (4 * 32, 3 * 32)  # columns x rows


class TestCli:
    def run(self, capsys, *argv):
        code = main([str(a) for a in argv])
        out = capsys.readouterr().out
        return code, json.loads(out) if out.strip() else None

    def test_train_evaluate_time_sample(self, tmp_path, capsys):
        manifest = write_synthetic_dataset(tmp_path / "data", count=6, size=32,
                                           noise=0.1)
        out_dir = tmp_path / "run"
        code, report = self.run(
            capsys, "train", "--manifest", manifest, "--out-dir", out_dir,
            "--blocks", 2, "--base-features", 8, "--pretrain-epochs", 1,
            "--epochs", 1, "--batch-size", 4, "--sample-png",
        )
        assert code == 0
        assert report["d_updates"] == 2 * report["g_updates"]
        assert (out_dir / "gan_final.pt").is_file()
        assert (out_dir / "samples.png").is_file()
        log = json.loads((out_dir / "training_log.json").read_text())
        assert log["pretrain"]["epochs"] and log["adversarial"]["steps"]

        code, report = self.run(
            capsys, "evaluate", "--manifest", manifest,
            "--checkpoint", out_dir / "gan_final.pt", "--split", "test",
        )
        assert code == 0
        assert report["degrees"][0]["n"] == 2

        code, report = self.run(
            capsys, "time", "--manifest", manifest,
            "--checkpoint", out_dir / "gan_final.pt",
        )
        assert code == 0
        assert report["g_seconds_per_image"] > 0

        sheet = tmp_path / "sheet.png"
        code, report = self.run(
            capsys, "sample", "--manifest", manifest,
            "--checkpoint", out_dir / "gan_final.pt", "--out", sheet,
            "--count", 2,
        )
        assert code == 0
        assert sheet.is_file()

    def test_usage_errors_exit_1(self, tmp_path, capsys):
        assert main([]) == 1
        assert main(["train"]) == 1
        assert main(["train", "--manifest", "x", "--out-dir", "y",
                     "--epochs", "abc"]) == 1
        manifest = write_synthetic_dataset(tmp_path, count=2, size=32)
        assert main(["train", "--manifest", str(manifest), "--out-dir",
                     str(tmp_path / "run"), "--blocks", "9"]) == 1
        err = capsys.readouterr().err
        assert "usage" in err

    def test_runtime_errors_exit_2(self, tmp_path, capsys):
        assert main(["evaluate", "--manifest", str(tmp_path / "nope.jsonl"),
                     "--checkpoint", "x"]) == 2
        capsys.readouterr()
