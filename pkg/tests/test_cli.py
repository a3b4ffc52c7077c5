#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#

import os

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from effcnet.config import CONFIG_ENV
from effcnet.bin.main import main
from effcnet.runtime import read_image, read_checkpoint, save_ppm


@pytest.fixture
def run_dir(cifar_dir, tmp_path, capsys):
    """
    One deterministic epoch of the mini network on one record per class
    """
    out = str(tmp_path / "run")
    code = main([
        "train", "--config", "effcnet-mini.ini", "--data", cifar_dir, "--subset", "1", "--epochs", "1",
        "--seed", "5", "--deterministic", "--quiet", "--out", out,
    ])
    assert code == 0
    return out, capsys.readouterr().out


@pytest.fixture
def image_path(tmp_path, rng):
    path = str(tmp_path / "image.ppm")
    save_ppm(rng.integers(1, 256, size=(32, 32, 3), dtype=np.uint8), path)
    return path


class TestAnalyze:

    def test_csv_totals(self, capsys):
        assert main(["analyze", "--config", "effcnet-cifar10.ini", "--csv"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "layer,params,flops"
        assert lines[-1] == "total,462292,60839256"

    def test_side_by_side(self, capsys):
        assert main(["analyze", "--config", "effcnet-cifar10.ini", "--baseline", "condensenet-cifar10.ini"]) == 0
        out = capsys.readouterr().out
        assert "ratio" in out
        assert "527,458" in out

    def test_detailed(self, capsys):
        assert main(["analyze", "--config", "effcnet-mini.ini", "--detailed", "--csv"]) == 0
        assert "stage1.block4.pw2," in capsys.readouterr().out

    def test_checkpoint(self, run_dir, capsys):
        out, _ = run_dir
        assert main(["analyze", "--ckpt", os.path.join(out, "best.ckpt"), "--csv"]) == 0
        from_ckpt = capsys.readouterr().out
        assert main(["analyze", "--config", "effcnet-mini.ini", "--csv"]) == 0
        assert capsys.readouterr().out == from_ckpt

    @pytest.mark.parametrize("argv", [
        ["analyze"],
        ["analyze", "--config", "effcnet-mini.ini", "--ckpt", "best.ckpt"],
    ])
    def test_one_source(self, argv):
        assert main(argv) == 2

    def test_missing_config(self, tmp_path):
        assert main(["analyze", "--config", str(tmp_path / "nothing.ini")]) == 1

    def test_malformed_config(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[network]\nstages = many\n")
        assert main(["analyze", "--config", str(path)]) == 1


class TestTrain:

    def test_run_directory(self, run_dir):
        out, stdout = run_dir
        assert sorted(os.listdir(out)) == ["best.ckpt", "config.snapshot", "last.ckpt", "metrics.csv"]
        with open(os.path.join(out, "metrics.csv")) as f:
            lines = f.read().splitlines()
        assert len(lines) == 1
        assert lines[0].startswith("1,")
        assert lines[0].endswith(",0.000")
        assert stdout.splitlines() == lines

    def test_deterministic_files(self, cifar_dir, tmp_path, capsys):
        outputs = []
        for name in ("a", "b"):
            out = str(tmp_path / name)
            main([
                "train", "--config", "effcnet-mini.ini", "--data", cifar_dir, "--subset", "1", "--epochs", "1",
                "--deterministic", "--quiet", "--out", out,
            ])
            with open(os.path.join(out, "last.ckpt"), 'rb') as f:
                outputs.append(f.read())
        assert outputs[0] == outputs[1]

    def test_config_from_environment(self, cifar_dir, tmp_path, monkeypatch):
        monkeypatch.setenv(CONFIG_ENV, "effcnet-mini.ini")
        out = str(tmp_path / "run")
        assert main(["train", "--data", cifar_dir, "--subset", "1", "--epochs", "1", "--quiet", "--out", out]) == 0
        assert read_checkpoint(os.path.join(out, "last.ckpt")).network.label == "EffCNet-mini CIFAR-10"

    def test_no_config(self, cifar_dir, monkeypatch):
        monkeypatch.delenv(CONFIG_ENV, raising=False)
        assert main(["train", "--data", cifar_dir]) == 2

    def test_bad_flags(self, cifar_dir):
        assert main(["train", "--data", cifar_dir, "--learning-rate", "1"]) == 2
        assert main(["train", "--data", cifar_dir, "--epochs", "many"]) == 2
        assert main(["fly"]) == 2

    def test_missing_data(self, tmp_path):
        assert main(["train", "--config", "effcnet-mini.ini", "--data", str(tmp_path), "--quiet"]) == 1


class TestEvaluate:

    def test_reproduces_training_top1(self, run_dir, cifar_dir, capsys):
        out, stdout = run_dir
        trained_top1 = stdout.splitlines()[-1].split(",")[2]
        assert main(["eval", "--ckpt", os.path.join(out, "best.ckpt"), "--data", cifar_dir, "--batch-size", "3"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "top1: %s" % trained_top1
        assert lines[1].startswith("top5: ")
        assert lines[2].startswith("loss: ")

    def test_missing_checkpoint(self, tmp_path, cifar_dir):
        assert main(["eval", "--ckpt", str(tmp_path / "none.ckpt"), "--data", cifar_dir]) == 1

    def test_corrupted_checkpoint(self, tmp_path, cifar_dir):
        path = tmp_path / "bad.ckpt"
        path.write_bytes(b"EFFCNET0" + bytes(40))
        assert main(["eval", "--ckpt", str(path), "--data", cifar_dir]) == 1


class TestClassify:

    def test_ranking(self, run_dir, image_path, capsys):
        out, _ = run_dir
        assert main(["classify", "--ckpt", os.path.join(out, "best.ckpt"), "--image", image_path, "--top", "3"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 1 + 3 + 2
        assert lines[-2].startswith("preprocess:")
        assert lines[-1].startswith("inference:")

    def test_label_mismatch(self, run_dir, image_path, tmp_path):
        out, _ = run_dir
        labels = tmp_path / "two.labels"
        labels.write_text("yes\nno\n")
        code = main(["classify", "--ckpt", os.path.join(out, "best.ckpt"), "--image", image_path,
                     "--labels", str(labels)])
        assert code == 1

    def test_wrong_image_size(self, run_dir, tmp_path):
        out, _ = run_dir
        small = str(tmp_path / "small.ppm")
        save_ppm(np.zeros((8, 8, 3), dtype=np.uint8), small)
        assert main(["classify", "--ckpt", os.path.join(out, "best.ckpt"), "--image", small]) == 1


class TestAugmentPreview:

    def test_copies(self, image_path, tmp_path):
        out = str(tmp_path / "preview")
        assert main(["augment-preview", "--image", image_path, "--count", "4", "--out", out]) == 0
        assert sorted(os.listdir(out)) == ["preview-%03d.ppm" % i for i in range(4)]

    def test_zero_probability_policy(self, image_path, tmp_path):
        policy = tmp_path / "none.policy"
        policy.write_text("(rotate,0.0,5);(cutout,0.0,5)\n")
        out = str(tmp_path / "preview")
        assert main(["augment-preview", "--image", image_path, "--policy", str(policy), "--count", "3",
                     "--out", out]) == 0
        original = read_image(image_path)
        for i in range(3):
            assert_array_equal(read_image(os.path.join(out, "preview-%03d.ppm" % i)), original)

    def test_count(self, image_path, tmp_path):
        assert main(["augment-preview", "--image", image_path, "--count", "0", "--out", str(tmp_path)]) == 2

    def test_bad_policy(self, image_path, tmp_path):
        policy = tmp_path / "bad.policy"
        policy.write_text("(rotate,0.5,5)\n")
        assert main(["augment-preview", "--image", image_path, "--policy", str(policy), "--out",
                     str(tmp_path)]) == 1

# vim: ft=python:ts=4:sw=4
