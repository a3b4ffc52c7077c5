#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# conftest.py - Shared fixtures
#

import os

import numpy as np
import pytest
import structlog

from effcnet.autograd import precision
from effcnet.model import NetworkConfig
from effcnet.data import Dataset, CIFAR10, CIFAR100, PIXEL_BYTES, CLASS_COUNT
from effcnet.data.cifar import FILES


def cifar_bytes(labels, variant=CIFAR10, seed=0, coarse=None):
    """
    Records with the given labels and random pixels
    """
    rng = np.random.default_rng(seed)
    labels = np.asarray(labels, dtype=np.uint8).reshape(-1, 1)
    pixels = rng.integers(0, 256, size=(labels.shape[0], PIXEL_BYTES), dtype=np.uint8)
    if variant == CIFAR100:
        coarse = np.asarray(coarse if coarse is not None else labels.reshape(-1) % 20, dtype=np.uint8)
        labels = np.concatenate([coarse.reshape(-1, 1), labels], axis=1)
    return np.concatenate([labels, pixels], axis=1).tobytes()


def write_cifar10(path, train_per_class=2, test_per_class=2, seed=0):
    """
    A directory laid out like the extracted CIFAR-10 binary archive. Every
    training file holds train_per_class records of every class.
    """
    classes = CLASS_COUNT[CIFAR10]
    for i, name in enumerate(FILES[(CIFAR10, 'train')]):
        labels = np.tile(np.arange(classes), train_per_class)
        with open(os.path.join(path, name), 'wb') as f:
            f.write(cifar_bytes(labels, seed=seed + i))
    with open(os.path.join(path, FILES[(CIFAR10, 'test')][0]), 'wb') as f:
        f.write(cifar_bytes(np.tile(np.arange(classes), test_per_class), seed=seed + 100))
    return str(path)


def make_toy_dataset(count=64, seed=0, split='train'):
    """
    Two separable classes: dark reddish and bright bluish flat images with a
    little noise
    """
    rng = np.random.default_rng(seed)
    labels = np.arange(count) % 2
    colors = np.array([[200, 30, 30], [30, 30, 220]], dtype=np.int64)
    images = colors[labels][:, :, None, None] + rng.integers(-10, 11, size=(count, 3, 32, 32))
    pixels = np.clip(images, 0, 255).astype(np.uint8).reshape(count, PIXEL_BYTES)
    return Dataset(pixels, labels, CIFAR10, split)


@pytest.fixture(autouse=True)
def reset_logging():
    """
    The command line tests configure structlog on captured streams
    """
    yield
    structlog.reset_defaults()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def float64():
    with precision("float64"):
        yield


@pytest.fixture
def cifar_dir(tmp_path):
    return write_cifar10(tmp_path)


@pytest.fixture
def toy_datasets():
    return make_toy_dataset(64, seed=1, split='train'), make_toy_dataset(32, seed=2, split='test')


@pytest.fixture
def toy_config():
    """
    A small two-class EffCNet: one stage of two blocks on 32 x 32 inputs
    """
    return NetworkConfig(stages=((2, 0),), base_growth=4, init_channels=8, num_classes=2, label="toy")


@pytest.fixture
def micro_config():
    """
    One block on 8 x 8 inputs, for gradient checks
    """
    return NetworkConfig(
        stages=((1, 0),), base_growth=2, init_channels=4, num_classes=3, input_size=8, label="micro"
    )

# vim: ft=python:ts=4:sw=4
