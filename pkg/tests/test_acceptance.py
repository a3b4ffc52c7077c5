#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# test_acceptance.py - Desk-scale training run on the real CIFAR-10 files
#

import os

import pytest

from effcnet.config import Config
from effcnet.model import NetworkConfig, assemble_network
from effcnet.data import DataConfig
from effcnet.training import TrainConfig, train
from effcnet.resources import resource_path
from effcnet.bin.common import load_split

CIFAR_DIR = os.environ.get("EFFCNET_CIFAR_DIR")


@pytest.mark.slow
@pytest.mark.skipif(not CIFAR_DIR, reason="EFFCNET_CIFAR_DIR is not set")
def test_mini_network_learns_cifar10(tmp_path):
    config = Config.load(resource_path("effcnet-mini.ini"))
    network = NetworkConfig.from_config(config)
    training = TrainConfig.from_config(config)
    data = DataConfig.from_config(config)

    train_ds = load_split(CIFAR_DIR, data.dataset, 'train', data.subset)
    test_ds = load_split(CIFAR_DIR, data.dataset, 'test', data.test_subset)
    assert (len(train_ds), len(test_ds)) == (5000, 1000)

    best, records = train(
        assemble_network(network, seed=training.seed), train_ds, test_ds, training,
        run_dir=str(tmp_path), data_cfg=data,
    )

    assert len(records) == 10
    assert float(best.metadata['top1']) >= 0.4
    losses = [r.train_loss for r in records[:5]]
    assert all(a > b for a, b in zip(losses, losses[1:]))

# vim: ft=python:ts=4:sw=4
