#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# trainer.py - The training configuration, the epoch loop and evaluation
#

import os
import io
import time
import functools
import collections
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from tqdm import tqdm

from effcnet.errors import ConfigError, DataError, NumericsError
from effcnet.config import Config
from effcnet.log import get_logger
from effcnet.autograd import Tensor, Tape, backward, get_default_dtype
from effcnet.nn import softmax_cross_entropy, cross_entropy_per_sample
from effcnet.model import forward
from effcnet.augment import load_policy_file
from effcnet.data import DataConfig, DEFAULT_STATS, make_batches, prepare_batch, iter_batches, prefetch
from effcnet.resources import find_file
from effcnet.runtime.checkpoint import Checkpoint
from effcnet.training.optim import SGD, cosine_lr
from effcnet.training.metrics import topk_hits, MetricsRecord

SNAPSHOT_FILE = "config.snapshot"
METRICS_FILE = "metrics.csv"
BEST_CHECKPOINT = "best.ckpt"
LAST_CHECKPOINT = "last.ckpt"

# Random substreams of an epoch
_SHUFFLE, _AUGMENT, _DROPOUT = 0, 1, 2

_log = get_logger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    """
    The [training] section
    """
    epochs: int = 200
    batch_size: int = 64
    lr0: float = 0.1
    momentum: float = 0.9
    weight_decay: float = 1e-4
    seed: int = 0
    dropout_rate: Optional[float] = None
    policy_path: Optional[str] = None
    crop_flip: bool = False
    prefetch: int = 0
    eval_batch_size: int = 256
    progress: bool = False
    deterministic: bool = False

    def validate(self):
        if self.epochs < 1:
            raise ConfigError("Epochs must be at least 1, got %d" % self.epochs)
        if self.batch_size < 1 or self.eval_batch_size < 1:
            raise ConfigError("Batch sizes must be positive")
        if self.lr0 < 0:
            raise ConfigError("The learning rate can't be negative, got %r" % self.lr0)
        if not 0.0 <= self.momentum < 1.0:
            raise ConfigError("Momentum must be in [0, 1), got %r" % self.momentum)
        if self.weight_decay < 0:
            raise ConfigError("Weight decay can't be negative, got %r" % self.weight_decay)
        if self.dropout_rate is not None and not 0.0 <= self.dropout_rate < 1.0:
            raise ConfigError("Dropout rate must be in [0, 1), got %r" % self.dropout_rate)
        if self.prefetch < 0:
            raise ConfigError("Prefetch depth can't be negative, got %d" % self.prefetch)

    def apply_to(self, network):
        """
        The network configuration with the dropout rate of this run, if any
        """
        if self.dropout_rate is None:
            return network
        return replace(network, dropout_rate=self.dropout_rate)

    @classmethod
    def from_config(cls, config):
        try:
            s = config.section('training')
        except LookupError:
            return cls()

        cfg = cls(
            epochs=s.get_int('epochs', 200),
            batch_size=s.get_int('batch_size', 64),
            lr0=s.get_float('lr0', 0.1),
            momentum=s.get_float('momentum', 0.9),
            weight_decay=s.get_float('weight_decay', 1e-4),
            seed=s.get_int('seed', 0),
            dropout_rate=s.get_float('dropout_rate', None),
            policy_path=s.get_str('policy', None) or None,
            crop_flip=s.get_bool('crop_flip', False),
            prefetch=s.get_int('prefetch', 0),
            eval_batch_size=s.get_int('eval_batch_size', 256),
            deterministic=s.get_bool('deterministic', False),
        )
        cfg.validate()
        return cfg

    def to_section(self):
        section = collections.OrderedDict([
            ('epochs', self.epochs),
            ('batch_size', self.batch_size),
            ('lr0', repr(float(self.lr0))),
            ('momentum', repr(float(self.momentum))),
            ('weight_decay', repr(float(self.weight_decay))),
            ('seed', self.seed),
        ])
        if self.dropout_rate is not None:
            section['dropout_rate'] = repr(float(self.dropout_rate))
        if self.policy_path:
            section['policy'] = self.policy_path
        section['crop_flip'] = 'yes' if self.crop_flip else 'no'
        section['prefetch'] = self.prefetch
        section['eval_batch_size'] = self.eval_batch_size
        section['deterministic'] = 'yes' if self.deterministic else 'no'
        return section


def default_data_config(ds):
    mean, std = DEFAULT_STATS[ds.variant]
    return DataConfig(dataset=ds.variant, mean=mean, std=std)


def _check_classes(model, ds):
    if len(ds) and int(ds.labels.max()) >= model.config.num_classes:
        raise ConfigError("The model has %d classes but the %s split has label %d" % (
            model.config.num_classes, ds.split, int(ds.labels.max())
        ))


def evaluate(model, ds, batch_size=256, mean=None, std=None):
    """
    Top-1, top-5 and mean cross-entropy over a whole split, in eval mode.
    Hits are counted as integers so the result doesn't depend on the batch
    size. With fewer than five classes top-5 means top-C.
    """
    if len(ds) == 0:
        raise DataError("Can't evaluate on an empty dataset")
    _check_classes(model, ds)
    if mean is None or std is None:
        mean, std = DEFAULT_STATS[ds.variant]

    k5 = min(5, model.config.num_classes)
    hits1 = hits5 = 0
    total_loss = 0.0
    for indices in make_batches(ds, batch_size):
        images, labels = prepare_batch(ds, indices, mean, std)
        logits = forward(model, Tensor(images), 'eval').data
        hits1 += topk_hits(logits, labels, 1)
        hits5 += topk_hits(logits, labels, k5)
        total_loss += float(np.sum(cross_entropy_per_sample(logits, labels)))

    return hits1 / len(ds), hits5 / len(ds), total_loss / len(ds)


def train_step(model, optimizer, images, labels, lr, rng=None):
    """
    Forward, loss, backward and one SGD update on a batch. Returns the loss.
    """
    with Tape() as tape:
        logits = forward(model, Tensor(images), 'train', rng)
        loss = softmax_cross_entropy(logits, labels)

    value = loss.item()
    if not np.isfinite(value):
        raise NumericsError("Loss is %r" % value)

    optimizer.step(backward(loss, tape), lr)
    return value


def _write_snapshot(model, cfg, data_cfg, path):
    sections = collections.OrderedDict()
    sections['network'] = model.config.to_section()
    sections['training'] = cfg.to_section()
    sections['data'] = data_cfg.to_section()
    Config.from_sections(sections).save(path)


def train(model, train_ds, test_ds, cfg, run_dir=None, data_cfg=None, policy=None, out=None):
    """
    Trains `model` in place for cfg.epochs epochs and evaluates it on the test
    split after every epoch. Every epoch gets its own shuffle, augmentation and
    dropout streams derived from the seed, so a run depends only on (seed,
    configuration, data).

    With a run directory the configuration snapshot, the metrics log and the
    last and best checkpoints are written there. Metrics lines are also
    written to `out` when given.

    Returns the checkpoint of the best epoch by test top-1 (the earliest on
    ties) and the list of MetricsRecord.
    """
    cfg.validate()
    _check_classes(model, train_ds)
    data_cfg = data_cfg or default_data_config(train_ds)
    if policy is None and cfg.policy_path:
        policy = load_policy_file(find_file(cfg.policy_path))

    metrics_log = None
    if run_dir is not None:
        os.makedirs(run_dir, exist_ok=True)
        _write_snapshot(model, cfg, data_cfg, os.path.join(run_dir, SNAPSHOT_FILE))
        metrics_log = io.open(os.path.join(run_dir, METRICS_FILE), 'w')

    optimizer = SGD(model, cfg.momentum, cfg.weight_decay)
    depth = 0 if cfg.deterministic else cfg.prefetch
    n_batches = len(make_batches(train_ds, cfg.batch_size))
    best, best_top1, records = None, -1.0, []

    _log.info("training_started", epochs=cfg.epochs, records=len(train_ds), batches=n_batches, seed=cfg.seed)

    try:
        for epoch in range(cfg.epochs):
            started = time.perf_counter()
            lr = cosine_lr(epoch, cfg.epochs, cfg.lr0)
            dropout_rng = np.random.default_rng([cfg.seed, epoch, _DROPOUT])
            prepare = functools.partial(
                prepare_batch,
                mean=data_cfg.mean, std=data_cfg.std, policy=policy, crop_flip=cfg.crop_flip,
                dtype=get_default_dtype(), rng=np.random.default_rng([cfg.seed, epoch, _AUGMENT]),
            )
            batches = iter_batches(train_ds, cfg.batch_size, True, [cfg.seed, epoch, _SHUFFLE], prepare)

            total_loss, seen = 0.0, 0
            progress = tqdm(
                prefetch(batches, depth), total=n_batches, desc="epoch %d" % (epoch + 1),
                unit="batch", leave=False, disable=not cfg.progress,
            )
            for b, (images, labels) in enumerate(progress):
                try:
                    loss = train_step(model, optimizer, images, labels, lr, dropout_rng)
                except NumericsError as e:
                    _log.error("training_diverged", epoch=epoch + 1, batch=b + 1)
                    raise NumericsError("Epoch %d, batch %d: %s" % (epoch + 1, b + 1, e))
                total_loss += loss * len(labels)
                seen += len(labels)
                progress.set_postfix(loss="%.4f" % loss)
            progress.close()

            top1, top5, _ = evaluate(model, test_ds, cfg.eval_batch_size, data_cfg.mean, data_cfg.std)
            seconds = 0.0 if cfg.deterministic else time.perf_counter() - started
            record = MetricsRecord(epoch + 1, total_loss / seen, top1, top5, lr, seconds)
            record.validate()
            records.append(record)

            _log.info(
                "epoch_finished", epoch=record.epoch, train_loss=record.train_loss,
                top1=top1, top5=top5, lr=lr, seconds=round(seconds, 3),
            )
            line = record.to_csv()
            if out is not None:
                out.write(line + "\n")
                out.flush()
            if metrics_log is not None:
                metrics_log.write(line + "\n")
                metrics_log.flush()

            metadata = collections.OrderedDict([
                ('epoch', record.epoch),
                ('seed', cfg.seed),
                ('train_loss', repr(record.train_loss)),
                ('top1', repr(top1)),
                ('top5', repr(top5)),
            ])
            checkpoint = Checkpoint.from_model(model, metadata, data_cfg)
            improved = top1 > best_top1
            if improved:
                best, best_top1 = checkpoint, top1

            if run_dir is not None:
                checkpoint.write(os.path.join(run_dir, LAST_CHECKPOINT))
                if improved:
                    checkpoint.write(os.path.join(run_dir, BEST_CHECKPOINT))
    finally:
        if metrics_log is not None:
            metrics_log.close()

    return best, records


__all__ = [
    'TrainConfig', 'train', 'train_step', 'evaluate', 'default_data_config',
    'SNAPSHOT_FILE', 'METRICS_FILE', 'BEST_CHECKPOINT', 'LAST_CHECKPOINT',
]

# vim: ft=python:ts=4:sw=4
