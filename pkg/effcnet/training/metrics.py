#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# metrics.py - Top-k accuracy and per-epoch metrics
#

from dataclasses import dataclass

import numpy as np

from effcnet.errors import ConfigError, DataError
from effcnet.autograd import Tensor

CSV_FIELDS = ('epoch', 'train_loss', 'top1', 'top5', 'lr', 'seconds')


def topk_hits(logits, labels, k):
    """
    Number of rows whose label is among the k largest logits. Equal logits
    rank the lower class index first.
    """
    logits = logits.data if isinstance(logits, Tensor) else np.asarray(logits)
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    if logits.ndim != 2 or logits.shape[0] != labels.size:
        raise DataError("Got %d labels for logits of shape %s" % (labels.size, list(logits.shape)))
    if not 1 <= k <= logits.shape[1]:
        raise ConfigError("k must be in [1, %d], got %d" % (logits.shape[1], k))

    ranking = np.argsort(-logits, axis=1, kind='stable')[:, :k]
    return int(np.sum(np.any(ranking == labels[:, None], axis=1)))


def topk_accuracy(logits, labels, k):
    """
    Fraction of rows whose label is among the k largest logits
    """
    n_rows = len(np.asarray(labels).reshape(-1))
    if n_rows == 0:
        raise DataError("Accuracy of an empty batch")
    return topk_hits(logits, labels, k) / n_rows


@dataclass(frozen=True)
class MetricsRecord:
    epoch: int
    train_loss: float
    top1: float
    top5: float
    lr: float
    wall_time: float

    def validate(self):
        if not 0.0 <= self.top1 <= self.top5 <= 1.0:
            raise DataError("Inconsistent accuracies top1=%r top5=%r" % (self.top1, self.top5))

    def to_csv(self):
        """
        epoch,train_loss,top1,top5,lr,seconds
        """
        return "%d,%.6f,%.6f,%.6f,%.8f,%.3f" % (
            self.epoch, self.train_loss, self.top1, self.top5, self.lr, self.wall_time
        )

    @classmethod
    def from_csv(cls, line):
        fields = line.strip().split(',')
        if len(fields) != len(CSV_FIELDS):
            raise DataError("A metrics line has %d fields, got %r" % (len(CSV_FIELDS), line))
        return cls(int(fields[0]), *[float(f) for f in fields[1:]])


__all__ = ['topk_accuracy', 'topk_hits', 'MetricsRecord', 'CSV_FIELDS']

# vim: ft=python:ts=4:sw=4
