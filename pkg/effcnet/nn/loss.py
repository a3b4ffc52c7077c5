#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# loss.py - Softmax and cross-entropy
#

import numpy as np

from effcnet.errors import ShapeError, DataError
from effcnet.autograd import Function


def log_softmax(logits):
    """
    Row-wise log-softmax of a numpy array, stabilized by subtracting the row maximum
    """
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def softmax(logits):
    return np.exp(log_softmax(np.asarray(logits)))


def check_labels(labels, n_rows, n_classes):
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    if labels.size != n_rows:
        raise DataError("Got %d labels for %d rows" % (labels.size, n_rows))
    if labels.size and (labels.min() < 0 or labels.max() >= n_classes):
        raise DataError("Labels must be in [0, %d), got range [%d, %d]" % (n_classes, labels.min(), labels.max()))
    return labels


def cross_entropy_per_sample(logits, labels):
    """
    -log softmax(logits)[label] for every row, as a numpy array
    """
    logits = np.asarray(logits)
    labels = check_labels(labels, logits.shape[0], logits.shape[1])
    return -log_softmax(logits)[np.arange(logits.shape[0]), labels]


class SoftmaxCrossEntropy(Function):
    name = 'softmax_cross_entropy'

    @staticmethod
    def forward(ctx, logits, labels=None):
        log_probs = log_softmax(logits)
        rows = np.arange(logits.shape[0])
        ctx.save_for_backward(log_probs, labels)
        loss = -log_probs[rows, labels].mean()
        return np.asarray(loss, dtype=logits.dtype).reshape(1)

    @staticmethod
    def backward(ctx, grad):
        log_probs, labels = ctx.saved
        n_rows = log_probs.shape[0]
        grad_logits = np.exp(log_probs)
        grad_logits[np.arange(n_rows), labels] -= 1.0
        return (grad_logits * (grad.reshape(-1)[0] / n_rows)).astype(grad.dtype, copy=False)


def softmax_cross_entropy(logits, labels):
    """
    Mean over the batch of -log softmax(logits)[label]
    """
    if logits.ndim != 2:
        raise ShapeError("Logits must be [N, classes], got shape %s" % list(logits.shape))
    labels = check_labels(labels, logits.shape[0], logits.shape[1])
    return SoftmaxCrossEntropy.apply(logits, labels=labels)


__all__ = [
    'SoftmaxCrossEntropy', 'softmax_cross_entropy', 'cross_entropy_per_sample',
    'log_softmax', 'softmax', 'check_labels',
]

# vim: ft=python:ts=4:sw=4
