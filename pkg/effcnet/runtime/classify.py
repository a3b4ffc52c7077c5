#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# classify.py - Single image classification with latency measurement
#

import io
import time
import collections

import numpy as np

from effcnet.errors import ConfigError, IoError
from effcnet.autograd import Tensor
from effcnet.nn import softmax
from effcnet.model import forward
from effcnet.data import normalize, DataConfig
from effcnet.augment import check_image


class ClassifyResult(collections.namedtuple('ClassifyResult', ['ranking', 'preprocess_ms', 'inference_ms'])):
    """
    (class name, probability) pairs by decreasing probability and the
    wall-clock latency of preprocessing and of the forward pass
    """
    __slots__ = ()

    @property
    def best(self):
        return self.ranking[0]

    def format(self, top=None):
        lines = ["%-16s %.6f" % (name, p) for name, p in self.ranking[:top]]
        lines.append("preprocess: %.3f ms" % self.preprocess_ms)
        lines.append("inference:  %.3f ms" % self.inference_ms)
        return "\n".join(lines)


def load_labels(path):
    """
    Class names, one per line, blank lines ignored
    """
    try:
        with io.open(path, 'r', encoding='utf-8') as f:
            return [line.strip() for line in f if line.strip()]
    except (IOError, OSError) as e:
        raise IoError("Can't read labels %s: %s" % (path, e))


def classify_image(model, image, labels, data_cfg=None):
    """
    Ranks the classes of one H x W x 3 uint8 image. Latencies are measured
    around normalization and around the forward pass only.
    """
    if len(labels) != model.config.num_classes:
        raise ConfigError("The model has %d classes, got %d class names" % (model.config.num_classes, len(labels)))
    check_image(image)
    data_cfg = data_cfg or DataConfig()

    started = time.perf_counter()
    batch = normalize(image.transpose(2, 0, 1)[None], data_cfg.mean, data_cfg.std)
    preprocessed = time.perf_counter()
    logits = forward(model, Tensor(batch), 'eval').data
    finished = time.perf_counter()

    probabilities = softmax(logits)[0]
    order = np.argsort(-probabilities, kind='stable')
    ranking = [(labels[i], float(probabilities[i])) for i in order]
    return ClassifyResult(ranking, 1000.0 * (preprocessed - started), 1000.0 * (finished - preprocessed))


__all__ = ['ClassifyResult', 'classify_image', 'load_labels']

# vim: ft=python:ts=4:sw=4
