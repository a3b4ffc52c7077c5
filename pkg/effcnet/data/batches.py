#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# batches.py - Shuffling, mini-batches and prefetching
#

import queue
import threading

import numpy as np

from effcnet.errors import DataError, ConfigError
from effcnet.autograd import get_default_dtype, set_default_dtype
from effcnet.augment import augment_batch, random_crop_flip
from effcnet.data.normalize import normalize


def make_batches(ds, batch_size, shuffle=False, seed=0):
    """
    Index arrays of the mini-batches of one epoch. Every record appears in
    exactly one batch and the last batch may be smaller.
    """
    if len(ds) == 0:
        raise DataError("Can't make batches of an empty dataset")
    if batch_size < 1:
        raise ConfigError("Batch size must be positive, got %d" % batch_size)

    order = np.arange(len(ds))
    if shuffle:
        order = np.random.default_rng(seed).permutation(len(ds))
    return [order[i:i + batch_size] for i in range(0, len(ds), batch_size)]


def prepare_batch(ds, indices, mean, std, policy=None, rng=None, crop_flip=False, dtype=None):
    """
    Normalized N x 3 x H x W float images and labels of a batch, optionally
    augmented by the pad-and-crop flip and by a policy. The images use `dtype`,
    or the default precision of the calling thread.
    """
    images = ds.images(indices)
    if crop_flip or policy is not None:
        if rng is None:
            raise ConfigError("Augmentation needs a random generator")
        images = list(images)
        if crop_flip:
            images = [random_crop_flip(image, rng) for image in images]
        if policy is not None:
            images = augment_batch(images, policy, rng)
        images = np.stack(images)

    planar = images.transpose(0, 3, 1, 2)
    return normalize(planar, mean, std, dtype), ds.labels[indices]


def iter_batches(ds, batch_size, shuffle=False, seed=0, prepare=None):
    """
    Yields (images, labels) per batch. Without `prepare` the images are the
    raw N x 3 x H x W uint8 planes.
    """
    for indices in make_batches(ds, batch_size, shuffle, seed):
        if prepare is None:
            yield ds.planar(indices), ds.labels[indices]
        else:
            yield prepare(ds, indices)


PREFETCH_THREAD = "effcnet-prefetch"

_POLL = 0.05
_DONE = object()


class _Failure(object):
    def __init__(self, error):
        self.error = error


def prefetch(iterable, depth=2):
    """
    Runs `iterable` in a producer thread at most `depth` items ahead of the
    consumer. Items come out in order and producer errors are re-raised in the
    consumer. Depth 0 iterates serially.

    The producer runs with the caller's default precision. When the consumer
    stops early the producer notices within `_POLL` seconds and exits.
    """
    if depth < 1:
        for item in iterable:
            yield item
        return

    handoff = queue.Queue(maxsize=depth)
    stop = threading.Event()
    dtype = get_default_dtype()

    def offer(item):
        while not stop.is_set():
            try:
                handoff.put(item, timeout=_POLL)
                return True
            except queue.Full:
                continue
        return False

    def produce():
        set_default_dtype(dtype)
        try:
            for item in iterable:
                if not offer(item):
                    return
            offer(_DONE)
        except Exception as e:
            offer(_Failure(e))

    worker = threading.Thread(target=produce, name=PREFETCH_THREAD, daemon=True)
    worker.start()
    try:
        while True:
            item = handoff.get()
            if item is _DONE:
                break
            if isinstance(item, _Failure):
                raise item.error
            yield item
    finally:
        stop.set()
        worker.join()


__all__ = ['make_batches', 'prepare_batch', 'iter_batches', 'prefetch', 'PREFETCH_THREAD']

# vim: ft=python:ts=4:sw=4
