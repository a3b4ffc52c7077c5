#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# pipeline.py - Policy application to images and batches
#

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from effcnet.errors import ConfigError
from effcnet.augment.transforms import apply_transform, check_image

_SEED_BOUND = 2 ** 63 - 1


def apply_subpolicy(image, sub_policy, rng):
    """
    Applies the operations of a sub-policy in order, each one when a uniform
    draw falls below its probability
    """
    check_image(image)
    out = image
    for op in sub_policy:
        if rng.random() < op.probability:
            out = apply_transform(out, op.op_type, op.magnitude, rng)
    return out if out is not image else image.copy()


def _augment_one(image, policy, seed):
    rng = np.random.default_rng(seed)
    index = int(rng.integers(0, len(policy)))
    return apply_subpolicy(image, policy[index], rng)


def augment_batch(batch, policy, rng, workers=0):
    """
    Picks one sub-policy uniformly for every image and applies it. Every image
    gets its own generator, seeded from `rng` in batch order, so the output
    doesn't depend on the number of worker threads.
    """
    if len(policy) == 0:
        raise ConfigError("A policy needs at least one sub-policy")

    images = list(batch)
    seeds = rng.integers(0, _SEED_BOUND, size=len(images)) if images else []

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_augment_one, images, [policy] * len(images), seeds))
    return [_augment_one(image, policy, seed) for image, seed in zip(images, seeds)]


__all__ = ['apply_subpolicy', 'augment_batch']

# vim: ft=python:ts=4:sw=4
