#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# normalize.py - Input conditioning and the [data] configuration
#

from dataclasses import dataclass

import numpy as np

from effcnet.errors import ConfigError
from effcnet.autograd import get_default_dtype
from effcnet.data.cifar import CIFAR10, CIFAR100, VARIANTS

CIFAR10_MEAN = (0.4914, 0.4822, 0.4465)
CIFAR10_STD = (0.2470, 0.2435, 0.2616)
CIFAR100_MEAN = (0.5071, 0.4865, 0.4409)
CIFAR100_STD = (0.2673, 0.2564, 0.2762)

DEFAULT_STATS = {
    CIFAR10: (CIFAR10_MEAN, CIFAR10_STD),
    CIFAR100: (CIFAR100_MEAN, CIFAR100_STD),
}


def _channels(values, name):
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if values.size != 3:
        raise ConfigError("%s needs 3 per-channel values, got %d" % (name, values.size))
    return values.reshape(3, 1, 1)


def normalize(pixels, mean, std, dtype=None):
    """
    (pixel / 255 - mean) / std per channel, for uint8 images with the channel
    axis third from the end (3 x H x W or N x 3 x H x W)
    """
    std = _channels(std, "std")
    if np.any(std <= 0):
        raise ConfigError("Standard deviations must be positive, got %s" % std.reshape(-1).tolist())
    mean = _channels(mean, "mean")

    out = (np.asarray(pixels, dtype=np.float64) / 255.0 - mean) / std
    return out.astype(dtype or get_default_dtype())


def denormalize(values, mean, std, to_uint8=False):
    """
    Inverse of normalize: values * std + mean in the [0, 1] pixel scale, or
    rounded back to uint8 pixels
    """
    std, mean = _channels(std, "std"), _channels(mean, "mean")
    out = np.asarray(values, dtype=np.float64) * std + mean
    if to_uint8:
        return np.clip(np.rint(out * 255.0), 0, 255).astype(np.uint8)
    return out


def channel_stats(pixels):
    """
    Per-channel mean and standard deviation, in the [0, 1] pixel scale, of
    N x 3 x H x W uint8 images
    """
    values = np.asarray(pixels, dtype=np.float64).reshape(-1, 3, pixels.shape[-2] * pixels.shape[-1]) / 255.0
    return tuple(values.mean(axis=(0, 2)).tolist()), tuple(values.std(axis=(0, 2)).tolist())


@dataclass(frozen=True)
class DataConfig:
    """
    The [data] section: dataset variant, normalization constants and the
    per-class subset sizes of desk-scale runs (0 = whole split)
    """
    dataset: str = CIFAR10
    mean: tuple = CIFAR10_MEAN
    std: tuple = CIFAR10_STD
    subset: int = 0
    test_subset: int = 0

    def validate(self):
        if self.dataset not in VARIANTS:
            raise ConfigError("Unknown dataset %r, expected one of %s" % (self.dataset, ", ".join(VARIANTS)))
        _channels(self.mean, "mean")
        if np.any(_channels(self.std, "std") <= 0):
            raise ConfigError("Standard deviations must be positive")
        if self.subset < 0 or self.test_subset < 0:
            raise ConfigError("Subset sizes can't be negative")

    @classmethod
    def from_config(cls, config):
        """
        Reads the [data] section, all defaults when the section is missing
        """
        try:
            s = config.section('data')
        except LookupError:
            return cls()

        dataset = s.get_str('dataset', CIFAR10)
        mean, std = DEFAULT_STATS.get(dataset, (CIFAR10_MEAN, CIFAR10_STD))
        cfg = cls(
            dataset=dataset,
            mean=tuple(s.get_list('mean', list(mean), float)),
            std=tuple(s.get_list('std', list(std), float)),
            subset=s.get_int('subset', 0),
            test_subset=s.get_int('test_subset', 0),
        )
        cfg.validate()
        return cfg

    def to_section(self):
        return {
            'dataset': self.dataset,
            'mean': ", ".join(repr(float(v)) for v in self.mean),
            'std': ", ".join(repr(float(v)) for v in self.std),
            'subset': self.subset,
            'test_subset': self.test_subset,
        }


__all__ = [
    'normalize', 'denormalize', 'channel_stats', 'DataConfig',
    'CIFAR10_MEAN', 'CIFAR10_STD', 'CIFAR100_MEAN', 'CIFAR100_STD', 'DEFAULT_STATS',
]

# vim: ft=python:ts=4:sw=4
