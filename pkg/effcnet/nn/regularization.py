#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# regularization.py - Dropout and channel permutation
#

import numpy as np

from effcnet.errors import ShapeError, ConfigError
from effcnet.autograd import Function


class Dropout(Function):
    name = 'dropout'

    @staticmethod
    def forward(ctx, x, mask=None):
        ctx.save_for_backward(mask)
        return x * mask

    @staticmethod
    def backward(ctx, grad):
        mask, = ctx.saved
        return grad * mask


def dropout(x, rate, mode='train', rng=None):
    """
    Inverted dropout: in train mode each element is zeroed with probability
    `rate` and the survivors scaled by 1 / (1 - rate). Eval mode and rate 0
    return the input unchanged.
    """
    if not 0.0 <= rate < 1.0:
        raise ConfigError("Dropout rate must be in [0, 1), got %r" % rate)
    if mode not in ('train', 'eval'):
        raise ConfigError("Unknown mode: %s" % mode)

    if mode == 'eval' or rate == 0.0:
        return x

    if rng is None:
        raise ConfigError("Train-mode dropout needs a random generator")

    keep = rng.random(x.shape) >= rate
    mask = (keep / (1.0 - rate)).astype(x.dtype)
    return Dropout.apply(x, mask=mask)


class ChannelPermute(Function):
    """
    Channel shuffle: channels viewed as (groups, C / groups), transposed and
    flattened back
    """
    name = 'channel_permute'

    @staticmethod
    def forward(ctx, x, groups=1):
        n_batch, channels, height, width = x.shape
        ctx.save_for_backward(groups, channels)
        out = x.reshape(n_batch, groups, channels // groups, height, width).transpose(0, 2, 1, 3, 4)
        return np.ascontiguousarray(out).reshape(x.shape)

    @staticmethod
    def backward(ctx, grad):
        groups, channels = ctx.saved
        n_batch, _, height, width = grad.shape
        out = grad.reshape(n_batch, channels // groups, groups, height, width).transpose(0, 2, 1, 3, 4)
        return np.ascontiguousarray(out).reshape(grad.shape)


def channel_permute(x, groups):
    """
    Exactly inverted by channel_permute(x, C / groups)
    """
    if x.ndim != 4:
        raise ShapeError("channel_permute expects N, C, H, W inputs, got shape %s" % list(x.shape))
    if groups < 1 or x.shape[1] % groups:
        raise ShapeError("%d channels can't be split in %d groups" % (x.shape[1], groups))
    return ChannelPermute.apply(x, groups=groups)


def permutation_indices(channels, groups):
    """
    Source channel of every output channel of channel_permute
    """
    return np.arange(channels).reshape(groups, channels // groups).T.reshape(-1)


__all__ = ['Dropout', 'dropout', 'ChannelPermute', 'channel_permute', 'permutation_indices']

# vim: ft=python:ts=4:sw=4
