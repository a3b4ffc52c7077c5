#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# pooling.py - Non-overlapping average pooling
#

import numpy as np

from effcnet.errors import ShapeError
from effcnet.autograd import Function


class AvgPool(Function):
    name = 'avg_pool'

    @staticmethod
    def forward(ctx, x, window=1):
        n_batch, channels, height, width = x.shape
        ctx.save_for_backward(window)
        tiles = x.reshape(n_batch, channels, height // window, window, width // window, window)
        return tiles.mean(axis=(3, 5)).astype(x.dtype, copy=False)

    @staticmethod
    def backward(ctx, grad):
        window, = ctx.saved
        spread = np.repeat(np.repeat(grad, window, axis=2), window, axis=3)
        return spread / (window * window)


def avg_pool(x, window):
    """
    Mean over each window x window tile, global pooling when the window is the
    whole map
    """
    if x.ndim != 4:
        raise ShapeError("avg_pool expects N, C, H, W inputs, got shape %s" % list(x.shape))
    if window < 1 or x.shape[2] % window or x.shape[3] % window:
        raise ShapeError("Map %dx%d can't be tiled by a %d window" % (x.shape[2], x.shape[3], window))
    if window == 1:
        return x
    return AvgPool.apply(x, window=window)


__all__ = ['AvgPool', 'avg_pool']

# vim: ft=python:ts=4:sw=4
