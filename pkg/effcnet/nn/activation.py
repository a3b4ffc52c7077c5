#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# activation.py - Leaky rectified linear activation
#

import numpy as np

from effcnet.errors import ConfigError
from effcnet.autograd import Function

DEFAULT_SLOPE = 0.01


class LeakyReLU(Function):
    """
    f(x) = x for x >= 0, slope * x otherwise. The derivative at exactly 0
    takes the positive branch.
    """
    name = 'leaky_relu'

    @staticmethod
    def forward(ctx, x, slope=DEFAULT_SLOPE):
        positive = x >= 0
        ctx.save_for_backward(positive, slope)
        return np.where(positive, x, slope * x).astype(x.dtype, copy=False)

    @staticmethod
    def backward(ctx, grad):
        positive, slope = ctx.saved
        return np.where(positive, grad, slope * grad).astype(grad.dtype, copy=False)


def leaky_relu(x, slope=DEFAULT_SLOPE):
    if not 0.0 < slope < 1.0:
        raise ConfigError("The leaky slope must be in (0, 1), got %r" % slope)
    return LeakyReLU.apply(x, slope=slope)


def leaky_relu_gain(slope=DEFAULT_SLOPE):
    """
    Gain of the activation for fan-in weight initialization
    """
    return float(np.sqrt(2.0 / (1.0 + slope ** 2)))


__all__ = ['LeakyReLU', 'leaky_relu', 'leaky_relu_gain', 'DEFAULT_SLOPE']

# vim: ft=python:ts=4:sw=4
