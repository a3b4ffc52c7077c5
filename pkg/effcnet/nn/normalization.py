#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# normalization.py - Batch normalization
#

import numpy as np

from effcnet.errors import ShapeError, NumericsError, ConfigError
from effcnet.autograd import Function, Tensor

MOMENTUM = 0.1
EPSILON = 1e-5

_AXES = (0, 2, 3)


def _channel(v):
    return v.reshape(1, -1, 1, 1)


class BatchNormTrain(Function):
    """
    Normalization by the statistics of the batch, per channel
    """
    name = 'batch_norm'

    @staticmethod
    def forward(ctx, x, gamma, beta, epsilon=EPSILON):
        mean = x.mean(axis=_AXES)
        var = x.var(axis=_AXES)
        inv_std = 1.0 / np.sqrt(var + epsilon)
        x_hat = (x - _channel(mean)) * _channel(inv_std)
        ctx.save_for_backward(x_hat, inv_std, gamma)
        return (x_hat * _channel(gamma) + _channel(beta)).astype(x.dtype, copy=False)

    @staticmethod
    def backward(ctx, grad):
        x_hat, inv_std, gamma = ctx.saved
        count = grad.size // grad.shape[1]

        grad_gamma = (grad * x_hat).sum(axis=_AXES)
        grad_beta = grad.sum(axis=_AXES)

        grad_x_hat = grad * _channel(gamma)
        grad_x = _channel(inv_std) / count * (
            count * grad_x_hat
            - _channel(grad_x_hat.sum(axis=_AXES))
            - x_hat * _channel((grad_x_hat * x_hat).sum(axis=_AXES))
        )
        return grad_x.astype(grad.dtype, copy=False), grad_gamma, grad_beta


class BatchNormEval(Function):
    """
    Normalization by the running statistics
    """
    name = 'batch_norm_eval'

    @staticmethod
    def forward(ctx, x, gamma, beta, running_mean, running_var, epsilon=EPSILON):
        inv_std = 1.0 / np.sqrt(running_var + epsilon)
        x_hat = (x - _channel(running_mean)) * _channel(inv_std)
        ctx.save_for_backward(x_hat, inv_std, gamma)
        return (x_hat * _channel(gamma) + _channel(beta)).astype(x.dtype, copy=False)

    @staticmethod
    def backward(ctx, grad):
        x_hat, inv_std, gamma = ctx.saved
        grad_x = grad * _channel(gamma * inv_std)
        return grad_x, (grad * x_hat).sum(axis=_AXES), grad.sum(axis=_AXES), None, None


def batch_norm(x, params, mode='train', momentum=MOMENTUM, epsilon=EPSILON):
    """
    Per-channel normalization followed by the affine gamma, beta. In train mode
    the batch statistics are used and the running statistics of params are
    replaced by their momentum update; in eval mode the running statistics are
    used.
    """
    if x.ndim != 4:
        raise ShapeError("batch_norm expects N, C, H, W inputs, got shape %s" % list(x.shape))

    channels = x.shape[1]
    for name in ('bn_gamma', 'bn_beta', 'bn_running_mean', 'bn_running_var'):
        value = getattr(params, name)
        if value is None or value.shape != (channels,):
            raise ShapeError("Batch-norm %s must have shape [%d]" % (name, channels))

    if mode == 'train':
        count = x.size // channels
        if count < 2:
            raise NumericsError("Batch statistics need at least 2 values per channel, got %d" % count)

        out = BatchNormTrain.apply(x, params.bn_gamma, params.bn_beta, epsilon=epsilon)

        mean = x.data.mean(axis=_AXES)
        unbiased = x.data.var(axis=_AXES) * count / (count - 1)
        dtype = params.bn_running_mean.dtype
        params.bn_running_mean = Tensor(
            ((1.0 - momentum) * params.bn_running_mean.data + momentum * mean).astype(dtype)
        )
        params.bn_running_var = Tensor(
            ((1.0 - momentum) * params.bn_running_var.data + momentum * unbiased).astype(dtype)
        )
        return out

    if mode == 'eval':
        params.check_running_var()
        return BatchNormEval.apply(
            x, params.bn_gamma, params.bn_beta, params.bn_running_mean, params.bn_running_var, epsilon=epsilon
        )

    raise ConfigError("Unknown mode: %s" % mode)


__all__ = ['BatchNormTrain', 'BatchNormEval', 'batch_norm', 'MOMENTUM', 'EPSILON']

# vim: ft=python:ts=4:sw=4
