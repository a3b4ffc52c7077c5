#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# optim.py - SGD with momentum and the cosine schedule
#

import math

import numpy as np

from effcnet.errors import ShapeError, ConfigError
from effcnet.autograd import Tensor


def sgd_step(param, grad, velocity, lr, momentum=0.9, weight_decay=0.0):
    """
    One update with weight decay and momentum:

        g = grad + weight_decay * param
        v = momentum * v + g
        param = param - lr * v

    Returns the new (param, velocity). A None velocity starts from zero.
    """
    if grad.shape != param.shape:
        raise ShapeError("Gradient shape %s doesn't match parameter shape %s" % (list(grad.shape), list(param.shape)))
    if velocity is not None and velocity.shape != param.shape:
        raise ShapeError("Velocity shape %s doesn't match parameter shape %s" % (
            list(velocity.shape), list(param.shape)
        ))

    p = param.data
    g = grad.data + weight_decay * p if weight_decay else grad.data
    v = g if velocity is None else momentum * velocity.data + g

    dtype = param.dtype
    new_param = Tensor((p - lr * v).astype(dtype, copy=False), requires_grad=param.requires_grad)
    return new_param, Tensor(np.asarray(v, dtype=dtype))


class SGD(object):
    """
    Momentum SGD over the trainable tensors of a model, holding one velocity
    per parameter name
    """

    def __init__(self, model, momentum=0.9, weight_decay=0.0):
        if not 0.0 <= momentum < 1.0:
            raise ConfigError("Momentum must be in [0, 1), got %r" % momentum)
        if weight_decay < 0:
            raise ConfigError("Weight decay can't be negative, got %r" % weight_decay)
        self.model = model
        self.momentum = momentum
        self.weight_decay = weight_decay
        self.velocity = {}

    def step(self, grads, lr):
        """
        Updates every trainable tensor. `grads` maps tensor ids to gradients,
        as returned by backward(); parameters without a gradient get a zero one.
        """
        for name, params, field, tensor in list(self.model.slots(trainable_only=True)):
            grad = grads.get(tensor.id)
            if grad is None:
                grad = Tensor(np.zeros(tensor.shape, dtype=tensor.dtype))
            new_param, self.velocity[name] = sgd_step(
                tensor, grad, self.velocity.get(name), lr, self.momentum, self.weight_decay
            )
            setattr(params, field, new_param)


def cosine_lr(epoch, total, lr0):
    """
    lr0 * 0.5 * (1 + cos(pi * epoch / total)) for 0 <= epoch < total
    """
    if total < 1 or not 0 <= epoch < total:
        raise ConfigError("Epoch %d out of range for a %d epochs schedule" % (epoch, total))
    return lr0 * 0.5 * (1.0 + math.cos(math.pi * epoch / total))


__all__ = ['sgd_step', 'SGD', 'cosine_lr']

# vim: ft=python:ts=4:sw=4
