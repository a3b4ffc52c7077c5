#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# layers.py - Named layers holding their parameters
#
# A layer wraps one nn operation with its LayerParams. Besides the forward it
# knows its output shape and its multiply-accumulate count for a given input
# shape (C, H, W), which is what the cost analyzer walks.
#

import collections

import numpy as np

from effcnet.errors import ShapeError
from effcnet.autograd import Tensor, zeros, ones, reshape
from effcnet.nn import (
    LayerParams, STANDARD, GROUPED, DEPTHWISE, POINTWISE,
    conv2d_standard, conv2d_grouped, conv2d_depthwise, conv2d_pointwise,
    batch_norm, leaky_relu, dropout, channel_permute, avg_pool, linear,
    DEFAULT_SLOPE, MOMENTUM, EPSILON,
)

_CONV_FUNCTIONS = {
    STANDARD: conv2d_standard,
    GROUPED: conv2d_grouped,
    DEPTHWISE: conv2d_depthwise,
    POINTWISE: conv2d_pointwise,
}


class Layer(object):
    """
    Base layer: no parameters, shape preserving, no multiply-accumulates
    """
    kind = 'layer'

    def __init__(self, name):
        self.name = name
        self.params = LayerParams()

    def forward(self, x, mode='eval', rng=None):
        raise NotImplementedError()

    def reset_parameters(self, rng):
        pass

    def slots(self):
        """
        (field, tensor) pairs of all the tensors of the layer, running
        statistics included
        """
        return list(self.params.tensors().items())

    def param_count(self):
        return sum(t.size for t in self.params.trainable().values())

    def output_shape(self, shape):
        return tuple(shape)

    def macs(self, shape):
        return 0

    def __repr__(self):
        return "%s(%s)" % (type(self).__name__, self.name)


class Conv(Layer):
    """
    Convolution of any kind, without bias
    """

    def __init__(self, name, spec, kind=None, gain=1.0):
        super(Conv, self).__init__(name)
        self.spec = spec
        self.kind = kind or spec.kind
        self.gain = gain
        spec.validate(self.kind)
        self.params.weight = zeros(spec.weight_shape(self.kind), requires_grad=True)

    def reset_parameters(self, rng):
        """
        Fan-in scaled normal weights
        """
        std = self.gain / np.sqrt(self.spec.fan_in(self.kind))
        values = rng.standard_normal(self.spec.weight_shape(self.kind)) * std
        self.params.weight = Tensor(values.astype(self.params.weight.dtype), requires_grad=True)

    def forward(self, x, mode='eval', rng=None):
        return _CONV_FUNCTIONS[self.kind](x, self.params, self.spec)

    def output_shape(self, shape):
        channels, height, width = shape
        if channels != self.spec.in_channels:
            raise ShapeError("Layer %s expects %d channels, got %d" % (self.name, self.spec.in_channels, channels))
        return self.spec.out_channels, self.spec.output_extent(height), self.spec.output_extent(width)

    def macs(self, shape):
        _, out_h, out_w = self.output_shape(shape)
        s = self.spec
        return out_h * out_w * s.kernel * s.kernel * (s.in_channels // s.groups) * s.out_channels


class BatchNorm(Layer):
    kind = 'batch_norm'

    def __init__(self, name, channels, momentum=MOMENTUM, epsilon=EPSILON):
        super(BatchNorm, self).__init__(name)
        self.channels = channels
        self.momentum = momentum
        self.epsilon = epsilon
        self.reset_parameters(None)

    def reset_parameters(self, rng):
        self.params.bn_gamma = ones((self.channels,), requires_grad=True)
        self.params.bn_beta = zeros((self.channels,), requires_grad=True)
        self.params.bn_running_mean = zeros((self.channels,))
        self.params.bn_running_var = ones((self.channels,))

    def forward(self, x, mode='eval', rng=None):
        return batch_norm(x, self.params, mode, self.momentum, self.epsilon)

    def output_shape(self, shape):
        if shape[0] != self.channels:
            raise ShapeError("Layer %s expects %d channels, got %d" % (self.name, self.channels, shape[0]))
        return tuple(shape)


class LeakyReLU(Layer):
    kind = 'leaky_relu'

    def __init__(self, name, slope=DEFAULT_SLOPE):
        super(LeakyReLU, self).__init__(name)
        self.slope = slope

    def forward(self, x, mode='eval', rng=None):
        return leaky_relu(x, self.slope)


class Permute(Layer):
    kind = 'permute'

    def __init__(self, name, groups):
        super(Permute, self).__init__(name)
        self.groups = groups

    def forward(self, x, mode='eval', rng=None):
        return channel_permute(x, self.groups)


class Dropout(Layer):
    kind = 'dropout'

    def __init__(self, name, rate):
        super(Dropout, self).__init__(name)
        self.rate = rate

    def forward(self, x, mode='eval', rng=None):
        return dropout(x, self.rate, mode, rng)


class AvgPool(Layer):
    kind = 'avg_pool'

    def __init__(self, name, window=2):
        super(AvgPool, self).__init__(name)
        self.window = window

    def forward(self, x, mode='eval', rng=None):
        return avg_pool(x, self.window)

    def output_shape(self, shape):
        channels, height, width = shape
        if height % self.window or width % self.window:
            raise ShapeError("Map %dx%d can't be tiled by a %d window" % (height, width, self.window))
        return channels, height // self.window, width // self.window


class GlobalAvgPool(Layer):
    """
    Mean over the whole map, reshaped to [N, C]
    """
    kind = 'global_pool'

    def forward(self, x, mode='eval', rng=None):
        if x.shape[2] != x.shape[3]:
            raise ShapeError("Global pooling expects square maps, got %dx%d" % (x.shape[2], x.shape[3]))
        pooled = avg_pool(x, x.shape[2])
        return reshape(pooled, (x.shape[0], x.shape[1]))

    def output_shape(self, shape):
        return (shape[0],)


class Linear(Layer):
    kind = 'linear'

    def __init__(self, name, in_features, out_features, zero_init=False):
        super(Linear, self).__init__(name)
        self.in_features = in_features
        self.out_features = out_features
        self.zero_init = zero_init
        self.params.weight = zeros((in_features, out_features), requires_grad=True)
        self.params.bias = zeros((out_features,), requires_grad=True)

    def reset_parameters(self, rng):
        dtype = self.params.weight.dtype
        if self.zero_init:
            self.params.weight = zeros((self.in_features, self.out_features), dtype=dtype, requires_grad=True)
        else:
            values = rng.standard_normal((self.in_features, self.out_features)) / np.sqrt(self.in_features)
            self.params.weight = Tensor(values.astype(dtype), requires_grad=True)
        self.params.bias = zeros((self.out_features,), dtype=dtype, requires_grad=True)

    def forward(self, x, mode='eval', rng=None):
        return linear(x, self.params)

    def output_shape(self, shape):
        if tuple(shape) != (self.in_features,):
            raise ShapeError("Layer %s expects %d features, got shape %s" % (self.name, self.in_features, list(shape)))
        return (self.out_features,)

    def macs(self, shape):
        return self.in_features * self.out_features


class Unit(object):
    """
    Named sequence of layers, the granularity of the cost report
    """

    def __init__(self, name, layers):
        self.name = name
        self.layers = list(layers)

    def forward(self, x, mode='eval', rng=None):
        for layer in self.layers:
            x = layer.forward(x, mode, rng)
        return x

    def trace(self, shape):
        """
        (layer, input shape, output shape) of every layer for an input shape
        """
        rows = []
        for layer in self.layers:
            out = layer.output_shape(shape)
            rows.append((layer, tuple(shape), out))
            shape = out
        return rows

    def output_shape(self, shape):
        for layer in self.layers:
            shape = layer.output_shape(shape)
        return tuple(shape)

    def reset_parameters(self, rng):
        for layer in self.layers:
            layer.reset_parameters(rng)

    def named_layers(self):
        return collections.OrderedDict(("%s.%s" % (self.name, layer.name), layer) for layer in self.layers)

    def __repr__(self):
        return "%s(%s, %d layers)" % (type(self).__name__, self.name, len(self.layers))


__all__ = [
    'Layer', 'Conv', 'BatchNorm', 'LeakyReLU', 'Permute', 'Dropout', 'AvgPool', 'GlobalAvgPool',
    'Linear', 'Unit',
]

# vim: ft=python:ts=4:sw=4
