#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# conv.py - Standard, grouped, depthwise and pointwise convolutions
#
# Activations are laid out as N, C, H, W. The fast path lowers the dense and
# grouped convolutions to one matrix product per kernel offset (im2col split
# over the S x S offsets) and the depthwise convolution to a multiply-add per
# offset. The direct path is the plain nested loop of the definition
#
#   O[k, l, n] = sum_{i, j, m} K[i, j, m, n] * I[k + i - 1, l + j - 1, m]
#
# and is kept as the reference the fast path is tested against.
#

import numpy as np

from effcnet.errors import ShapeError
from effcnet.autograd import Function, reshape
from effcnet.nn.params import ConvSpec, LayerParams, STANDARD, GROUPED, DEPTHWISE, POINTWISE

ALGORITHMS = ('im2col', 'direct')


def _pad(x, padding):
    if padding == 0:
        return x
    return np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding)))


def _offset(xp, i, j, stride, out_h, out_w):
    """
    View of the padded input seen by kernel offset (i, j)
    """
    return xp[:, :, i:i + stride * (out_h - 1) + 1:stride, j:j + stride * (out_w - 1) + 1:stride]


def _add_bias(out, bias):
    if bias is not None:
        out += bias.reshape(1, -1, 1, 1)
    return out


def conv2d_direct(x, weight, spec, bias=None):
    """
    Reference convolution with explicit loops over the weight layout
    S x S x X/G x Y. Returns the output and the number of multiply-accumulates
    executed.
    """
    n_batch, channels, height, width = x.shape
    kernel, groups = spec.kernel, spec.groups
    in_group = channels // groups
    out_group = spec.out_channels // groups
    out_h, out_w = spec.output_extent(height), spec.output_extent(width)

    w = np.asarray(weight).reshape(kernel, kernel, in_group, spec.out_channels)
    xp = _pad(np.asarray(x), spec.padding)
    out = np.zeros((n_batch, spec.out_channels, out_h, out_w), dtype=np.result_type(x, w))
    macs = 0

    for b in range(n_batch):
        for o in range(spec.out_channels):
            g = o // out_group
            for k in range(out_h):
                for l in range(out_w):
                    acc = 0.0
                    for i in range(kernel):
                        for j in range(kernel):
                            for m in range(in_group):
                                acc += w[i, j, m, o] * xp[b, g * in_group + m, k * spec.stride + i, l * spec.stride + j]
                                macs += 1
                    out[b, o, k, l] = acc

    if bias is not None:
        out += np.asarray(bias).reshape(1, -1, 1, 1)

    # The loop counter only covers the batch; MAC counts are reported per image
    return out, macs // max(n_batch, 1)


class GroupedConv2d(Function):
    """
    Convolution with G contiguous channel groups, G = 1 being the standard
    convolution. Weight layout S x S x X/G x Y.
    """
    name = 'conv2d'

    @staticmethod
    def forward(ctx, x, weight, bias=None, spec=None, algorithm='im2col'):
        n_batch, channels, height, width = x.shape
        kernel, stride, groups = spec.kernel, spec.stride, spec.groups
        in_group = channels // groups
        out_group = spec.out_channels // groups
        out_h, out_w = spec.output_extent(height), spec.output_extent(width)

        xp = _pad(x, spec.padding)
        ctx.save_for_backward(xp, weight, x.shape, bias is not None, spec)

        if algorithm == 'direct':
            out, _ = conv2d_direct(x, weight, spec, bias)
            return out.astype(x.dtype, copy=False)

        wg = weight.reshape(kernel, kernel, in_group, groups, out_group)
        out = np.zeros((n_batch, groups, out_group, out_h, out_w), dtype=x.dtype)
        for i in range(kernel):
            for j in range(kernel):
                cols = _offset(xp, i, j, stride, out_h, out_w).reshape(n_batch, groups, in_group, out_h, out_w)
                out += np.einsum('ngmhw,mgo->ngohw', cols, wg[i, j], optimize=True)

        out = out.reshape(n_batch, spec.out_channels, out_h, out_w)
        return _add_bias(out, bias)

    @staticmethod
    def backward(ctx, grad):
        xp, weight, x_shape, has_bias, spec = ctx.saved
        n_batch, channels, height, width = x_shape
        kernel, stride, groups, padding = spec.kernel, spec.stride, spec.groups, spec.padding
        in_group = channels // groups
        out_group = spec.out_channels // groups
        out_h, out_w = grad.shape[2], grad.shape[3]

        wg = weight.reshape(kernel, kernel, in_group, groups, out_group)
        gg = grad.reshape(n_batch, groups, out_group, out_h, out_w)
        grad_xp = np.zeros_like(xp)
        grad_w = np.zeros_like(wg)

        for i in range(kernel):
            for j in range(kernel):
                cols = _offset(xp, i, j, stride, out_h, out_w).reshape(n_batch, groups, in_group, out_h, out_w)
                grad_w[i, j] = np.einsum('ngmhw,ngohw->mgo', cols, gg, optimize=True)
                grad_cols = np.einsum('ngohw,mgo->ngmhw', gg, wg[i, j], optimize=True)
                _offset(grad_xp, i, j, stride, out_h, out_w)[...] += grad_cols.reshape(
                    n_batch, channels, out_h, out_w
                )

        grad_x = grad_xp[:, :, padding:padding + height, padding:padding + width]
        grad_b = grad.sum(axis=(0, 2, 3)) if has_bias else None
        return grad_x, grad_w.reshape(weight.shape), grad_b


class DepthwiseConv2d(Function):
    """
    One S x S filter per input channel, weight layout S x S x X:

        O[k, l, m] = sum_{i, j} K[i, j, m] * I[k + i - 1, l + j - 1, m]
    """
    name = 'conv2d_depthwise'

    @staticmethod
    def forward(ctx, x, weight, bias=None, spec=None, algorithm='im2col'):
        n_batch, channels, height, width = x.shape
        kernel, stride = spec.kernel, spec.stride
        out_h, out_w = spec.output_extent(height), spec.output_extent(width)

        xp = _pad(x, spec.padding)
        ctx.save_for_backward(xp, weight, x.shape, bias is not None, spec)

        if algorithm == 'direct':
            out, _ = conv2d_direct(x, weight.reshape(kernel, kernel, 1, channels), spec, bias)
            return out.astype(x.dtype, copy=False)

        out = np.zeros((n_batch, channels, out_h, out_w), dtype=x.dtype)
        for i in range(kernel):
            for j in range(kernel):
                out += _offset(xp, i, j, stride, out_h, out_w) * weight[i, j].reshape(1, channels, 1, 1)

        return _add_bias(out, bias)

    @staticmethod
    def backward(ctx, grad):
        xp, weight, x_shape, has_bias, spec = ctx.saved
        n_batch, channels, height, width = x_shape
        kernel, stride, padding = spec.kernel, spec.stride, spec.padding
        out_h, out_w = grad.shape[2], grad.shape[3]

        grad_xp = np.zeros_like(xp)
        grad_w = np.zeros_like(weight)

        for i in range(kernel):
            for j in range(kernel):
                window = _offset(xp, i, j, stride, out_h, out_w)
                grad_w[i, j] = np.einsum('nchw,nchw->c', window, grad)
                _offset(grad_xp, i, j, stride, out_h, out_w)[...] += grad * weight[i, j].reshape(1, channels, 1, 1)

        grad_x = grad_xp[:, :, padding:padding + height, padding:padding + width]
        grad_b = grad.sum(axis=(0, 2, 3)) if has_bias else None
        return grad_x, grad_w, grad_b


class PointwiseConv2d(Function):
    """
    1 x 1 convolution mixing channels, weight layout X x Y:

        O[k, l, n] = sum_m K[m, n] * I[k, l, m]
    """
    name = 'conv2d_pointwise'

    @staticmethod
    def forward(ctx, x, weight, bias=None, spec=None, algorithm='im2col'):
        ctx.save_for_backward(x, weight, bias is not None)

        if algorithm == 'direct':
            out, _ = conv2d_direct(x, weight, spec, bias)
            return out.astype(x.dtype, copy=False)

        out = np.tensordot(x, weight, axes=([1], [0])).transpose(0, 3, 1, 2)
        return _add_bias(np.ascontiguousarray(out), bias)

    @staticmethod
    def backward(ctx, grad):
        x, weight, has_bias = ctx.saved
        grad_w = np.tensordot(x, grad, axes=([0, 2, 3], [0, 2, 3]))
        grad_x = np.tensordot(grad, weight, axes=([1], [1])).transpose(0, 3, 1, 2)
        grad_b = grad.sum(axis=(0, 2, 3)) if has_bias else None
        return grad_x, grad_w, grad_b


def _check(x, params, spec, kind):
    if not isinstance(spec, ConvSpec):
        raise TypeError("Expected a ConvSpec, got %s" % type(spec).__name__)
    spec.validate(kind)

    if x.ndim != 4:
        raise ShapeError("Convolutions expect N, C, H, W inputs, got shape %s" % list(x.shape))
    if x.shape[1] != spec.in_channels:
        raise ShapeError("Input has %d channels, the convolution expects %d" % (x.shape[1], spec.in_channels))
    spec.output_extent(x.shape[2])
    spec.output_extent(x.shape[3])

    if params.weight is None or params.weight.shape != spec.weight_shape(kind):
        raise ShapeError("Weight shape %s doesn't match the %s convolution layout %s" % (
            None if params.weight is None else list(params.weight.shape), kind, list(spec.weight_shape(kind))
        ))
    if params.bias is not None and params.bias.shape != (spec.out_channels,):
        raise ShapeError("Bias shape %s doesn't match %d output channels" % (
            list(params.bias.shape), spec.out_channels
        ))


def _apply(function, x, params, spec, kind, algorithm):
    if algorithm not in ALGORITHMS:
        raise ValueError("Unknown convolution algorithm: %s" % algorithm)
    _check(x, params, spec, kind)

    inputs = [x, params.weight]
    if params.bias is not None:
        inputs.append(params.bias)
    return function.apply(*inputs, spec=spec, algorithm=algorithm)


def conv2d_standard(x, params, spec, algorithm='im2col'):
    """
    Dense convolution, G = 1
    """
    return _apply(GroupedConv2d, x, params, spec, STANDARD, algorithm)


def conv2d_depthwise(x, params, spec, algorithm='im2col'):
    """
    Depthwise convolution: each channel filtered independently, channel count preserved
    """
    return _apply(DepthwiseConv2d, x, params, spec, DEPTHWISE, algorithm)


def conv2d_pointwise(x, params, spec, algorithm='im2col'):
    """
    Pointwise convolution: spatial dimensions unchanged
    """
    return _apply(PointwiseConv2d, x, params, spec, POINTWISE, algorithm)


def conv2d_grouped(x, params, spec, algorithm='im2col'):
    """
    Grouped convolution: the channels are split in G contiguous groups, each
    convolved with its own Y/G filters, and the outputs concatenated. With
    G = X = Y the depthwise kernel runs on the same weights.
    """
    spec.validate(GROUPED)

    if spec.groups > 1 and spec.groups == spec.in_channels == spec.out_channels:
        weight = params.weight
        if weight is not None and weight.shape == spec.weight_shape(GROUPED):
            weight = reshape(weight, spec.weight_shape(DEPTHWISE))
        params = LayerParams(weight=weight, bias=params.bias)
        return _apply(DepthwiseConv2d, x, params, spec, DEPTHWISE, algorithm)

    return _apply(GroupedConv2d, x, params, spec, GROUPED, algorithm)


def conv2d(x, params, spec, algorithm='im2col'):
    """
    Dispatches on the weight layout: X x Y pointwise, S x S x X depthwise,
    S x S x X/G x Y standard or grouped
    """
    ndim = params.weight.ndim if params.weight is not None else 0
    if ndim == 2:
        return conv2d_pointwise(x, params, spec, algorithm)
    if ndim == 3:
        return conv2d_depthwise(x, params, spec, algorithm)
    if spec.groups == 1:
        return conv2d_standard(x, params, spec, algorithm)
    return conv2d_grouped(x, params, spec, algorithm)


__all__ = [
    'conv2d_direct', 'conv2d_standard', 'conv2d_depthwise', 'conv2d_pointwise', 'conv2d_grouped',
    'conv2d', 'GroupedConv2d', 'DepthwiseConv2d', 'PointwiseConv2d',
]

# vim: ft=python:ts=4:sw=4
