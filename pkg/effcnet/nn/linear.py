#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# linear.py - Fully connected classifier layer
#

from effcnet.errors import ShapeError
from effcnet.autograd import Function


class Linear(Function):
    name = 'linear'

    @staticmethod
    def forward(ctx, x, weight, bias=None):
        ctx.save_for_backward(x, weight, bias is not None)
        out = x @ weight
        if bias is not None:
            out = out + bias
        return out

    @staticmethod
    def backward(ctx, grad):
        x, weight, has_bias = ctx.saved
        grad_x = grad @ weight.T if ctx.needs_input_grad[0] else None
        grad_w = x.T @ grad
        grad_b = grad.sum(axis=0) if has_bias else None
        return grad_x, grad_w, grad_b


def linear(x, params):
    """
    x . W + b with x [N, F], W [F, classes] and b [classes]
    """
    weight, bias = params.weight, params.bias
    if x.ndim != 2 or weight is None or weight.ndim != 2:
        raise ShapeError("linear expects a [N, F] input and a [F, classes] weight")
    if x.shape[1] != weight.shape[0]:
        raise ShapeError("Input has %d features, the weight expects %d" % (x.shape[1], weight.shape[0]))
    if bias is not None and bias.shape != (weight.shape[1],):
        raise ShapeError("Bias shape %s doesn't match %d outputs" % (list(bias.shape), weight.shape[1]))

    if bias is None:
        return Linear.apply(x, weight)
    return Linear.apply(x, weight, bias)


__all__ = ['Linear', 'linear']

# vim: ft=python:ts=4:sw=4
