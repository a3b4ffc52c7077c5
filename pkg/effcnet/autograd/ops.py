#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# ops.py - Elementwise, matrix and shape operations
#

import numpy as np

from effcnet.errors import ShapeError
from effcnet.autograd.function import Function
from effcnet.autograd.tensor import Tensor, as_tensor


def _reduce_to(grad, shape):
    """
    Sums a gradient back to the shape of a broadcast scalar operand
    """
    if grad.shape == tuple(shape):
        return grad
    return np.asarray(grad.sum()).reshape(shape)


def _operands(a, b):
    """
    Only equal shapes or a single-element operand are allowed
    """
    if a.shape == b.shape:
        return a, b
    if a.size == 1:
        return a.reshape(()), b
    if b.size == 1:
        return a, b.reshape(())
    raise ShapeError("Incompatible shapes %s and %s, only scalar broadcasting is supported" % (
        list(a.shape), list(b.shape)
    ))


class Add(Function):
    name = 'add'

    @staticmethod
    def forward(ctx, a, b):
        ctx.save_for_backward(a.shape, b.shape)
        a, b = _operands(a, b)
        return a + b

    @staticmethod
    def backward(ctx, grad):
        a_shape, b_shape = ctx.saved
        return _reduce_to(grad, a_shape), _reduce_to(grad, b_shape)


class Sub(Function):
    name = 'sub'

    @staticmethod
    def forward(ctx, a, b):
        ctx.save_for_backward(a.shape, b.shape)
        a, b = _operands(a, b)
        return a - b

    @staticmethod
    def backward(ctx, grad):
        a_shape, b_shape = ctx.saved
        return _reduce_to(grad, a_shape), _reduce_to(-grad, b_shape)


class Mul(Function):
    name = 'mul'

    @staticmethod
    def forward(ctx, a, b):
        ctx.save_for_backward(a, b)
        a, b = _operands(a, b)
        return a * b

    @staticmethod
    def backward(ctx, grad):
        a, b = ctx.saved
        sa, sb = _operands(a, b)
        grad_a = _reduce_to(grad * sb, a.shape) if ctx.needs_input_grad[0] else None
        grad_b = _reduce_to(grad * sa, b.shape) if ctx.needs_input_grad[1] else None
        return grad_a, grad_b


class Neg(Function):
    name = 'neg'

    @staticmethod
    def forward(ctx, a):
        return -a

    @staticmethod
    def backward(ctx, grad):
        return -grad


class MatMul(Function):
    name = 'matmul'

    @staticmethod
    def forward(ctx, a, b):
        ctx.save_for_backward(a, b)
        return a @ b

    @staticmethod
    def backward(ctx, grad):
        a, b = ctx.saved
        grad_a = grad @ b.T if ctx.needs_input_grad[0] else None
        grad_b = a.T @ grad if ctx.needs_input_grad[1] else None
        return grad_a, grad_b


class Sum(Function):
    name = 'sum'

    @staticmethod
    def forward(ctx, a):
        ctx.save_for_backward(a.shape)
        return np.asarray(a.sum(), dtype=a.dtype).reshape(1)

    @staticmethod
    def backward(ctx, grad):
        shape, = ctx.saved
        return np.full(shape, grad.reshape(-1)[0], dtype=grad.dtype)


class Mean(Function):
    name = 'mean'

    @staticmethod
    def forward(ctx, a):
        ctx.save_for_backward(a.shape, a.size)
        return np.asarray(a.mean(), dtype=a.dtype).reshape(1)

    @staticmethod
    def backward(ctx, grad):
        shape, size = ctx.saved
        return np.full(shape, grad.reshape(-1)[0] / size, dtype=grad.dtype)


class Reshape(Function):
    name = 'reshape'

    @staticmethod
    def forward(ctx, a, shape=None):
        ctx.save_for_backward(a.shape)
        return a.reshape(shape)

    @staticmethod
    def backward(ctx, grad):
        shape, = ctx.saved
        return grad.reshape(shape)


class Concat(Function):
    name = 'concat'

    @staticmethod
    def forward(ctx, *arrays, **kwargs):
        axis = kwargs.get('axis', 1)
        ctx.save_for_backward(axis, [a.shape[axis] for a in arrays])
        return np.concatenate(arrays, axis=axis)

    @staticmethod
    def backward(ctx, grad):
        axis, extents = ctx.saved
        splits = np.cumsum(extents)[:-1]
        return tuple(np.split(grad, splits, axis=axis))


def binary_ew(a, b, op):
    """
    Elementwise add, sub or mul of two tensors with equal shapes, or of a
    tensor and a single-element tensor
    """
    functions = {'add': Add, 'sub': Sub, 'mul': Mul}
    if op not in functions:
        raise ValueError("Unknown elementwise operation: %s" % op)

    if not isinstance(a, Tensor) and not isinstance(b, Tensor):
        raise TypeError("At least one operand must be a Tensor")
    a = as_tensor(a, like=b if isinstance(b, Tensor) else None)
    b = as_tensor(b, like=a)

    _operands(a.data, b.data)
    return functions[op].apply(a, b)


def add(a, b):
    return binary_ew(a, b, 'add')


def sub(a, b):
    return binary_ew(a, b, 'sub')


def mul(a, b):
    return binary_ew(a, b, 'mul')


def neg(a):
    return Neg.apply(a)


def matmul(a, b):
    """
    Product of two matrices
    """
    if a.ndim != 2 or b.ndim != 2:
        raise ShapeError("matmul expects 2-d tensors, got %s and %s" % (list(a.shape), list(b.shape)))
    if a.shape[1] != b.shape[0]:
        raise ShapeError("Inner dimensions differ: %s x %s" % (list(a.shape), list(b.shape)))
    return MatMul.apply(a, b)


def tsum(a):
    """
    Sum of all elements as a single-element tensor
    """
    return Sum.apply(a)


def mean(a):
    return Mean.apply(a)


def reshape(a, shape):
    shape = tuple(int(e) for e in shape)
    if int(np.prod(shape)) != a.size:
        raise ShapeError("Can't reshape %s into %s" % (list(a.shape), list(shape)))
    return Reshape.apply(a, shape=shape)


def concat(tensors, axis=1):
    """
    Concatenation along an axis, the channel axis by default
    """
    tensors = list(tensors)
    if not tensors:
        raise ShapeError("Nothing to concatenate")
    reference = tensors[0].shape
    for t in tensors[1:]:
        if t.ndim != len(reference) or any(
            x != y for i, (x, y) in enumerate(zip(t.shape, reference)) if i != axis
        ):
            raise ShapeError("Can't concatenate %s with %s along axis %d" % (list(t.shape), list(reference), axis))
    return Concat.apply(*tensors, axis=axis)


__all__ = [
    'Add', 'Sub', 'Mul', 'Neg', 'MatMul', 'Sum', 'Mean', 'Reshape', 'Concat',
    'binary_ew', 'add', 'sub', 'mul', 'neg', 'matmul', 'tsum', 'mean', 'reshape', 'concat',
]

# vim: ft=python:ts=4:sw=4
