#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# gradcheck.py - Finite-difference gradient checks
#

import numpy as np

from effcnet.errors import NumericsError
from effcnet.autograd.tensor import Tensor
from effcnet.autograd.tape import Tape, backward


def _evaluate(f, array):
    value = f(Tensor(array.copy()))
    if value.size != 1:
        raise NumericsError("The checked function must return a single value, got shape %s" % (value.shape,))
    value = value.item()
    if not np.isfinite(value):
        raise NumericsError("The checked function returned a non-finite value: %r" % value)
    return value


def numerical_gradient(f, array, eps=1e-5):
    """
    Central differences (f(x + eps) - f(x - eps)) / 2eps for every element of x
    """
    x = np.array(array, dtype=np.float64, copy=True)
    grad = np.zeros_like(x)

    for i in range(x.size):
        original = x.flat[i]
        x.flat[i] = original + eps
        f_plus = _evaluate(f, x)
        x.flat[i] = original - eps
        f_minus = _evaluate(f, x)
        x.flat[i] = original
        grad.flat[i] = (f_plus - f_minus) / (2.0 * eps)

    return grad


def analytic_gradient(f, x):
    """
    Gradient of f at x computed by the tape
    """
    leaf = Tensor(x.data, requires_grad=True)
    with Tape() as tape:
        value = f(leaf)

    if not value.is_finite():
        raise NumericsError("The checked function returned a non-finite value")

    grads = backward(value, tape)
    if leaf.id not in grads:
        return np.zeros(x.shape, dtype=np.float64)
    return grads[leaf.id].data


def grad_check(f, x, eps=1e-5):
    """
    Compares the tape gradient of a scalar function with central finite
    differences and returns the maximum relative error over the elements of x.
    x must be a 64-bit tensor.
    """
    if x.dtype != np.float64:
        raise NumericsError("Gradient checks need 64-bit tensors, got %s" % x.dtype.name)

    analytic = analytic_gradient(f, x)
    numeric = numerical_gradient(f, x.data, eps)

    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), 1e-8)
    return float(np.max(np.abs(analytic - numeric) / scale))


__all__ = ['grad_check', 'numerical_gradient', 'analytic_gradient']

# vim: ft=python:ts=4:sw=4
