#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# tensor.py - Strided N-dimensional tensor values
#

import itertools
import contextlib
import threading

import numpy as np

from effcnet.errors import ShapeError, NumericsError

_FLOAT_TYPES = (np.float32, np.float64)

_settings = threading.local()


def _get_setting(name, default):
    return getattr(_settings, name, default)


def get_default_dtype():
    """
    Precision used for new tensors. 32-bit unless changed
    """
    return _get_setting('dtype', np.float32)


def set_default_dtype(dtype):
    """
    Sets the precision of new tensors for the current thread
    """
    dtype = np.dtype(dtype).type
    if dtype not in _FLOAT_TYPES:
        raise NumericsError("Unsupported tensor precision: %s" % np.dtype(dtype).name)
    _settings.dtype = dtype


@contextlib.contextmanager
def precision(dtype):
    """
    Temporarily changes the default precision:

        with precision("float64"):
            ...
    """
    previous = get_default_dtype()
    set_default_dtype(dtype)
    try:
        yield
    finally:
        _settings.dtype = previous


def debug_enabled():
    return _get_setting('debug', False)


@contextlib.contextmanager
def debug_mode(enabled=True):
    """
    When enabled every forward operation on finite inputs is checked for
    NaN/Inf in its output
    """
    previous = debug_enabled()
    _settings.debug = enabled
    try:
        yield
    finally:
        _settings.debug = previous


class Tensor(object):
    """
    Immutable N-dimensional array of floating point values. The buffer is a
    read-only numpy array, possibly a strided view of another tensor's buffer.
    """

    _ids = itertools.count(1)

    def __init__(self, data, requires_grad=False):
        array = np.asarray(data)
        if array.dtype.type not in _FLOAT_TYPES:
            array = array.astype(get_default_dtype())

        # A read-only view leaves the caller's array writeable
        array = array.view()
        array.flags.writeable = False

        self.data = array
        self.requires_grad = bool(requires_grad)
        self.id = next(Tensor._ids)

    @property
    def shape(self):
        return tuple(self.data.shape)

    @property
    def strides(self):
        """
        Strides measured in elements, not bytes
        """
        return tuple(s // self.data.itemsize for s in self.data.strides)

    @property
    def dtype(self):
        return self.data.dtype

    @property
    def size(self):
        return int(self.data.size)

    @property
    def ndim(self):
        return self.data.ndim

    def is_contiguous(self):
        return bool(self.data.flags.c_contiguous)

    def contiguous(self):
        """
        Row-major canonical form of the tensor
        """
        if self.is_contiguous():
            return self
        return Tensor(np.ascontiguousarray(self.data), requires_grad=self.requires_grad)

    def detach(self):
        return Tensor(self.data, requires_grad=False)

    def numpy(self):
        """
        Writeable copy of the data
        """
        return np.array(self.data, copy=True)

    def at(self, *index):
        return self.data[index].item()

    def item(self):
        if self.size != 1:
            raise ShapeError("Only single-element tensors can be converted to a scalar, shape is %s" % (self.shape,))
        return self.data.reshape(-1)[0].item()

    def is_finite(self):
        return bool(np.all(np.isfinite(self.data)))

    def __add__(self, other):
        from effcnet.autograd.ops import add
        return add(self, other)

    def __radd__(self, other):
        from effcnet.autograd.ops import add
        return add(other, self)

    def __sub__(self, other):
        from effcnet.autograd.ops import sub
        return sub(self, other)

    def __rsub__(self, other):
        from effcnet.autograd.ops import sub
        return sub(other, self)

    def __mul__(self, other):
        from effcnet.autograd.ops import mul
        return mul(self, other)

    def __rmul__(self, other):
        from effcnet.autograd.ops import mul
        return mul(other, self)

    def __neg__(self):
        from effcnet.autograd.ops import neg
        return neg(self)

    def __matmul__(self, other):
        from effcnet.autograd.ops import matmul
        return matmul(self, other)

    def __len__(self):
        return self.shape[0]

    def __repr__(self):
        return "Tensor(shape=%s, dtype=%s, requires_grad=%s)" % (
            list(self.shape), self.dtype.name, self.requires_grad
        )


def as_tensor(value, like=None):
    """
    Wraps python numbers and arrays into tensors. Numbers take the precision
    of `like` when given.
    """
    if isinstance(value, Tensor):
        return value
    dtype = like.dtype if like is not None else get_default_dtype()
    return Tensor(np.asarray(value, dtype=dtype))


def new_tensor(shape, fill=0.0, dtype=None, requires_grad=False):
    """
    Creates an owning tensor in canonical row-major layout, filled either with
    a scalar or with the values of a buffer of matching length.
    """
    try:
        shape = tuple(int(e) for e in shape)
    except TypeError:
        raise ShapeError("Shape must be a list of extents, got %r" % (shape,))

    if len(shape) == 0 or any(e < 1 for e in shape):
        raise ShapeError("All extents must be at least 1, got %s" % list(shape))

    dtype = get_default_dtype() if dtype is None else np.dtype(dtype).type

    if np.isscalar(fill):
        data = np.full(shape, fill, dtype=dtype)
    else:
        buffer = np.asarray(fill, dtype=dtype).reshape(-1)
        if buffer.size != int(np.prod(shape)):
            raise ShapeError("Buffer holds %d values but shape %s needs %d" % (
                buffer.size, list(shape), int(np.prod(shape))
            ))
        data = np.array(buffer.reshape(shape), copy=True, order='C')

    return Tensor(data, requires_grad=requires_grad)


def zeros(shape, dtype=None, requires_grad=False):
    return new_tensor(shape, 0.0, dtype=dtype, requires_grad=requires_grad)


def ones(shape, dtype=None, requires_grad=False):
    return new_tensor(shape, 1.0, dtype=dtype, requires_grad=requires_grad)


__all__ = [
    'Tensor', 'as_tensor', 'new_tensor', 'zeros', 'ones',
    'get_default_dtype', 'set_default_dtype', 'precision', 'debug_enabled', 'debug_mode',
]

# vim: ft=python:ts=4:sw=4
