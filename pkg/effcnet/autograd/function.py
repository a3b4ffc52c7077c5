#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# function.py - Differentiable operations
#

import numpy as np

from effcnet.errors import NumericsError
from effcnet.autograd.tape import active_tape
from effcnet.autograd.tensor import Tensor, debug_enabled


class Context(object):
    """
    Scratch space shared between the forward and the backward of one call
    """

    def __init__(self, needs_input_grad=()):
        self.saved = ()
        self.needs_input_grad = tuple(needs_input_grad)

    def save_for_backward(self, *values):
        self.saved = values


class Function(object):
    """
    Base class of the differentiable operations. Subclasses implement
    forward() and backward() as static methods working on numpy arrays and are
    called through apply(), which wraps the arrays in tensors and records the
    call on the active tape.
    """

    name = None

    @staticmethod
    def forward(ctx, *arrays, **kwargs):
        raise NotImplementedError()

    @staticmethod
    def backward(ctx, grad):
        """
        Returns one gradient per input, None for inputs without a gradient
        """
        raise NotImplementedError()

    @classmethod
    def apply(cls, *inputs, **kwargs):
        for t in inputs:
            if not isinstance(t, Tensor):
                raise TypeError("%s expects Tensor inputs, got %s" % (cls.__name__, type(t).__name__))

        tape = active_tape()
        record = tape is not None and any(t.requires_grad for t in inputs)

        ctx = Context(t.requires_grad for t in inputs)
        result = cls.forward(ctx, *[t.data for t in inputs], **kwargs)
        output = Tensor(result, requires_grad=record)

        if debug_enabled() and not output.is_finite():
            if all(np.all(np.isfinite(t.data)) for t in inputs):
                raise NumericsError("%s produced non-finite values from finite inputs" % cls.__name__)

        if record:
            tape.record(cls, inputs, output, ctx)

        return output


__all__ = ['Context', 'Function']

# vim: ft=python:ts=4:sw=4
