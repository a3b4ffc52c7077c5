#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# tape.py - Reverse-mode differentiation tape
#

import threading
import collections

import numpy as np

from effcnet.errors import ShapeError, TapeError
from effcnet.autograd.tensor import Tensor

_local = threading.local()


class TapeEntry(collections.namedtuple('TapeEntry', ['function', 'inputs', 'output', 'ctx'])):
    """
    One recorded operation: the Function that produced `output` from
    `inputs` and the context it saved during the forward pass
    """

    @property
    def op(self):
        return self.function.name or self.function.__name__

    @property
    def input_ids(self):
        return tuple(t.id for t in self.inputs)

    @property
    def output_id(self):
        return self.output.id


class Tape(object):
    """
    Ordered record of the operations executed while the tape is active. The
    tape belongs to the thread that entered it and can be consumed by one
    backward pass only.

        with Tape() as tape:
            loss = model.forward(...)
        grads = backward(loss, tape)
    """

    def __init__(self):
        self.entries = []
        self.consumed = False
        self._producers = {}

    def __enter__(self):
        _stack().append(self)
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        stack = _stack()
        if stack and stack[-1] is self:
            stack.pop()
        return False

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def record(self, function, inputs, output, ctx):
        if self.consumed:
            raise TapeError("Can't record on a tape that has already been consumed by backward()")
        self._producers[output.id] = len(self.entries)
        self.entries.append(TapeEntry(function, tuple(inputs), output, ctx))

    def producer(self, tensor_id):
        """
        Index of the entry that produced a tensor, None for tensors not created on the tape
        """
        return self._producers.get(tensor_id)


def _stack():
    if not hasattr(_local, 'stack'):
        _local.stack = []
    return _local.stack


def active_tape():
    """
    The innermost tape entered by the current thread
    """
    stack = _stack()
    return stack[-1] if stack else None


def backward(loss, tape):
    """
    Runs the reverse pass from a single-element loss and returns a map from
    tensor id to the gradient of every requires_grad leaf reached
    """
    if loss.size != 1:
        raise ShapeError("The loss must be a single-element tensor, shape is %s" % (loss.shape,))

    if tape is None:
        raise TapeError("No tape given for the backward pass")

    if tape.consumed:
        raise TapeError("The tape has already been consumed by a backward pass, record it again")

    last = tape.producer(loss.id)
    if last is None:
        raise TapeError("The loss tensor %d was not produced on this tape" % loss.id)

    tape.consumed = True

    grads = {loss.id: np.ones(loss.shape, dtype=loss.dtype)}
    leaves = collections.OrderedDict()

    for entry in reversed(tape.entries[:last + 1]):
        grad_out = grads.pop(entry.output.id, None)
        if grad_out is None:
            continue

        grad_in = entry.function.backward(entry.ctx, grad_out)
        if not isinstance(grad_in, tuple):
            grad_in = (grad_in,)

        for tensor, grad in zip(entry.inputs, grad_in):
            if grad is None or not tensor.requires_grad:
                continue

            # Fan-out accumulates by summation
            if tensor.id in grads:
                grads[tensor.id] = grads[tensor.id] + grad
            else:
                grads[tensor.id] = np.asarray(grad, dtype=tensor.dtype)

            if tape.producer(tensor.id) is None:
                leaves[tensor.id] = tensor

    return collections.OrderedDict(
        (tid, Tensor(grads[tid].reshape(leaf.shape))) for tid, leaf in leaves.items()
    )


__all__ = ['Tape', 'TapeEntry', 'active_tape', 'backward']

# vim: ft=python:ts=4:sw=4
