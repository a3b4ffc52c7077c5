#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# params.py - Convolution geometry and layer parameters
#

import collections
from dataclasses import dataclass

import numpy as np

from effcnet.errors import ShapeError, NumericsError


STANDARD = 'standard'
GROUPED = 'grouped'
DEPTHWISE = 'depthwise'
POINTWISE = 'pointwise'


@dataclass(frozen=True)
class ConvSpec:
    """
    Kernel geometry of a convolution: kernel side S, input channels X, output
    channels Y, stride, zero padding and number of groups G
    """
    kernel: int
    in_channels: int
    out_channels: int
    stride: int = 1
    padding: int = 0
    groups: int = 1

    @classmethod
    def standard(cls, kernel, in_channels, out_channels, stride=1, padding=None):
        padding = (kernel - 1) // 2 if padding is None else padding
        return cls(kernel, in_channels, out_channels, stride, padding, 1)

    @classmethod
    def grouped(cls, kernel, in_channels, out_channels, groups, stride=1, padding=None):
        padding = (kernel - 1) // 2 if padding is None else padding
        return cls(kernel, in_channels, out_channels, stride, padding, groups)

    @classmethod
    def depthwise(cls, kernel, channels, stride=1, padding=None):
        padding = (kernel - 1) // 2 if padding is None else padding
        return cls(kernel, channels, channels, stride, padding, channels)

    @classmethod
    def pointwise(cls, in_channels, out_channels):
        return cls(1, in_channels, out_channels, 1, 0, 1)

    @property
    def kind(self):
        if self.kernel == 1 and self.groups == 1:
            return POINTWISE
        if self.groups == 1:
            return STANDARD
        if self.groups == self.in_channels == self.out_channels:
            return DEPTHWISE
        return GROUPED

    def validate(self, kind=None):
        """
        Checks the invariants of the geometry, and of a given convolution kind
        """
        for name in ('kernel', 'in_channels', 'out_channels', 'stride', 'groups'):
            if getattr(self, name) < 1:
                raise ShapeError("ConvSpec %s must be positive, got %d" % (name, getattr(self, name)))
        if self.kernel % 2 == 0:
            raise ShapeError("ConvSpec kernel must be odd, got %d" % self.kernel)
        if self.padding < 0:
            raise ShapeError("ConvSpec padding can't be negative, got %d" % self.padding)
        if self.in_channels % self.groups or self.out_channels % self.groups:
            raise ShapeError("Channels %d -> %d are not divisible by %d groups" % (
                self.in_channels, self.out_channels, self.groups
            ))

        if kind == DEPTHWISE and not (self.groups == self.in_channels == self.out_channels):
            raise ShapeError("A depthwise convolution needs G == X == Y, got G=%d X=%d Y=%d" % (
                self.groups, self.in_channels, self.out_channels
            ))
        if kind == POINTWISE and (self.kernel != 1 or self.groups != 1):
            raise ShapeError("A pointwise convolution needs S == 1 and G == 1, got S=%d G=%d" % (
                self.kernel, self.groups
            ))
        if kind == STANDARD and self.groups != 1:
            raise ShapeError("A standard convolution needs G == 1, got %d" % self.groups)

    def output_extent(self, extent):
        out = (extent + 2 * self.padding - self.kernel) // self.stride + 1
        if out < 1:
            raise ShapeError("Input extent %d is too small for kernel %d with padding %d" % (
                extent, self.kernel, self.padding
            ))
        return out

    def weight_shape(self, kind=None):
        """
        Weight layout: S x S x X/G x Y in general, S x S x X for depthwise and
        X x Y for pointwise convolutions
        """
        kind = kind or self.kind
        if kind == DEPTHWISE:
            return (self.kernel, self.kernel, self.in_channels)
        if kind == POINTWISE:
            return (self.in_channels, self.out_channels)
        return (self.kernel, self.kernel, self.in_channels // self.groups, self.out_channels)

    def fan_in(self, kind=None):
        kind = kind or self.kind
        if kind == DEPTHWISE:
            return self.kernel * self.kernel
        return self.kernel * self.kernel * self.in_channels // self.groups


@dataclass
class LayerParams:
    """
    Parameter tensors of one layer. Tensors are immutable: updates replace them.
    """
    weight: object = None
    bias: object = None
    bn_gamma: object = None
    bn_beta: object = None
    bn_running_mean: object = None
    bn_running_var: object = None

    TRAINABLE = ('weight', 'bias', 'bn_gamma', 'bn_beta')
    BUFFERS = ('bn_running_mean', 'bn_running_var')

    def trainable(self):
        """
        Trainable tensors by field name, running statistics excluded
        """
        return collections.OrderedDict(
            (name, getattr(self, name)) for name in self.TRAINABLE if getattr(self, name) is not None
        )

    def tensors(self):
        """
        All the tensors by field name, running statistics included
        """
        return collections.OrderedDict(
            (name, getattr(self, name)) for name in self.TRAINABLE + self.BUFFERS
            if getattr(self, name) is not None
        )

    def check_running_var(self):
        if self.bn_running_var is not None and not np.all(self.bn_running_var.data > 0):
            raise NumericsError("Batch-norm running variance must be strictly positive")


__all__ = ['ConvSpec', 'LayerParams', 'STANDARD', 'GROUPED', 'DEPTHWISE', 'POINTWISE']

# vim: ft=python:ts=4:sw=4
