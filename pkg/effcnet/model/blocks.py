#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# blocks.py - Densely connected blocks
#

from effcnet.errors import ConfigError, ShapeError
from effcnet.autograd import concat
from effcnet.nn import ConvSpec, GROUPED, leaky_relu_gain
from effcnet.model.layers import Unit, Conv, BatchNorm, LeakyReLU, Permute, Dropout


class DenseBlock(Unit):
    """
    Sequence of layers producing `growth` new channels, concatenated to the
    block input along the channel axis
    """

    def __init__(self, name, layers, in_channels, growth):
        super(DenseBlock, self).__init__(name, layers)
        self.in_channels = in_channels
        self.growth = growth

    @property
    def out_channels(self):
        return self.in_channels + self.growth

    def forward(self, x, mode='eval', rng=None):
        new = super(DenseBlock, self).forward(x, mode, rng)
        return concat([x, new], axis=1)

    def output_shape(self, shape):
        new = super(DenseBlock, self).output_shape(shape)
        if new[0] != self.growth:
            raise ShapeError("Block %s produced %d channels instead of %d" % (self.name, new[0], self.growth))
        return (shape[0] + new[0],) + tuple(shape[1:])


def _norm_act(layers, prefix, channels, cfg):
    if cfg.batch_norm:
        layers.append(BatchNorm("%sbn" % prefix, channels))
    layers.append(LeakyReLU("%srelu" % prefix, cfg.slope))


def build_effcnet_block(cfg, name="block"):
    """
    BN, LReLU, depthwise S x S, BN, LReLU, pointwise in -> factor * k, channel
    permute, pointwise factor * k -> k, dropout. In single-pointwise mode the
    block ends with one pointwise in -> k and no permute.
    """
    cfg.validate()

    gain = leaky_relu_gain(cfg.slope)
    layers = []

    _norm_act(layers, "", cfg.in_channels, cfg)
    layers.append(Conv("dw", ConvSpec.depthwise(cfg.dw_kernel, cfg.in_channels), gain=gain))
    _norm_act(layers, "dw_", cfg.in_channels, cfg)

    if cfg.single_pointwise:
        layers.append(Conv("pw", ConvSpec.pointwise(cfg.in_channels, cfg.growth), gain=gain))
    else:
        layers.append(Conv("pw1", ConvSpec.pointwise(cfg.in_channels, cfg.bottleneck_channels), gain=gain))
        layers.append(Permute("permute", cfg.permute_groups))
        layers.append(Conv("pw2", ConvSpec.pointwise(cfg.bottleneck_channels, cfg.growth), gain=gain))

    if cfg.dropout_rate > 0.0:
        layers.append(Dropout("dropout", cfg.dropout_rate))

    return DenseBlock(name, layers, cfg.in_channels, cfg.growth)


def build_condensenet_block_static(cfg, groups, name="block"):
    """
    BN, LReLU, grouped 1 x 1 in -> factor * k, channel shuffle, BN, LReLU,
    grouped 3 x 3 factor * k -> k, with a fixed group count standing for the
    condensation factor
    """
    if groups < 1:
        raise ConfigError("Group count must be positive, got %d" % groups)
    if cfg.in_channels % groups or cfg.bottleneck_channels % groups or cfg.growth % groups:
        raise ConfigError("Channels in=%d, factor*k=%d and k=%d must be divisible by %d groups" % (
            cfg.in_channels, cfg.bottleneck_channels, cfg.growth, groups
        ))

    gain = leaky_relu_gain(cfg.slope)
    layers = []

    _norm_act(layers, "", cfg.in_channels, cfg)
    layers.append(Conv(
        "gconv1", ConvSpec.grouped(1, cfg.in_channels, cfg.bottleneck_channels, groups), GROUPED, gain
    ))
    if groups > 1:
        layers.append(Permute("shuffle", groups))
    _norm_act(layers, "gconv1_", cfg.bottleneck_channels, cfg)
    layers.append(Conv(
        "gconv3", ConvSpec.grouped(3, cfg.bottleneck_channels, cfg.growth, groups), GROUPED, gain
    ))

    if cfg.dropout_rate > 0.0:
        layers.append(Dropout("dropout", cfg.dropout_rate))

    return DenseBlock(name, layers, cfg.in_channels, cfg.growth)


__all__ = ['DenseBlock', 'build_effcnet_block', 'build_condensenet_block_static']

# vim: ft=python:ts=4:sw=4
