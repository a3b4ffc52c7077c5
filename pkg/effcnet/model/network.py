#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# network.py - Network assembly and forward pass
#

import collections

import numpy as np

from effcnet.errors import ConfigError, ShapeError
from effcnet.autograd import Tensor
from effcnet.nn import ConvSpec, leaky_relu_gain
from effcnet.model.config import growth_channels, EFFCNET
from effcnet.model.layers import Unit, Conv, BatchNorm, LeakyReLU, AvgPool, GlobalAvgPool, Linear
from effcnet.model.blocks import build_effcnet_block, build_condensenet_block_static

IMAGE_CHANNELS = 3
MODES = ('train', 'eval')


class Model(object):
    """
    Ordered list of units (stem, dense blocks, transitions, head) built from a
    NetworkConfig. Parameter names are "<unit>.<layer>.<field>", in a fixed
    order.
    """

    def __init__(self, config, units):
        self.config = config
        self.units = list(units)

    @property
    def input_shape(self):
        return IMAGE_CHANNELS, self.config.input_size, self.config.input_size

    @property
    def final_features(self):
        return self.units[-1].layers[-1].in_features

    def layers(self):
        """
        Every layer by its full name
        """
        layers = collections.OrderedDict()
        for unit in self.units:
            layers.update(unit.named_layers())
        return layers

    def slots(self, trainable_only=False):
        """
        (name, LayerParams, field, tensor) of every tensor, in the fixed order
        """
        for full_name, layer in self.layers().items():
            fields = layer.params.trainable() if trainable_only else layer.params.tensors()
            for field, tensor in fields.items():
                yield "%s.%s" % (full_name, field), layer.params, field, tensor

    def parameters(self):
        """
        Trainable tensors by name, running statistics excluded
        """
        return collections.OrderedDict((name, t) for name, _, _, t in self.slots(True))

    def state(self):
        """
        All the tensors by name, running statistics included
        """
        return collections.OrderedDict((name, t) for name, _, _, t in self.slots(False))

    def set_parameter(self, name, tensor):
        for slot_name, params, field, current in self.slots(False):
            if slot_name == name:
                if tensor.shape != current.shape:
                    raise ShapeError("Tensor %s has shape %s, got %s" % (name, list(current.shape), list(tensor.shape)))
                setattr(params, field, tensor)
                return
        raise KeyError(name)

    def load_state(self, state):
        """
        Replaces every tensor of the model. The names must match exactly.
        """
        expected = list(self.state().keys())
        if sorted(expected) != sorted(state.keys()):
            missing = sorted(set(expected) - set(state.keys()))
            unknown = sorted(set(state.keys()) - set(expected))
            raise ConfigError("State doesn't match the model: missing %s, unknown %s" % (missing, unknown))

        for name, params, field, current in list(self.slots(False)):
            value = state[name]
            data = value.data if isinstance(value, Tensor) else np.asarray(value)
            if data.size != current.size:
                raise ShapeError("Tensor %s has %d elements, got %d" % (name, current.size, data.size))
            setattr(params, field, Tensor(
                data.reshape(current.shape).astype(current.dtype), requires_grad=current.requires_grad
            ))

    def param_count(self):
        return sum(t.size for t in self.parameters().values())

    def __repr__(self):
        return "Model(%s, %d units, %d parameters)" % (self.config.variant, len(self.units), self.param_count())


def assemble_network(cfg, seed=0):
    """
    Stem 3 x 3 convolution, then for every stage its dense blocks followed by
    a 2 x 2 average pool (except after the last stage), then BN, LReLU, global
    average pool and the linear classifier. Weights are drawn from a generator
    seeded with `seed`.
    """
    cfg.validate()
    gain = leaky_relu_gain(cfg.slope)

    units = [Unit("stem", [Conv("conv", ConvSpec.standard(3, IMAGE_CHANNELS, cfg.init_channels), gain=gain)])]
    channels = cfg.init_channels

    for s, (n_blocks, d) in enumerate(cfg.stages, 1):
        growth = growth_channels(d, cfg.base_growth)
        for b in range(1, n_blocks + 1):
            block_cfg = cfg.block_config(channels, growth)
            name = "stage%d.block%d" % (s, b)
            if cfg.variant == EFFCNET:
                block = build_effcnet_block(block_cfg, name)
            else:
                block = build_condensenet_block_static(block_cfg, cfg.groups, name)
            units.append(block)
            channels = block.out_channels

        if s < len(cfg.stages):
            units.append(Unit("transition%d" % s, [AvgPool("pool", 2)]))

    head = []
    if cfg.batch_norm:
        head.append(BatchNorm("bn", channels))
    head += [
        LeakyReLU("relu", cfg.slope),
        GlobalAvgPool("pool"),
        Linear("linear", channels, cfg.num_classes, zero_init=cfg.zero_head),
    ]
    units.append(Unit("head", head))

    model = Model(cfg, units)
    init_weights(model, seed)
    return model


def init_weights(model, seed=0):
    """
    Fan-in scaled normal convolution weights with the leaky ReLU gain, BN
    gamma 1 and beta 0, zero linear bias
    """
    rng = np.random.default_rng(seed)
    for unit in model.units:
        unit.reset_parameters(rng)
    return model


def forward(model, batch, mode='eval', rng=None):
    """
    Logits [N, classes] of a batch [N, 3, H, W]. Train mode updates the BN
    running statistics and draws dropout masks from rng.
    """
    if mode not in MODES:
        raise ConfigError("Unknown mode: %s" % mode)
    if batch.ndim != 4 or tuple(batch.shape[1:]) != model.input_shape:
        raise ShapeError("Expected a batch of shape [N, %d, %d, %d], got %s" % (
            model.input_shape + (list(batch.shape),)
        ))

    x = batch
    for unit in model.units:
        x = unit.forward(x, mode, rng)
    return x


__all__ = ['Model', 'assemble_network', 'init_weights', 'forward', 'MODES']

# vim: ft=python:ts=4:sw=4
