#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# config.py - Network and block configuration
#

import collections
from dataclasses import dataclass, field, replace

from effcnet.config import Config
from effcnet.errors import ConfigError
from effcnet.nn.activation import DEFAULT_SLOPE

EFFCNET = 'effcnet'
CONDENSENET_STATIC = 'condensenet_static'
VARIANTS = (EFFCNET, CONDENSENET_STATIC)


def growth_channels(d, x0):
    """
    Growth rate of the blocks of stage d: 2^d * x0
    """
    if d < 0 or x0 < 1:
        raise ConfigError("Growth needs d >= 0 and x0 >= 1, got d=%d x0=%d" % (d, x0))
    return (2 ** d) * x0


@dataclass(frozen=True)
class BlockConfig:
    in_channels: int
    growth: int
    dropout_rate: float = 0.0
    permute_groups: int = 4
    dw_kernel: int = 3
    bottleneck_factor: int = 4
    slope: float = DEFAULT_SLOPE
    single_pointwise: bool = False
    batch_norm: bool = True

    @property
    def bottleneck_channels(self):
        return self.bottleneck_factor * self.growth

    @property
    def out_channels(self):
        return self.in_channels + self.growth

    def validate(self):
        if self.in_channels < 1 or self.growth < 1 or self.bottleneck_factor < 1:
            raise ConfigError("Block channels must be positive: in=%d k=%d factor=%d" % (
                self.in_channels, self.growth, self.bottleneck_factor
            ))
        if self.dw_kernel < 1 or self.dw_kernel % 2 == 0:
            raise ConfigError("Depthwise kernel must be a positive odd number, got %d" % self.dw_kernel)
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ConfigError("Dropout rate must be in [0, 1), got %r" % self.dropout_rate)
        if not 0.0 < self.slope < 1.0:
            raise ConfigError("The leaky slope must be in (0, 1), got %r" % self.slope)
        if not self.single_pointwise:
            if self.permute_groups < 1 or self.bottleneck_channels % self.permute_groups:
                raise ConfigError("%d permute groups don't divide %d intermediate channels" % (
                    self.permute_groups, self.bottleneck_channels
                ))


@dataclass(frozen=True)
class NetworkConfig:
    """
    Whole-network configuration. `stages` lists (number of blocks, stage index
    d) pairs, the blocks of stage d growing by 2^d * base_growth channels.
    """
    stages: tuple = ((6, 0), (6, 1), (6, 2))
    base_growth: int = 10
    init_channels: int = 24
    num_classes: int = 10
    bottleneck_factor: int = 4
    variant: str = EFFCNET
    groups: int = 4
    permute_groups: int = 4
    dw_kernel: int = 3
    dropout_rate: float = 0.0
    slope: float = DEFAULT_SLOPE
    single_pointwise: bool = False
    batch_norm: bool = True
    zero_head: bool = False
    input_size: int = 32
    label: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'stages', tuple((int(n), int(d)) for n, d in self.stages))

    def growth_rates(self):
        return [growth_channels(d, self.base_growth) for _, d in self.stages]

    def block_config(self, in_channels, growth):
        return BlockConfig(
            in_channels=in_channels,
            growth=growth,
            dropout_rate=self.dropout_rate,
            permute_groups=self.permute_groups,
            dw_kernel=self.dw_kernel,
            bottleneck_factor=self.bottleneck_factor,
            slope=self.slope,
            single_pointwise=self.single_pointwise,
            batch_norm=self.batch_norm,
        )

    def with_classes(self, num_classes):
        return replace(self, num_classes=num_classes)

    def validate(self):
        if self.variant not in VARIANTS:
            raise ConfigError("Unknown network variant %r, expected one of %s" % (self.variant, ", ".join(VARIANTS)))
        if self.num_classes < 2:
            raise ConfigError("A classifier needs at least 2 classes, got %d" % self.num_classes)
        if self.base_growth < 1 or self.init_channels < 1 or self.bottleneck_factor < 1:
            raise ConfigError("base_growth, init_channels and bottleneck_factor must be positive")
        if self.groups < 1:
            raise ConfigError("groups must be positive, got %d" % self.groups)

        previous = None
        for n_blocks, d in self.stages:
            if n_blocks < 1 or d < 0:
                raise ConfigError("Invalid stage (%d blocks, d=%d)" % (n_blocks, d))
            if previous is not None and d <= previous:
                raise ConfigError("Stage growth rates must strictly increase, got d=%d after d=%d" % (d, previous))
            previous = d

        reduction = 2 ** max(len(self.stages) - 1, 0)
        if self.input_size < 1 or self.input_size % reduction:
            raise ConfigError("Input size %d can't be halved %d times" % (self.input_size, len(self.stages) - 1))

    @classmethod
    def from_config(cls, config):
        """
        Reads the [network] section of a Config
        """
        s = config.required_section('network')
        defaults = cls()

        stages = []
        for i, item in enumerate(s.get_list('stages', default=[])):
            n_blocks, _, d = item.partition(':')
            try:
                stages.append((int(n_blocks), int(d) if d else i))
            except ValueError:
                raise ConfigError("Option [network] stages must be a list of blocks[:d], got %r" % item)

        cfg = cls(
            stages=tuple(stages) if 'stages' in s else defaults.stages,
            base_growth=s.get_int('base_growth', defaults.base_growth),
            init_channels=s.get_int('init_channels', defaults.init_channels),
            num_classes=s.get_int('num_classes', defaults.num_classes),
            bottleneck_factor=s.get_int('bottleneck_factor', defaults.bottleneck_factor),
            variant=s.get_str('variant', defaults.variant),
            groups=s.get_int('groups', defaults.groups),
            permute_groups=s.get_int('permute_groups', defaults.permute_groups),
            dw_kernel=s.get_int('dw_kernel', defaults.dw_kernel),
            dropout_rate=s.get_float('dropout_rate', defaults.dropout_rate),
            slope=s.get_float('slope', defaults.slope),
            single_pointwise=s.get_bool('single_pointwise', defaults.single_pointwise),
            batch_norm=s.get_bool('batch_norm', defaults.batch_norm),
            zero_head=s.get_bool('zero_head', defaults.zero_head),
            input_size=s.get_int('input_size', defaults.input_size),
            label=s.get_str('label', ""),
        )
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path):
        return cls.from_config(Config.load(path))

    @classmethod
    def from_string(cls, text):
        return cls.from_config(Config.from_string(text))

    def to_section(self):
        """
        Options of the [network] section, in a fixed order
        """
        section = collections.OrderedDict()
        section['variant'] = self.variant
        section['stages'] = ", ".join("%d:%d" % stage for stage in self.stages)
        section['base_growth'] = self.base_growth
        section['init_channels'] = self.init_channels
        section['num_classes'] = self.num_classes
        section['bottleneck_factor'] = self.bottleneck_factor
        section['groups'] = self.groups
        section['permute_groups'] = self.permute_groups
        section['dw_kernel'] = self.dw_kernel
        section['dropout_rate'] = repr(float(self.dropout_rate))
        section['slope'] = repr(float(self.slope))
        section['single_pointwise'] = 'yes' if self.single_pointwise else 'no'
        section['batch_norm'] = 'yes' if self.batch_norm else 'no'
        section['zero_head'] = 'yes' if self.zero_head else 'no'
        section['input_size'] = self.input_size
        if self.label:
            section['label'] = self.label
        return section


__all__ = [
    'BlockConfig', 'NetworkConfig', 'growth_channels', 'EFFCNET', 'CONDENSENET_STATIC', 'VARIANTS',
]

# vim: ft=python:ts=4:sw=4
