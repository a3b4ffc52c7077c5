#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# policy.py - Augmentation policies
#
# Policy files hold one sub-policy per line:
#
#   (op,probability,magnitude);(op,probability,magnitude)
#
# with `#` comments and blank lines ignored.
#

import io
import re
from dataclasses import dataclass

from effcnet.errors import ParseError, ConfigError, IoError
from effcnet.augment.transforms import TRANSFORMS, MAX_MAGNITUDE

OPS_PER_SUBPOLICY = 2

_OP_RE = re.compile(r'^\(\s*([A-Za-z_]+)\s*,\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)$')


@dataclass(frozen=True)
class AugOp:
    op_type: str
    probability: float
    magnitude: int

    def validate(self):
        if self.op_type not in TRANSFORMS:
            raise ConfigError("Unknown augmentation operation: %s" % self.op_type)
        if not 0.0 <= self.probability <= 1.0:
            raise ConfigError("Probability of %s must be in [0, 1], got %r" % (self.op_type, self.probability))
        if not 0 <= self.magnitude <= MAX_MAGNITUDE:
            raise ConfigError("Magnitude of %s must be in [0, %d], got %r" % (
                self.op_type, MAX_MAGNITUDE, self.magnitude
            ))

    def __str__(self):
        return "(%s,%s,%d)" % (self.op_type, repr(float(self.probability)), self.magnitude)


@dataclass(frozen=True)
class AugPolicy:
    """
    Ordered sub-policies of two operations each
    """
    sub_policies: tuple

    def __post_init__(self):
        object.__setattr__(self, 'sub_policies', tuple(tuple(s) for s in self.sub_policies))

    def validate(self):
        if not self.sub_policies:
            raise ConfigError("A policy needs at least one sub-policy")
        for sub_policy in self.sub_policies:
            if len(sub_policy) != OPS_PER_SUBPOLICY:
                raise ConfigError("Sub-policies have exactly %d operations, got %d" % (
                    OPS_PER_SUBPOLICY, len(sub_policy)
                ))
            for op in sub_policy:
                op.validate()

    def __len__(self):
        return len(self.sub_policies)

    def __getitem__(self, index):
        return self.sub_policies[index]

    def to_text(self):
        return "".join(";".join(str(op) for op in sub) + "\n" for sub in self.sub_policies)


def _parse_op(token, line_no):
    match = _OP_RE.match(token.strip())
    if match is None:
        raise ParseError("Line %d: malformed operation %r, expected (op,probability,magnitude)" % (line_no, token))

    name, probability, magnitude = match.groups()
    try:
        probability = float(probability)
    except ValueError:
        raise ParseError("Line %d: probability %r is not a number" % (line_no, probability))
    try:
        magnitude = int(magnitude)
    except ValueError:
        raise ParseError("Line %d: magnitude %r is not an integer bin" % (line_no, magnitude))

    return AugOp(name, probability, magnitude)


def load_policy(source):
    """
    Parses the text of a policy file. Syntax errors raise ParseError, values
    out of range and empty policies ConfigError.
    """
    sub_policies = []
    for line_no, line in enumerate(source.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        tokens = line.split(';')
        if len(tokens) != OPS_PER_SUBPOLICY:
            raise ParseError("Line %d: a sub-policy has exactly %d operations separated by ';', got %d" % (
                line_no, OPS_PER_SUBPOLICY, len(tokens)
            ))
        sub_policies.append(tuple(_parse_op(token, line_no) for token in tokens))

    policy = AugPolicy(sub_policies)
    policy.validate()
    return policy


def load_policy_file(path):
    try:
        with io.open(path, 'r', encoding='utf-8') as f:
            return load_policy(f.read())
    except (IOError, OSError) as e:
        raise IoError("Can't read policy file %s: %s" % (path, e))


__all__ = ['AugOp', 'AugPolicy', 'load_policy', 'load_policy_file', 'OPS_PER_SUBPOLICY']

# vim: ft=python:ts=4:sw=4
