#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# common.py - Helpers shared by the command line tools
#

from effcnet.config import Config
from effcnet.data import load_cifar
from effcnet.resources import find_file


def load_config(path):
    """
    Loads a configuration file, falling back to the shipped configuration of
    the same name
    """
    return Config.load(find_file(path))


def load_split(data_dir, variant, split, per_class=0):
    """
    One split of a CIFAR variant, reduced to the first `per_class` records of
    every class when per_class > 0
    """
    ds = load_cifar(data_dir, variant, split)
    return ds.subset(per_class) if per_class > 0 else ds


def add_data_argument(parser, required=True):
    parser.add_argument(
        '--data',
        required=required,
        metavar='DIR',
        help="Directory holding the binary CIFAR files, as extracted from the official archives."
    )


__all__ = ['load_config', 'load_split', 'add_data_argument']

# vim: ft=python:ts=4:sw=4
