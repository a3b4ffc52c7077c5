#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# EffCNet - Dense networks of depthwise-separable blocks for embedded image
# classification, with the tools to train, analyze and deploy them
#

__version__ = '1.0.0'

__all__ = ['__version__']

# vim: ft=python:ts=4:sw=4
