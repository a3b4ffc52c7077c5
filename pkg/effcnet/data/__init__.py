#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#

from .cifar import *
from .normalize import *
from .batches import *

# vim: ft=python:ts=4:sw=4
