#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#

from .tensor import *
from .tape import *
from .function import *
from .ops import *
from .gradcheck import *

# vim: ft=python:ts=4:sw=4
