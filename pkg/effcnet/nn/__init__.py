#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#

from .params import *
from .conv import *
from .activation import *
from .normalization import *
from .regularization import *
from .pooling import *
from .linear import *
from .loss import *

# vim: ft=python:ts=4:sw=4
