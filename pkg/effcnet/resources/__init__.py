#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# Reference configurations, augmentation policies and class names shipped with
# the package
#

import os

from effcnet.errors import IoError
from effcnet.log import get_logger

RESOURCES_DIR = os.path.dirname(os.path.abspath(__file__))

_log = get_logger(__name__)


def resource_path(name):
    """
    Full path of a shipped resource
    """
    path = os.path.join(RESOURCES_DIR, name)
    if not os.path.isfile(path):
        raise IoError("Resource %s doesn't exist" % name)
    return path


def find_file(name):
    """
    A path as given when it exists. A bare file name that doesn't exist in the
    working directory names a shipped resource.
    """
    if os.path.isfile(name):
        return name
    if os.path.dirname(name):
        raise IoError("File %s doesn't exist" % name)

    path = resource_path(name)
    _log.debug("shipped_resource", name=name, path=path)
    return path


def resources():
    return sorted(f for f in os.listdir(RESOURCES_DIR) if not f.endswith('.py') and not f.startswith('__'))


__all__ = ['resource_path', 'find_file', 'resources', 'RESOURCES_DIR']

# vim: ft=python:ts=4:sw=4
