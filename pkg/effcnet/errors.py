#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# errors.py - Exceptions raised by the toolkit
#


class EffCNetError(Exception):
    """
    Base class of all the errors raised by the toolkit
    """
    @property
    def message(self):
        return str(self)


class ShapeError(EffCNetError):
    """ Tensor shapes or extents are not compatible with the operation """


class TapeError(EffCNetError):
    """ The differentiation tape is used in an invalid way """


class NumericsError(EffCNetError):
    """ A computation produced or received non-finite values """


class ConfigError(EffCNetError):
    """ Invalid configuration values """


class ParseError(EffCNetError):
    """ Syntax error in a text input """


class DataError(EffCNetError):
    """ Invalid data, like labels out of range or empty datasets """


class FormatError(EffCNetError):
    """ A binary or image file doesn't follow its format """


class IoError(EffCNetError, IOError):
    """ A file can't be found or read """


class UsageError(EffCNetError):
    """ Bad command line usage """


__all__ = [
    'EffCNetError', 'ShapeError', 'TapeError', 'NumericsError', 'ConfigError',
    'ParseError', 'DataError', 'FormatError', 'IoError', 'UsageError',
]

# vim: ft=python:ts=4:sw=4
