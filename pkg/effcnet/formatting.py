#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# formatting.py - Colored terminal output
#

import sys

from termcolor import colored


def print_c(text, color=None, file=None, end='\n'):
    """
    Prints a text in color. Plain text is printed when the output is not a
    terminal, so files and pipes don't receive escape codes.
    """
    file = sys.stdout if file is None else file

    if color is not None and getattr(file, 'isatty', lambda: False)():
        text = colored(text, color)

    print(text, file=file, end=end)
    file.flush()


def print_error(error, file=None):
    """
    Reports an error to the user
    """
    file = sys.stderr if file is None else file
    print_c("ERROR! ", color="light_red", file=file, end='')
    print(error, file=file)


__all__ = ['print_c', 'print_error']

# vim: ft=python:ts=4:sw=4
