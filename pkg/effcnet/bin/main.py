#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# main.py - The effcnet command line
#

import sys
import argparse

from effcnet import __version__
from effcnet.errors import EffCNetError, UsageError
from effcnet.formatting import print_error
from effcnet.log import configure_logging
from effcnet.bin import train, evaluate, classify, analyze, preview

COMMANDS = (train, evaluate, classify, analyze, preview)


class ArgumentParser(argparse.ArgumentParser):
    """
    Reports bad command lines as UsageError instead of exiting
    """

    def error(self, message):
        raise UsageError("%s: %s" % (self.prog, message))


def build_parser():
    parser = ArgumentParser(
        prog='effcnet',
        description="Train, evaluate, analyze and deploy EffCNet image classifiers.",
        epilog='\n'.join([
            "Notes:",
            "  Configuration, policy and label paths that don't exist are looked up",
            "  among the shipped resources, so --config effcnet-cifar10.ini works",
            "  from any directory.",
            "",
        ]),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    parser.add_argument(
        '--verbose', '-v',
        action='count',
        default=0,
        help="Log library events on the standard error, repeat for debug messages."
    )
    subparsers = parser.add_subparsers(dest='command_name', metavar='COMMAND')
    subparsers.required = True
    for command in COMMANDS:
        command.setup_parser(subparsers)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        configure_logging(args.verbose)
        return args.command(args)

    except UsageError as e:
        print_error(e)
        return 2

    except (EffCNetError, IOError, ValueError) as e:
        print_error(e)
        return 1


if __name__ == '__main__':
    sys.exit(main())

# vim: ft=python:ts=4:sw=4
