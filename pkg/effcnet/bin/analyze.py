#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# analyze.py - Parameter and FLOP report of a network
#

from effcnet.errors import UsageError
from effcnet.model import NetworkConfig, assemble_network, analyze, compare
from effcnet.runtime import read_checkpoint
from effcnet.bin.common import load_config


def load_network(config_path=None, ckpt_path=None):
    """
    NetworkConfig from a configuration file or from a checkpoint
    """
    if ckpt_path:
        return read_checkpoint(ckpt_path).network
    return NetworkConfig.from_config(load_config(config_path))


def run(args):
    if bool(args.config) == bool(args.ckpt):
        raise UsageError("Give exactly one of --config and --ckpt")

    report = analyze(assemble_network(load_network(args.config, args.ckpt)), detailed=args.detailed)
    print(report.to_csv() if args.csv else report.to_table(), end='')

    if args.baseline:
        baseline = analyze(assemble_network(load_network(args.baseline)), detailed=args.detailed)
        if args.csv:
            print(baseline.to_csv(), end='')
        else:
            print()
            print(baseline.to_table(), end='')
            print()
            print(compare(report, baseline), end='')
    return 0


def setup_parser(subparsers):
    parser = subparsers.add_parser(
        'analyze',
        help="Count parameters and FLOPs.",
        description="Prints the parameters and the multiply-accumulate FLOPs of a network, per block and in total. "
                    "With --baseline the two networks are also compared side by side.",
    )
    parser.add_argument('--config', metavar='PATH', help="Configuration file, or the name of a shipped one.")
    parser.add_argument('--ckpt', metavar='PATH', help="Analyze the network stored in a checkpoint.")
    parser.add_argument('--baseline', metavar='PATH', help="Configuration of the network to compare with.")
    parser.add_argument('--csv', action='store_true', help="Machine-readable output.")
    parser.add_argument('--detailed', action='store_true', help="One row per layer instead of one per block.")
    parser.set_defaults(command=run)
    return parser


__all__ = ['run', 'setup_parser', 'load_network']

# vim: ft=python:ts=4:sw=4
