#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# train.py - Trains a network and writes a run directory
#

import sys
from dataclasses import replace

from effcnet.errors import UsageError
from effcnet.config import default_config_path, CONFIG_ENV
from effcnet.formatting import print_c
from effcnet.model import NetworkConfig, assemble_network
from effcnet.data import DataConfig, DEFAULT_STATS, CLASS_COUNT, VARIANTS
from effcnet.training import TrainConfig, train
from effcnet.bin.common import load_config, load_split, add_data_argument


def resolve_configs(args):
    """
    Network, training and data configuration of the run, with the command line
    overrides applied
    """
    path = args.config or default_config_path()
    if not path:
        raise UsageError("No configuration given, use --config or set %s" % CONFIG_ENV)
    config = load_config(path)

    network = NetworkConfig.from_config(config)
    training = TrainConfig.from_config(config)
    data = DataConfig.from_config(config)

    if args.dataset and args.dataset != data.dataset:
        mean, std = DEFAULT_STATS[args.dataset]
        data = replace(data, dataset=args.dataset, mean=mean, std=std)
    if network.num_classes != CLASS_COUNT[data.dataset]:
        network = network.with_classes(CLASS_COUNT[data.dataset])
    if args.subset is not None:
        data = replace(data, subset=args.subset)

    overrides = {}
    if args.epochs is not None:
        overrides['epochs'] = args.epochs
    if args.seed is not None:
        overrides['seed'] = args.seed
    if args.policy is not None:
        overrides['policy_path'] = args.policy
    if args.deterministic:
        overrides['deterministic'] = True
    overrides['progress'] = not args.quiet
    training = replace(training, **overrides)

    training.validate()
    data.validate()
    return training.apply_to(network), training, data


def run(args):
    network, training, data = resolve_configs(args)

    train_ds = load_split(args.data, data.dataset, 'train', data.subset)
    test_ds = load_split(args.data, data.dataset, 'test', data.test_subset)

    model = assemble_network(network, seed=training.seed)
    print_c("Training %r on %d records, testing on %d" % (model, len(train_ds), len(test_ds)), color="white",
            file=sys.stderr)

    best, records = train(model, train_ds, test_ds, training, run_dir=args.out, data_cfg=data, out=sys.stdout)

    print_c("Best top-1 %s at epoch %s, run directory: %s" % (
        best.metadata['top1'], best.metadata['epoch'], args.out
    ), color="green", file=sys.stderr)
    return 0


def setup_parser(subparsers):
    parser = subparsers.add_parser(
        'train',
        help="Train a network.",
        description="Trains a network and writes the run directory: config.snapshot, metrics.csv, best.ckpt and "
                    "last.ckpt. One metrics line per epoch is printed on the standard output.",
    )
    parser.add_argument(
        '--config',
        metavar='PATH',
        help="Configuration file, or the name of a shipped one. Defaults to the %s environment "
             "variable." % CONFIG_ENV
    )
    add_data_argument(parser)
    parser.add_argument(
        '--dataset',
        choices=VARIANTS,
        help="Dataset variant, overrides [data] dataset."
    )
    parser.add_argument(
        '--subset',
        type=int,
        metavar='N',
        help="Train on the first N records of every class."
    )
    parser.add_argument('--epochs', type=int, metavar='E', help="Number of epochs.")
    parser.add_argument('--seed', type=int, metavar='S', help="Random seed of the run.")
    parser.add_argument('--policy', metavar='PATH', help="Augmentation policy file.")
    parser.add_argument(
        '--out',
        metavar='DIR',
        default='run',
        help="Run directory, created if missing. Default: %(default)s."
    )
    parser.add_argument(
        '--deterministic',
        action='store_true',
        help="Serial execution and zero wall times, so two runs give byte-identical outputs."
    )
    parser.add_argument('--quiet', '-q', action='store_true', help="Don't show the progress bars.")
    parser.set_defaults(command=run)
    return parser


__all__ = ['run', 'setup_parser', 'resolve_configs']

# vim: ft=python:ts=4:sw=4
