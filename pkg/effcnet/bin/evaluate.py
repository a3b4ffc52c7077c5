#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# evaluate.py - Test accuracy of a checkpoint
#

import sys

from effcnet.formatting import print_c
from effcnet.runtime import read_checkpoint
from effcnet.training import evaluate
from effcnet.bin.common import load_split, add_data_argument


def run(args):
    checkpoint = read_checkpoint(args.ckpt)
    if not checkpoint.checksum_ok:
        print_c("Checksum mismatch, the checkpoint may be corrupted.", color="yellow", file=sys.stderr)
    model = checkpoint.build_model()

    data = checkpoint.data
    test_ds = load_split(args.data, data.dataset, 'test', data.test_subset)
    top1, top5, loss = evaluate(model, test_ds, args.batch_size, data.mean, data.std)

    print("top1: %.6f" % top1)
    print("top5: %.6f" % top5)
    print("loss: %.6f" % loss)
    return 0


def setup_parser(subparsers):
    parser = subparsers.add_parser(
        'eval',
        help="Evaluate a checkpoint on the test split.",
        description="Prints the top-1 and top-5 accuracy of a checkpoint on the test split of its dataset.",
    )
    parser.add_argument('--ckpt', required=True, metavar='PATH', help="Checkpoint file.")
    add_data_argument(parser)
    parser.add_argument(
        '--batch-size',
        type=int,
        default=256,
        metavar='N',
        help="Evaluation batch size, it doesn't change the result. Default: %(default)s."
    )
    parser.set_defaults(command=run)
    return parser


__all__ = ['run', 'setup_parser']

# vim: ft=python:ts=4:sw=4
