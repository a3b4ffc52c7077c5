#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# classify.py - Classifies a single image
#

import sys

from effcnet.formatting import print_c
from effcnet.resources import find_file
from effcnet.runtime import read_checkpoint, read_image, load_labels, classify_image


def run(args):
    checkpoint = read_checkpoint(args.ckpt)
    if not checkpoint.checksum_ok:
        print_c("Checksum mismatch, the checkpoint may be corrupted.", color="yellow", file=sys.stderr)
    model = checkpoint.build_model()

    labels = load_labels(find_file(args.labels or "%s.labels" % checkpoint.data.dataset))
    image = read_image(args.image)
    result = classify_image(model, image, labels, checkpoint.data)

    name, probability = result.best
    print_c("%s (%.2f%%)" % (name, 100.0 * probability), color="green")
    print(result.format(args.top))
    return 0


def setup_parser(subparsers):
    parser = subparsers.add_parser(
        'classify',
        help="Classify one image.",
        description="Ranks the classes of a 32x32 image, given as a raw 3072-byte planar file or as a portable "
                    "pixmap, and reports the preprocessing and inference latency in milliseconds.",
    )
    parser.add_argument('--ckpt', required=True, metavar='PATH', help="Checkpoint file.")
    parser.add_argument('--image', required=True, metavar='PATH', help="Image to classify.")
    parser.add_argument(
        '--labels',
        metavar='PATH',
        help="Class names, one per line. Defaults to the shipped names of the checkpoint dataset."
    )
    parser.add_argument('--top', type=int, metavar='K', help="Show only the K most likely classes.")
    parser.set_defaults(command=run)
    return parser


__all__ = ['run', 'setup_parser']

# vim: ft=python:ts=4:sw=4
