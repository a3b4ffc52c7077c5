#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# preview.py - Writes augmented copies of an image
#

import os

import numpy as np

from effcnet.formatting import print_c
from effcnet.errors import IoError, UsageError
from effcnet.resources import find_file
from effcnet.augment import load_policy_file, augment_batch
from effcnet.runtime import read_image, save_ppm


def run(args):
    if args.count < 1:
        raise UsageError("--count must be positive, got %d" % args.count)
    image = read_image(args.image)
    policy = load_policy_file(find_file(args.policy))
    rng = np.random.default_rng(args.seed)

    try:
        os.makedirs(args.out, exist_ok=True)
    except OSError as e:
        raise IoError("Can't create %s: %s" % (args.out, e))

    for i in range(args.count):
        augmented, = augment_batch([image], policy, rng)
        save_ppm(augmented, os.path.join(args.out, "preview-%03d.ppm" % i))

    print_c("Wrote %d images in %s" % (args.count, args.out), color="green")
    return 0


def setup_parser(subparsers):
    parser = subparsers.add_parser(
        'augment-preview',
        help="Write augmented copies of an image.",
        description="Applies a sub-policy, chosen at random for every copy, to an image and writes the copies as "
                    "portable pixmaps.",
    )
    parser.add_argument('--image', required=True, metavar='PATH', help="Raw planar image or 32x32 pixmap.")
    parser.add_argument(
        '--policy',
        default='cifar10.policy',
        metavar='PATH',
        help="Augmentation policy file, or the name of a shipped one. Default: %(default)s."
    )
    parser.add_argument('--count', type=int, default=8, metavar='N', help="Number of copies. Default: %(default)s.")
    parser.add_argument('--out', required=True, metavar='DIR', help="Output directory.")
    parser.add_argument('--seed', type=int, default=0, metavar='S', help="Random seed. Default: %(default)s.")
    parser.set_defaults(command=run)
    return parser


__all__ = ['run', 'setup_parser']

# vim: ft=python:ts=4:sw=4
