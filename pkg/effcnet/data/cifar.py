#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# cifar.py - CIFAR-10 and CIFAR-100 binary files
#
# CIFAR-10 records are 3073 bytes: the label and 3072 pixel bytes. CIFAR-100
# records are 3074 bytes: the coarse label, the fine label and the pixels.
# Pixels are the R, G and B planes, each 1024 bytes of a row-major 32 x 32 map.
#

import io
import os
import collections

import numpy as np

from effcnet.errors import FormatError, IoError, DataError, ConfigError
from effcnet.log import get_logger

IMAGE_SIZE = 32
PIXEL_BYTES = 3 * IMAGE_SIZE * IMAGE_SIZE

CIFAR10 = 'cifar10'
CIFAR100 = 'cifar100'
VARIANTS = (CIFAR10, CIFAR100)
SPLITS = ('train', 'test')

RECORD_LENGTH = {CIFAR10: PIXEL_BYTES + 1, CIFAR100: PIXEL_BYTES + 2}
CLASS_COUNT = {CIFAR10: 10, CIFAR100: 100}
COARSE_CLASS_COUNT = 20

FILES = {
    (CIFAR10, 'train'): ["data_batch_%d.bin" % i for i in range(1, 6)],
    (CIFAR10, 'test'): ["test_batch.bin"],
    (CIFAR100, 'train'): ["train.bin"],
    (CIFAR100, 'test'): ["test.bin"],
}
SUBDIRS = {CIFAR10: "cifar-10-batches-bin", CIFAR100: "cifar-100-binary"}

DatasetRecord = collections.namedtuple('DatasetRecord', ['fine_label', 'coarse_label', 'pixels'])

_log = get_logger(__name__)


def _check_variant(variant, split=None):
    if variant not in VARIANTS:
        raise ConfigError("Unknown dataset %r, expected one of %s" % (variant, ", ".join(VARIANTS)))
    if split is not None and split not in SPLITS:
        raise ConfigError("Unknown split %r, expected one of %s" % (split, ", ".join(SPLITS)))


class Dataset(object):
    """
    Immutable set of CIFAR records. Pixels are kept as an N x 3072 uint8
    array in the file layout.
    """

    def __init__(self, pixels, labels, variant=CIFAR10, split='train', coarse_labels=None):
        _check_variant(variant, split)
        pixels = np.asarray(pixels, dtype=np.uint8).reshape(-1, PIXEL_BYTES)
        labels = np.asarray(labels, dtype=np.int64).reshape(-1)
        if pixels.shape[0] != labels.shape[0]:
            raise DataError("Got %d images and %d labels" % (pixels.shape[0], labels.shape[0]))
        if coarse_labels is not None:
            coarse_labels = np.asarray(coarse_labels, dtype=np.int64).reshape(-1)

        self.variant = variant
        self.split = split
        self.class_count = CLASS_COUNT[variant]
        self.pixels = pixels
        self.labels = labels
        self.coarse_labels = coarse_labels
        for name in ('pixels', 'labels', 'coarse_labels'):
            array = getattr(self, name)
            if array is not None:
                array = array.view()
                array.flags.writeable = False
                setattr(self, name, array)

        if labels.size and (labels.min() < 0 or labels.max() >= self.class_count):
            raise DataError("Labels must be in [0, %d)" % self.class_count)

    def __len__(self):
        return int(self.labels.shape[0])

    def __getitem__(self, index):
        coarse = None if self.coarse_labels is None else int(self.coarse_labels[index])
        return DatasetRecord(int(self.labels[index]), coarse, self.pixels[index].tobytes())

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    @property
    def records(self):
        return list(self)

    def planar(self, indices=None):
        """
        Images as N x 3 x 32 x 32 uint8
        """
        pixels = self.pixels if indices is None else self.pixels[indices]
        return pixels.reshape(-1, 3, IMAGE_SIZE, IMAGE_SIZE)

    def images(self, indices=None):
        """
        Images as N x 32 x 32 x 3 uint8, the layout of the augmentations
        """
        return np.ascontiguousarray(self.planar(indices).transpose(0, 2, 3, 1))

    def subset(self, count):
        """
        The first `count` records of every class, in file order
        """
        if count < 1:
            raise ConfigError("Subset size must be positive, got %d" % count)
        keep = np.zeros(len(self), dtype=bool)
        for label in range(self.class_count):
            keep[np.flatnonzero(self.labels == label)[:count]] = True
        return self.take(np.flatnonzero(keep))

    def take(self, indices):
        coarse = None if self.coarse_labels is None else self.coarse_labels[indices]
        return Dataset(self.pixels[indices], self.labels[indices], self.variant, self.split, coarse)

    def to_bytes(self):
        """
        Records serialized back in the binary file format
        """
        if self.variant == CIFAR10:
            labels = self.labels.reshape(-1, 1)
        else:
            coarse = self.coarse_labels if self.coarse_labels is not None else np.zeros_like(self.labels)
            labels = np.stack([coarse, self.labels], axis=1)
        return np.concatenate([labels.astype(np.uint8), self.pixels], axis=1).tobytes()

    def __repr__(self):
        return "Dataset(%s, %s, %d records)" % (self.variant, self.split, len(self))


def parse_records(data, variant=CIFAR10, split='train', source="<bytes>"):
    """
    Parses the content of a binary file
    """
    _check_variant(variant, split)
    length = RECORD_LENGTH[variant]
    if len(data) % length:
        raise FormatError("%s: size %d is not a multiple of the %d bytes %s record" % (
            source, len(data), length, variant
        ))

    raw = np.frombuffer(data, dtype=np.uint8).reshape(-1, length)
    if variant == CIFAR10:
        coarse, labels = None, raw[:, 0].astype(np.int64)
    else:
        coarse, labels = raw[:, 0].astype(np.int64), raw[:, 1].astype(np.int64)
        if coarse.size and coarse.max() >= COARSE_CLASS_COUNT:
            raise FormatError("%s: coarse label %d out of range" % (source, coarse.max()))

    if labels.size and labels.max() >= CLASS_COUNT[variant]:
        raise FormatError("%s: label %d out of range for %s" % (source, labels.max(), variant))

    return Dataset(raw[:, length - PIXEL_BYTES:], labels, variant, split, coarse)


def _resolve(path, variant, split):
    if os.path.isfile(path):
        return [path]
    for base in (path, os.path.join(path, SUBDIRS[variant])):
        files = [os.path.join(base, name) for name in FILES[(variant, split)]]
        if all(os.path.isfile(f) for f in files):
            return files
    raise IoError("Can't find %s %s files %s in %s" % (variant, split, ", ".join(FILES[(variant, split)]), path))


def load_cifar(path, variant=CIFAR10, split='train'):
    """
    Loads a split from the directory of the binary files, or from a single
    binary file
    """
    _check_variant(variant, split)

    parts = []
    for file_name in _resolve(path, variant, split):
        try:
            with io.open(file_name, 'rb') as f:
                data = f.read()
        except (IOError, OSError) as e:
            raise IoError("Can't read %s: %s" % (file_name, e))
        parts.append(parse_records(data, variant, split, source=file_name))

    coarse = None
    if variant == CIFAR100:
        coarse = np.concatenate([p.coarse_labels for p in parts])
    dataset = Dataset(
        np.concatenate([p.pixels for p in parts]), np.concatenate([p.labels for p in parts]), variant, split, coarse
    )
    _log.info("dataset_loaded", variant=variant, split=split, records=len(dataset), path=path)
    return dataset


__all__ = [
    'Dataset', 'DatasetRecord', 'load_cifar', 'parse_records',
    'CIFAR10', 'CIFAR100', 'VARIANTS', 'SPLITS', 'IMAGE_SIZE', 'PIXEL_BYTES', 'RECORD_LENGTH', 'CLASS_COUNT',
]

# vim: ft=python:ts=4:sw=4
