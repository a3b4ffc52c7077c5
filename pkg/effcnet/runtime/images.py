#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# images.py - Single image decoding and portable pixmap output
#

import io

import numpy as np
from PIL import Image, UnidentifiedImageError

from effcnet.errors import FormatError, IoError
from effcnet.data.cifar import IMAGE_SIZE, PIXEL_BYTES


def decode_image(data, source="<bytes>"):
    """
    H x W x 3 uint8 image from the bytes of a raw 3072-byte planar file (red,
    green then blue plane, as in the CIFAR records) or of a 32 x 32 pixmap
    """
    if len(data) == PIXEL_BYTES:
        planes = np.frombuffer(data, dtype=np.uint8).reshape(3, IMAGE_SIZE, IMAGE_SIZE)
        return np.ascontiguousarray(planes.transpose(1, 2, 0))

    try:
        with Image.open(io.BytesIO(data)) as image:
            image.load()
            size = image.size
            image = image.convert('RGB')
    except (UnidentifiedImageError, OSError, SyntaxError) as e:
        raise FormatError("%s is neither a raw %d-byte image nor a pixmap: %s" % (source, PIXEL_BYTES, e))

    if size != (IMAGE_SIZE, IMAGE_SIZE):
        raise FormatError("%s is %dx%d, expected %dx%d" % ((source,) + size + (IMAGE_SIZE, IMAGE_SIZE)))
    return np.asarray(image, dtype=np.uint8).copy()


def read_image(path):
    try:
        with io.open(path, 'rb') as f:
            data = f.read()
    except (IOError, OSError) as e:
        raise IoError("Can't read image %s: %s" % (path, e))
    return decode_image(data, path)


def save_ppm(image, path):
    """
    Writes an H x W x 3 uint8 image as a binary portable pixmap
    """
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[2] != 3 or image.dtype != np.uint8:
        raise FormatError("Expected an H x W x 3 uint8 image, got %s %s" % (image.dtype, list(image.shape)))
    try:
        Image.fromarray(np.ascontiguousarray(image)).save(path, format='PPM')
    except (IOError, OSError) as e:
        raise IoError("Can't write image %s: %s" % (path, e))


__all__ = ['decode_image', 'read_image', 'save_ppm']

# vim: ft=python:ts=4:sw=4
