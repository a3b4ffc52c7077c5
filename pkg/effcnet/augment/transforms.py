#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# transforms.py - Image transforms driven by a magnitude bin
#
# Images are H x W x 3 uint8 arrays. Magnitude bins 0..10 map linearly onto
# the physical range of each operation:
#
#   operation        per bin       bin 10
#   rotate           3 degrees     30 degrees
#   shear_x/y        0.03          0.3
#   translate_x/y    1 pixel       10 pixels
#   flip_horizontal  any bin > 0 flips
#   brightness       +0.09         factor 1.9
#   contrast         +0.09         factor 1.9
#   cutout           2 pixels      20 x 20 square
#
# Geometric operations resample with nearest neighbor and fill with zeros.
# Bin 0 is the identity for every operation.
#

import numpy as np
from PIL import Image, ImageEnhance

from effcnet.errors import ConfigError, ShapeError

MAX_MAGNITUDE = 10

ROTATE_DEGREES = 3.0
SHEAR = 0.03
TRANSLATE_PIXELS = 1
ENHANCE = 0.09
CUTOUT_PIXELS = 2

_NEAREST = getattr(Image, 'Resampling', Image).NEAREST
_AFFINE = getattr(Image, 'Transform', Image).AFFINE
_FLIP_LEFT_RIGHT = getattr(Image, 'Transpose', Image).FLIP_LEFT_RIGHT


def _sign(rng):
    """
    Direction of a geometric operation: positive without a generator, random
    otherwise
    """
    if rng is None:
        return 1
    return -1 if rng.random() < 0.5 else 1


def _affine(img, data):
    return img.transform(img.size, _AFFINE, data, resample=_NEAREST, fillcolor=(0, 0, 0))


def _rotate(img, magnitude, rng):
    degrees = _sign(rng) * ROTATE_DEGREES * magnitude
    return img.rotate(degrees, resample=_NEAREST, fillcolor=(0, 0, 0))


def _shear_x(img, magnitude, rng):
    return _affine(img, (1, _sign(rng) * SHEAR * magnitude, 0, 0, 1, 0))


def _shear_y(img, magnitude, rng):
    return _affine(img, (1, 0, 0, _sign(rng) * SHEAR * magnitude, 1, 0))


def _translate_x(img, magnitude, rng):
    # Output column c samples input column c - shift
    shift = _sign(rng) * TRANSLATE_PIXELS * magnitude
    return _affine(img, (1, 0, -shift, 0, 1, 0))


def _translate_y(img, magnitude, rng):
    shift = _sign(rng) * TRANSLATE_PIXELS * magnitude
    return _affine(img, (1, 0, 0, 0, 1, -shift))


def _flip_horizontal(img, magnitude, rng):
    return img.transpose(_FLIP_LEFT_RIGHT)


def _brightness(img, magnitude, rng):
    return ImageEnhance.Brightness(img).enhance(1.0 + ENHANCE * magnitude)


def _contrast(img, magnitude, rng):
    return ImageEnhance.Contrast(img).enhance(1.0 + ENHANCE * magnitude)


def cutout_box(height, width, magnitude, rng=None):
    """
    (top, left, bottom, right) of the cutout square, clipped to the image. The
    square is centered unless a generator picks the center.
    """
    side = CUTOUT_PIXELS * magnitude
    if rng is None:
        center_r, center_c = height // 2, width // 2
    else:
        center_r, center_c = int(rng.integers(0, height)), int(rng.integers(0, width))
    top, left = max(0, center_r - side // 2), max(0, center_c - side // 2)
    bottom, right = min(height, center_r - side // 2 + side), min(width, center_c - side // 2 + side)
    return top, left, bottom, right


def _cutout(image, magnitude, rng):
    out = image.copy()
    top, left, bottom, right = cutout_box(image.shape[0], image.shape[1], magnitude, rng)
    out[top:bottom, left:right, :] = 0
    return out


class Transform(object):
    """
    One augmentation operation. `pil` transforms work on PIL images, the
    others on the uint8 array.
    """

    def __init__(self, name, function, pil=True):
        self.name = name
        self.function = function
        self.pil = pil

    def __call__(self, image, magnitude, rng=None):
        if magnitude == 0:
            return image.copy()
        if not self.pil:
            return self.function(image, magnitude, rng)
        img = Image.fromarray(np.ascontiguousarray(image))
        return np.asarray(self.function(img, magnitude, rng), dtype=np.uint8).copy()

    def __repr__(self):
        return "<%s>" % self.name


TRANSFORMS = {t.name: t for t in [
    Transform('rotate', _rotate),
    Transform('shear_x', _shear_x),
    Transform('shear_y', _shear_y),
    Transform('translate_x', _translate_x),
    Transform('translate_y', _translate_y),
    Transform('flip_horizontal', _flip_horizontal),
    Transform('brightness', _brightness),
    Transform('contrast', _contrast),
    Transform('cutout', _cutout, pil=False),
]}

OP_TYPES = tuple(sorted(TRANSFORMS))


def check_image(image):
    if not isinstance(image, np.ndarray) or image.dtype != np.uint8 or image.ndim != 3 or image.shape[2] != 3:
        raise ShapeError("Expected an H x W x 3 uint8 image, got %s" % (
            "%s %s" % (image.dtype, list(image.shape)) if isinstance(image, np.ndarray) else type(image).__name__
        ))


def apply_transform(image, op_type, magnitude, rng=None):
    """
    Applies one operation at a magnitude bin. With a generator the geometric
    operations pick a random direction and cutout a random position.
    """
    if op_type not in TRANSFORMS:
        raise ConfigError("Unknown augmentation operation: %s" % op_type)
    if not 0 <= magnitude <= MAX_MAGNITUDE or int(magnitude) != magnitude:
        raise ConfigError("Magnitude must be an integer bin in [0, %d], got %r" % (MAX_MAGNITUDE, magnitude))
    check_image(image)
    return TRANSFORMS[op_type](image, int(magnitude), rng)


def random_crop_flip(image, rng, pad=4):
    """
    Zero pads every side by `pad` pixels, takes a random crop of the original
    size and flips it horizontally with probability 0.5
    """
    check_image(image)
    height, width, _ = image.shape
    padded = np.pad(image, ((pad, pad), (pad, pad), (0, 0)))
    top, left = int(rng.integers(0, 2 * pad + 1)), int(rng.integers(0, 2 * pad + 1))
    out = padded[top:top + height, left:left + width, :]
    if rng.random() < 0.5:
        out = out[:, ::-1, :]
    return np.ascontiguousarray(out)


__all__ = [
    'Transform', 'TRANSFORMS', 'OP_TYPES', 'MAX_MAGNITUDE', 'apply_transform', 'random_crop_flip',
    'cutout_box', 'check_image',
]

# vim: ft=python:ts=4:sw=4
