#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# checkpoint.py - Binary model checkpoints
#
# Layout, all integers little-endian:
#
#   8 bytes    magic "EFFCNET1"
#   u32        format version
#   u64        length of the configuration blob
#   ...        UTF-8 INI text: [network], [data] and [metadata] sections
#   records    u16 name length, name, u64 element count, little-endian f32
#              data, one per tensor in model order
#   u64        checksum of all the preceding bytes
#

import io
import struct
import hashlib
import collections

import numpy as np

from effcnet.config import Config
from effcnet.errors import FormatError, ConfigError, ShapeError, IoError
from effcnet.log import get_logger
from effcnet.model import NetworkConfig, assemble_network
from effcnet.data import DataConfig

MAGIC = b"EFFCNET1"
VERSION = 1

_HEADER = struct.Struct("<8sIQ")
_NAME_LENGTH = struct.Struct("<H")
_COUNT = struct.Struct("<Q")
_CHECKSUM = struct.Struct("<Q")

_log = get_logger(__name__)


def checksum(data):
    """
    64-bit BLAKE2b digest as an integer
    """
    return _CHECKSUM.unpack(hashlib.blake2b(data, digest_size=8).digest())[0]


class Checkpoint(object):
    """
    Decoded checkpoint: network configuration, data configuration, metadata
    and the tensors by name
    """

    def __init__(self, network, state, metadata=None, data=None, checksum_ok=True):
        self.network = network
        self.state = state
        self.metadata = collections.OrderedDict(metadata or {})
        self.data = data or DataConfig()
        self.checksum_ok = checksum_ok

    @classmethod
    def from_model(cls, model, metadata=None, data=None):
        state = collections.OrderedDict(
            (name, np.array(t.data, dtype='<f4')) for name, t in model.state().items()
        )
        return cls(model.config, state, metadata, data)

    def config(self):
        sections = collections.OrderedDict()
        sections['network'] = self.network.to_section()
        sections['data'] = self.data.to_section()
        sections['metadata'] = collections.OrderedDict((k, str(v)) for k, v in self.metadata.items())
        return Config.from_sections(sections)

    def to_bytes(self):
        blob = self.config().to_string().encode('utf-8')
        out = io.BytesIO()
        out.write(_HEADER.pack(MAGIC, VERSION, len(blob)))
        out.write(blob)
        for name, values in self.state.items():
            encoded = name.encode('utf-8')
            values = np.asarray(values, dtype='<f4').reshape(-1)
            out.write(_NAME_LENGTH.pack(len(encoded)))
            out.write(encoded)
            out.write(_COUNT.pack(values.size))
            out.write(values.tobytes())
        body = out.getvalue()
        return body + _CHECKSUM.pack(checksum(body))

    def write(self, path):
        """
        Writes the checkpoint file, returns its size in bytes
        """
        content = self.to_bytes()
        try:
            with io.open(path, 'wb') as f:
                f.write(content)
        except (IOError, OSError) as e:
            raise IoError("Can't write checkpoint %s: %s" % (path, e))
        _log.info("checkpoint_saved", path=path, bytes=len(content))
        return len(content)

    def build_model(self):
        """
        Model of the stored configuration holding the stored tensors
        """
        model = assemble_network(self.network)
        try:
            model.load_state(self.state)
        except (ConfigError, ShapeError) as e:
            raise FormatError("Checkpoint tensors don't match the configuration: %s" % e)
        return model


def _take(data, offset, size, what):
    if offset + size > len(data):
        raise FormatError("Checkpoint is truncated while reading %s" % what)
    return data[offset:offset + size], offset + size


def parse_checkpoint(data):
    """
    Decodes the bytes of a checkpoint. A checksum mismatch is logged and
    reported in `checksum_ok`, the tensors are returned anyway.
    """
    if len(data) < _HEADER.size + _CHECKSUM.size:
        raise FormatError("Checkpoint is truncated: %d bytes" % len(data))

    magic, version, blob_length = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise FormatError("Not a checkpoint, bad magic %r" % magic)
    if version != VERSION:
        raise FormatError("Unknown checkpoint version %d, expected %d" % (version, VERSION))

    body, trailer = data[:-_CHECKSUM.size], data[-_CHECKSUM.size:]
    blob, offset = _take(body, _HEADER.size, blob_length, "the configuration")
    try:
        config = Config.from_string(blob.decode('utf-8'), source="<checkpoint>")
        network = NetworkConfig.from_config(config)
        data_cfg = DataConfig.from_config(config)
    except (UnicodeDecodeError, ConfigError) as e:
        raise FormatError("Invalid checkpoint configuration: %s" % e)
    metadata = collections.OrderedDict(config.parser['metadata']) if config.has_section('metadata') else {}

    state = collections.OrderedDict()
    while offset < len(body):
        raw, offset = _take(body, offset, _NAME_LENGTH.size, "a tensor name length")
        name_length, = _NAME_LENGTH.unpack(raw)
        raw, offset = _take(body, offset, name_length, "a tensor name")
        try:
            name = raw.decode('utf-8')
        except UnicodeDecodeError:
            raise FormatError("Invalid tensor name at offset %d" % (offset - name_length))
        raw, offset = _take(body, offset, _COUNT.size, "the size of %s" % name)
        count, = _COUNT.unpack(raw)
        raw, offset = _take(body, offset, 4 * count, "the data of %s" % name)
        state[name] = np.frombuffer(raw, dtype='<f4').copy()

    checksum_ok = _CHECKSUM.unpack(trailer)[0] == checksum(body)
    if not checksum_ok:
        _log.warning("checksum_mismatch", expected=_CHECKSUM.unpack(trailer)[0], actual=checksum(body))

    return Checkpoint(network, state, metadata, data_cfg, checksum_ok)


def save_checkpoint(model, metadata, path, data=None):
    """
    Writes the model tensors as 32-bit floats. Returns the number of bytes
    written.
    """
    return Checkpoint.from_model(model, metadata, data).write(path)


def read_checkpoint(path):
    try:
        with io.open(path, 'rb') as f:
            data = f.read()
    except (IOError, OSError) as e:
        raise IoError("Can't read checkpoint %s: %s" % (path, e))
    return parse_checkpoint(data)


def load_checkpoint(path):
    """
    Model and metadata stored in a checkpoint file
    """
    checkpoint = read_checkpoint(path)
    return checkpoint.build_model(), checkpoint.metadata


__all__ = [
    'Checkpoint', 'save_checkpoint', 'load_checkpoint', 'read_checkpoint', 'parse_checkpoint',
    'checksum', 'MAGIC', 'VERSION',
]

# vim: ft=python:ts=4:sw=4
