#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# MIT License
#
# Copyright (c) 2017 Fabrizio Colonna <colofabrix@tin.it>
#
# See the LICENSE file for the full license text.
#
# config.py - INI configuration files
#

import io
import os
import configparser

from effcnet.errors import ConfigError, IoError

CONFIG_ENV = "EFFCNET_CONFIG"

_TRUE = ('1', 'yes', 'true', 'on')
_FALSE = ('0', 'no', 'false', 'off')


class Section:
    """
    Typed access to one section of the configuration. Every getter takes the
    in-code default used when the option is missing.
    """

    def __init__(self, name, values):
        self.name = name
        self._values = values

    def __contains__(self, option):
        return option in self._values

    def _raw(self, option):
        value = self._values.get(option)
        return None if value is None else value.strip()

    def _fail(self, option, value, expected):
        raise ConfigError("Option [%s] %s must be %s, got %r" % (self.name, option, expected, value))

    def get_str(self, option, default=None):
        value = self._raw(option)
        return default if value in (None, '') else value

    def get_int(self, option, default=None):
        value = self._raw(option)
        if value in (None, ''):
            return default
        try:
            return int(value)
        except ValueError:
            self._fail(option, value, "an integer")

    def get_float(self, option, default=None):
        value = self._raw(option)
        if value in (None, ''):
            return default
        try:
            return float(value)
        except ValueError:
            self._fail(option, value, "a number")

    def get_bool(self, option, default=None):
        value = self._raw(option)
        if value in (None, ''):
            return default
        if value.lower() in _TRUE:
            return True
        if value.lower() in _FALSE:
            return False
        self._fail(option, value, "a boolean")

    def get_list(self, option, default=None, convert=str):
        """
        Comma separated list of values
        """
        value = self._raw(option)
        if value is None:
            return default
        items = [item.strip() for item in value.split(',') if item.strip()]
        try:
            return [convert(item) for item in items]
        except ValueError:
            self._fail(option, value, "a list of %s" % convert.__name__)


class Config:
    """
    Run configuration, made of the sections [network], [training] and [data]
    """

    def __init__(self, parser=None, source=None):
        self.parser = parser or configparser.ConfigParser(interpolation=None)
        self.source = source

    @classmethod
    def from_string(cls, text, source="<string>"):
        parser = configparser.ConfigParser(interpolation=None)
        try:
            parser.read_string(text, source=source)
        except configparser.Error as e:
            raise ConfigError("Malformed configuration %s: %s" % (source, e))
        return cls(parser, source)

    @classmethod
    def load(cls, path):
        if not os.path.isfile(path):
            raise IoError("Configuration file %s doesn't exist" % path)
        try:
            with io.open(path, 'r', encoding='utf-8') as f:
                text = f.read()
        except (IOError, UnicodeDecodeError) as e:
            raise IoError("Can't read configuration file %s: %s" % (path, e))
        return cls.from_string(text, source=path)

    @classmethod
    def from_sections(cls, sections):
        """
        Builds a configuration from a mapping of section name -> options
        """
        parser = configparser.ConfigParser(interpolation=None)
        for name, options in sections.items():
            parser[name] = {key: str(value) for key, value in options.items()}
        return cls(parser)

    def has_section(self, name):
        return self.parser.has_section(name)

    def section(self, name):
        """
        Typed section. A missing section is a LookupError, callers with a
        default for the whole section catch it.
        """
        if not self.parser.has_section(name):
            raise LookupError("Configuration section [%s] doesn't exist in %s." % (name, self.source))
        return Section(name, self.parser[name])

    def required_section(self, name):
        try:
            return self.section(name)
        except LookupError as e:
            raise ConfigError(str(e))

    def to_string(self):
        """
        INI text, written with a stable section and option order
        """
        out = io.StringIO()
        for name in self.parser.sections():
            out.write("[%s]\n" % name)
            for key, value in self.parser[name].items():
                out.write("%s = %s\n" % (key, value))
            out.write("\n")
        return out.getvalue()

    def save(self, path):
        try:
            with io.open(path, 'w', encoding='utf-8') as f:
                f.write(self.to_string())
        except (IOError, OSError) as e:
            raise IoError("Can't write configuration file %s: %s" % (path, e))


def default_config_path():
    """
    Configuration file named by the EFFCNET_CONFIG environment variable
    """
    return os.environ.get(CONFIG_ENV) or None


__all__ = ['Config', 'Section', 'CONFIG_ENV', 'default_config_path']

# vim: ft=python:ts=4:sw=4
