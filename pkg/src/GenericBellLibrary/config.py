#  Copyright 2026-     GenericBellLibrary Developers
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.

import json
import re

from robot.utils import is_string, is_truthy


class ConfigurationException(Exception):
    """Raised when creating, updating or accessing a Configuration entry fails.
    """
    pass


class Configuration(object):
    """A simple configuration class.

    Configuration is defined with keyword arguments, in which the value must
    be an instance of :py:class:`Entry`. Different subclasses of `Entry` can
    be used to handle common types and conversions.

    Example::

        cfg = Configuration(method=ChoiceEntry(('brute', 'both'), 'both'),
                            budget=IntegerEntry('1000'))
        assert cfg.method == 'both'
        assert cfg.budget == 1000
        cfg.update(method='brute')
        assert cfg.method == 'brute'
    """
    def __init__(self, **entries):
        self._config = entries

    def __str__(self):
        return '\n'.join(f'{k}={v}' for k, v in self._config.items())

    def __contains__(self, name):
        return name in self._config

    def update(self, **entries):
        """Update configuration entries.

        :param entries: entries to be updated, keyword argument names must
            match existing entry names. If any value in `**entries` is None,
            the corresponding entry is *not* updated.
        """
        for name, value in entries.items():
            if value is None:
                continue
            if name not in self._config:
                raise ConfigurationException(
                    f"Configuration parameter '{name}' is not defined.")
            self._config[name].set(value)

    def get(self, name):
        """Return entry corresponding to name."""
        return self._config[name]

    def as_dict(self):
        return {name: entry.value for name, entry in self._config.items()}

    def __getattr__(self, name):
        if name.startswith('_'):
            raise AttributeError(name)
        if name in self._config:
            return self._config[name].value
        msg = f"Configuration parameter '{name}' is not defined."
        raise ConfigurationException(msg)


class Entry(object):
    """A base class for values stored in :py:class:`Configuration`.

    :param:`initial` the initial value of this entry.
    """

    def __init__(self, initial=None):
        self._value = self._create_value(initial)

    def __str__(self):
        return str(self._value)

    @property
    def value(self):
        return self._value

    def set(self, value):
        self._value = self._parse_value(value)

    def _parse_value(self, value):
        raise NotImplementedError

    def _create_value(self, value):
        if value is None:
            return None
        return self._parse_value(value)


class StringEntry(Entry):
    """String value to be stored in :py:class:`Configuration`."""

    def _parse_value(self, value):
        return str(value)


class IntegerEntry(Entry):
    """Integer value to be stored in :py:class:`Configuration`.

    Strings may use underscores (``100_000_000``) or a power written as
    ``10**8``.
    """
    _POWER = re.compile(r'^\s*(-?\d+)\s*\*\*\s*(\d+)\s*$')

    def _parse_value(self, value):
        if is_string(value):
            match = self._POWER.match(value)
            if match:
                return int(match.group(1)) ** int(match.group(2))
        try:
            return int(value)
        except (TypeError, ValueError):
            raise ConfigurationException(f"Invalid integer '{value}'.")


class BooleanEntry(Entry):
    """Boolean value, converted with :py:func:`robot.utils.is_truthy`."""

    def _parse_value(self, value):
        return is_truthy(value)


class LogLevelEntry(Entry):
    """Log level to be stored in :py:class:`Configuration`.

    Given string must be one of 'TRACE', 'DEBUG', 'INFO', 'WARN' or 'NONE' case
    insensitively.
    """
    LEVELS = ('TRACE', 'DEBUG', 'INFO', 'WARN', 'NONE')

    def _parse_value(self, value):
        value = str(value).upper()
        if value not in self.LEVELS:
            raise ConfigurationException(f"Invalid log level '{value}'.")
        return value


class ChoiceEntry(Entry):
    """One of a fixed set of lower case strings."""

    def __init__(self, choices, initial=None):
        self.choices = tuple(choices)
        super(ChoiceEntry, self).__init__(initial)

    def _parse_value(self, value):
        value = str(value).lower()
        if value not in self.choices:
            raise ConfigurationException(
                f"Invalid value '{value}', expected one of "
                f"{', '.join(self.choices)}.")
        return value


class IntegerListEntry(Entry):
    """List of integers given as a list or as ``'2,3,4'``."""

    def _parse_value(self, value):
        if is_string(value):
            value = [item for item in re.split(r'[,\s]+', value.strip()) if item]
        elif isinstance(value, int):
            value = [value]
        try:
            return [int(item) for item in value]
        except (TypeError, ValueError):
            raise ConfigurationException(f"Invalid integer list '{value}'.")


class RangeEntry(Entry):
    """Inclusive integer range given as ``'a..b'`` or a single integer.

    ``'5..4'`` is a valid, empty range.
    """
    _RANGE = re.compile(r'^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$')

    def __str__(self):
        if not self._value:
            return 'empty'
        return f'{self._value[0]}..{self._value[-1]}'

    def _parse_value(self, value):
        if isinstance(value, (list, tuple, range)):
            return [int(item) for item in value]
        match = self._RANGE.match(str(value))
        if match:
            start, end = int(match.group(1)), int(match.group(2))
            return list(range(start, end + 1))
        try:
            return [int(value)]
        except ValueError:
            raise ConfigurationException(f"Invalid range '{value}'.")


def read_config_file(path):
    """Reads a JSON configuration file into keyword arguments.

    Keys may use dashes like the command line flags (``dense-cap``) or
    underscores. The file must contain a single JSON object.
    """
    try:
        with open(path, encoding='UTF-8') as source:
            data = json.load(source)
    except (OSError, ValueError) as error:
        raise ConfigurationException(
            f"Reading configuration file '{path}' failed: {error}")
    if not isinstance(data, dict):
        raise ConfigurationException(
            f"Configuration file '{path}' must contain a JSON object.")
    return {key.replace('-', '_'): value for key, value in data.items()}
