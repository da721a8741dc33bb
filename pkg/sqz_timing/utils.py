#!/usr/bin/env python
from __future__ import annotations

import locale
import math
import os
import sys

import numpy as np

# Scientific notation with 12 significant digits, used by every CSV column.
CSV_FLOAT_FORMAT = '%.11e'
# Console tables
TABLE_FLOAT_FORMAT = '%.6g'
UNRESOLVED = 'unresolved'


def preferredencoding():
    """Get preferred encoding.

    Returns the best encoding scheme for the system, based on
    locale.getpreferredencoding() and some further tweaks.
    """
    try:
        pref = locale.getpreferredencoding()
        'TEST'.encode(pref)
    except Exception:
        pref = 'UTF-8'

    return pref


def write_string(s, out=None, encoding=None):
    if out is None:
        out = sys.stderr
    assert isinstance(s, str)

    if 'b' in getattr(out, 'mode', ''):
        byt = s.encode(encoding or preferredencoding(), 'ignore')
        out.write(byt)
    elif hasattr(out, 'buffer'):
        enc = encoding or getattr(out, 'encoding', None) or preferredencoding()
        byt = s.encode(enc, 'ignore')
        out.buffer.write(byt)
    else:
        out.write(s)
    out.flush()


def expand_path(s):
    """Expand shell variables and ~"""
    return os.path.expandvars(os.path.expanduser(s))


def render_table(header_row, data):
    """Render a list of rows, each as a list of values"""
    table = [header_row, *data]
    max_lens = [max(len(str(v)) for v in col) for col in zip(*table)]
    format_str = ' '.join('%-' + str(ml + 1) + 's' for ml in max_lens[:-1]) + '%s'
    return '\n'.join(format_str % tuple(row) for row in table)


def float_or_none(v, scale=1, invscale=1, default=None):
    if v is None:
        return default
    try:
        return float(v) * invscale / scale
    except (ValueError, TypeError):
        return default


def int_or_none(v, default=None):
    if v is None:
        return default
    try:
        return int(v)
    except (ValueError, TypeError):
        return default


def format_value(v, float_format=CSV_FLOAT_FORMAT):
    """Format one result cell: floats with ``float_format``, None as the unresolved sentinel"""
    if v is None:
        return UNRESOLVED
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        if math.isnan(v):
            return 'nan'
        return float_format % v
    return str(v)


def check_positive(name, value, allow_zero=False):
    """Raise InvalidParameterError unless value is finite and > 0 (or >= 0)"""
    if value is None or not np.all(np.isfinite(value)):
        raise InvalidParameterError(f'{name} must be a finite number, got {value!r}')
    if allow_zero:
        if np.any(np.asarray(value) < 0):
            raise InvalidParameterError(f'{name} must be non-negative, got {value!r}')
    elif np.any(np.asarray(value) <= 0):
        raise InvalidParameterError(f'{name} must be positive, got {value!r}')
    return value


def check_unit_interval(name, value):
    if value is None or not math.isfinite(value) or not 0 <= value <= 1:
        raise InvalidParameterError(f'{name} must lie in [0, 1], got {value!r}')
    return value


class SqzTimingError(Exception):
    """Base exception for sqz_timing errors."""

    pass


class InvalidParameterError(SqzTimingError, ValueError):
    """A physical parameter violates its domain (non-positive width, efficiency above 1, ...)."""

    pass


class AboveThresholdError(InvalidParameterError):
    """Pump power at or above the SPOPO oscillation threshold.

    The below-threshold squeezing model does not apply there.
    """

    def __init__(self, power, threshold):
        super().__init__(f'pump power {power!r} is not below the oscillation threshold {threshold!r}')
        self.power = power
        self.threshold = threshold


class GridMismatchError(InvalidParameterError):
    """Two mode functions sampled on different time grids."""

    pass


class NyquistError(InvalidParameterError):
    """Sample rate does not exceed twice the modulation frequency."""

    pass


class ResolutionError(SqzTimingError):
    """A time grid is too coarse for the requested representation."""

    pass


class InsufficientSamplesError(SqzTimingError):
    """Not enough samples for the requested spectrum averaging."""

    def __init__(self, needed, available):
        super().__init__(f'{needed} samples needed for the requested averaging, only {available} available')
        self.needed = needed
        self.available = available


class ConfigError(SqzTimingError):
    """Invalid run configuration: unknown section or key, bad value, missing preset."""

    def __init__(self, msg, section=None, key=None):
        if section is not None:
            where = f'[{section}]' if key is None else f'[{section}] {key}'
            msg = f'{where}: {msg}'
        super().__init__(msg)
        self.section = section
        self.key = key


class NumericalError(SqzTimingError):
    """A computation produced a non-finite or otherwise unusable result."""

    pass


class EmissionError(SqzTimingError):
    """Emission exception.

    This exception may be raised by an Emitter's .run() method to
    indicate an error while writing an artifact.
    """

    def __init__(self, msg):
        super().__init__(msg)
        self.msg = msg


def exit_code_for(error):
    """Process exit code for an error raised while running a command"""
    if isinstance(error, (ConfigError, InvalidParameterError)):
        return 2
    return 3
