from __future__ import annotations

from .common import Column
from .common import Command
from .common import CommandResult
from .common import PlotSpec
from .common import Series
from .phase_scan import PhaseScanCommand
from .sql import SqlCommand
from .squeeze_spectrum import SqueezeSpectrumCommand
from .sweep import SweepCommand
from .timing import TimingCommand

_ALL_CLASSES = [klass for name, klass in globals().items() if name.endswith('Command') and name != 'Command']


def gen_command_classes():
    """Return a list of the available commands, in command-line order."""
    return sorted(_ALL_CLASSES, key=lambda klass: klass.CMD_NAME)


def list_commands():
    return [klass.CMD_NAME for klass in gen_command_classes()]


def get_command_class(cmd_key):
    """Returns the command class with the given cmd_key"""
    return globals()[cmd_key + 'Command']


def command_for_name(name):
    """Command class whose command-line name is ``name``, or None"""
    for klass in _ALL_CLASSES:
        if klass.CMD_NAME == name:
            return klass
    return None


__all__ = [
    'Column',
    'Command',
    'CommandResult',
    'PhaseScanCommand',
    'PlotSpec',
    'Series',
    'SqlCommand',
    'SqueezeSpectrumCommand',
    'SweepCommand',
    'TimingCommand',
    'command_for_name',
    'gen_command_classes',
    'get_command_class',
    'list_commands',
]
