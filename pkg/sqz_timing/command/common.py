from __future__ import annotations

import math
from dataclasses import dataclass
from dataclasses import field

import numpy as np

from ..utils import NumericalError


@dataclass(frozen=True)
class Column:
    name: str
    unit: str = ''

    @property
    def header(self):
        return f'{self.name} [{self.unit}]' if self.unit else self.name


@dataclass(frozen=True)
class Series:
    """One curve of a plot; ``style`` is a matplotlib format string"""

    label: str
    x: np.ndarray
    y: np.ndarray
    style: str = '-'


@dataclass(frozen=True)
class PlotSpec:
    title: str
    xlabel: str
    ylabel: str
    series: tuple
    xscale: str = 'linear'
    yscale: str = 'linear'
    # (y, label, style) horizontal reference lines
    hlines: tuple = ()


@dataclass
class CommandResult:
    """Table produced by a command, plus an optional plot for the SVG emitter"""

    name: str
    columns: list
    rows: list
    plot: PlotSpec | None = None
    summary: list = field(default_factory=list)
    preset: str | None = None

    def column(self, name):
        """Values of the column called ``name``"""
        idx = [c.name for c in self.columns].index(name)
        return [row[idx] for row in self.rows]


class Command:
    """Command class.

    A Command turns a validated RunConfig into a CommandResult: a table of
    named columns with units, one tuple per row, and optionally a plot
    description. Commands are run by a TimingLab, which hands the result to
    its emitter chain.

    Commands and the lab follow a "mutual registration" process: the lab
    keeps one instance per command and sets itself as the command's lab, and
    the command reports progress through the lab.

    Subclasses set CMD_NAME, the name used on the command line, and CMD_DESC,
    and implement _real_run(config). Any floating point overflow or invalid
    operation inside _real_run is turned into a NumericalError, and so is a
    non-finite number in the returned table.
    """

    CMD_NAME = None
    CMD_DESC = None
    _lab = None

    def __init__(self, lab=None):
        self.set_lab(lab)

    @classmethod
    def cmd_key(cls):
        """A string for getting the Command class with get_command_class"""
        return cls.__name__[: -len('Command')]

    def set_lab(self, lab):
        """Sets the lab for this command."""
        self._lab = lab

    def run(self, config):
        try:
            with np.errstate(over='raise', invalid='raise'):
                result = self._real_run(config)
        except FloatingPointError as e:
            raise NumericalError(f'{self.CMD_NAME}: {e}') from e
        self._check_finite(result)
        result.preset = config.preset
        return result

    def _real_run(self, config):
        """Real computation. Redefine in subclasses."""
        raise NotImplementedError('This method must be implemented by subclasses')

    def _check_finite(self, result):
        for row in result.rows:
            for column, value in zip(result.columns, row):
                if isinstance(value, float) and not math.isfinite(value):
                    raise NumericalError(f'{self.CMD_NAME}: non-finite {column.name} ({value!r})')

    @property
    def _tag(self):
        return self.CMD_NAME.replace('-', '_')

    def __cmd_msg(self, msg):
        return f'[{self._tag}] {msg}'

    def to_screen(self, msg):
        """Print msg to screen, prefixing it with '[cmd_name]'"""
        if self._lab:
            self._lab.to_screen(self.__cmd_msg(msg))

    def report_warning(self, msg):
        if self._lab:
            self._lab.report_warning(self.__cmd_msg(msg))

    def write_debug(self, msg):
        if self._lab:
            self._lab.write_debug(self.__cmd_msg(msg))

    def get_param(self, name, default=None):
        if self._lab:
            return self._lab.params.get(name, default)
        return default
