#!/usr/bin/env python
from __future__ import annotations

import logging
import platform
import re
import sys
import traceback
from typing import Any

from .command import command_for_name
from .command import get_command_class
from .config import load_config
from .emitter import get_emitter
from .utils import TABLE_FLOAT_FORMAT
from .utils import SqzTimingError
from .utils import exit_code_for
from .utils import format_value
from .utils import render_table
from .version import __version__

logger = logging.getLogger('sqz_timing')

TAGGED_LOG_MSG_REGEX = re.compile(r'^\[(?P<tag>\w+)(:(?P<subtag>\w+))?\]\s*(?P<msg>.+)$', re.DOTALL)


class TimingLab:
    """TimingLab class.

    A TimingLab runs commands against a run configuration and hands each
    result to its chain of Emitters, which write the CSV and SVG artifacts.
    In most cases there should be one per program.

    TimingLab objects accept a dictionary of options instead of a long list
    of constructor arguments. These options are available through the params
    attribute for the Commands and Emitters to use.

    Available options:

    verbose:           Print additional debug information.
    quiet:             Do not print progress or result tables.
    no_warnings:       Do not print out anything for warnings.
    outdir:            Directory the emitters write into. Defaults to the
                       [output] directory of the run configuration.
    emitters:          A list of dictionaries, each with an entry
                       * key: The name of the emitter ("Csv" or "Svg").
                       Defaults to the [output] emit list of the run
                       configuration.
    preset:            Name of the preset to load.
    config_file:       Path of an INI run configuration.
    overrides:         {(section, key): value} applied on top of the file.
    """

    def __init__(self, params=None):
        if params is None:
            params = {}
        self._commands = {}
        self._emitters = []
        self._warned = set()
        self.params = {
            'verbose': False,
            'quiet': False,
        }
        self.params.update(params)

        for em_def in self.params.get('emitters') or []:
            self.add_emitter(get_emitter(em_def['key'])())

    def __enter__(self) -> TimingLab:
        return self

    def __exit__(self, *args: Any) -> None:
        pass

    def add_command(self, cmd):
        """Register a Command instance under its key."""
        self._commands[cmd.cmd_key()] = cmd
        cmd.set_lab(self)

    def get_command(self, cmd_key):
        """
        Get the instance of the Command with key cmd_key, creating and
        registering it on first use.
        """
        cmd = self._commands.get(cmd_key)
        if cmd is None:
            cmd = get_command_class(cmd_key)()
            self.add_command(cmd)
        return cmd

    def add_emitter(self, em):
        """Add an Emitter object to the end of the chain."""
        self._emitters.append(em)
        em.set_lab(self)

    def to_screen(self, message):
        """Print message to stdout if not in quiet mode."""
        return self.to_stdout(message, check_quiet=True)

    def to_stdout(self, message, check_quiet=False):
        quiet = check_quiet and self.params.get('quiet', False)

        if message.startswith('[debug]'):
            debug = True
            message = message.removeprefix('[debug]').lstrip()
        elif message.startswith('[info]'):
            debug = False
            message = message.removeprefix('[info]').lstrip()
        else:
            debug = quiet

        _logger = logger
        if m := TAGGED_LOG_MSG_REGEX.match(message):
            _logger_name = f'sqz_timing.{m.group("tag")}'
            if m.group('subtag'):
                _logger_name += f'.{m.group("subtag")}'
            _logger = logging.getLogger(_logger_name)
            message = m.group('msg')

        if debug:
            _logger.debug(message)
        else:
            _logger.info(message)

    def to_stderr(self, message):
        logger.error(message)

    def report_warning(self, message, only_once=False):
        if only_once:
            if message in self._warned:
                return
            self._warned.add(message)
        if self.params.get('no_warnings'):
            return
        logger.warning(message)

    def report_error(self, message, tb=None):
        """Print an error, with the traceback of the exception being handled in verbose mode."""
        self.to_stderr(f'ERROR: {message}')
        if self.params.get('verbose'):
            if tb is None and sys.exc_info()[0]:
                tb = traceback.format_exc()
            if tb:
                self.to_stderr(tb)

    def write_debug(self, message):
        if not self.params.get('verbose', False):
            return
        self.to_stdout(f'[debug] {message}')

    def print_debug_header(self):
        if not self.params.get('verbose'):
            return
        import matplotlib
        import numpy
        import scipy

        self.write_debug(f'sqz-timing version {__version__}')
        self.write_debug(
            f'Python {platform.python_version()} ({platform.python_implementation()}) - {platform.platform()}'
        )
        self.write_debug(f'numpy {numpy.__version__}, scipy {scipy.__version__}, matplotlib {matplotlib.__version__}')

    def load_config(self):
        config = load_config(
            preset=self.params.get('preset'),
            path=self.params.get('config_file'),
            overrides=self.params.get('overrides'),
        )
        for source in config.sources:
            self.write_debug(f'Run configuration: {source}')
        return config

    def emit(self, result, directory):
        """Run every emitter of the chain on a command result."""
        for em in self._emitters:
            path = em.run(result, directory)
            if path:
                self.to_screen(f'[{em.emitter_key().lower()}] Wrote {path}')

    def list_result(self, result):
        if self.params.get('quiet'):
            return
        header = [c.header for c in result.columns]
        data = [[format_value(v, TABLE_FLOAT_FORMAT) for v in row] for row in result.rows]
        self.to_screen(render_table(header, data))
        for line in result.summary:
            self.to_screen(f'[{result.name.replace("-", "_")}] {line}')

    def run_command(self, name, config=None):
        """Run the command called ``name`` and emit its result; returns the result."""
        klass = command_for_name(name)
        if klass is None:
            raise SqzTimingError(f'unknown command {name!r}')
        if config is None:
            config = self.load_config()
        if not self._emitters:
            for kind in config.output.emit:
                self.add_emitter(get_emitter(kind.capitalize())())
        cmd = self.get_command(klass.cmd_key())
        result = cmd.run(config)
        self.list_result(result)
        self.emit(result, self.params.get('outdir') or config.output.directory)
        return result

    def run(self, name):
        """Load the configuration, run one command and return the process exit code."""
        self.print_debug_header()
        try:
            self.run_command(name)
        except SqzTimingError as err:
            self.report_error(str(err))
            return exit_code_for(err)
        return 0
