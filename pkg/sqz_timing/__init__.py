#!/usr/bin/env python
from __future__ import annotations

import logging
import sys

from .command import list_commands
from .config import list_presets
from .options import parseOpts
from .TimingLab import TimingLab
from .utils import write_string


def _setup_logging(opts):
    if opts.verbose:
        level = logging.DEBUG
    elif opts.quiet:
        level = logging.WARNING
    else:
        level = logging.INFO
    logging.basicConfig(format='%(message)s', stream=sys.stderr)
    logging.getLogger('sqz_timing').setLevel(level)


def _overrides(opts):
    """{(section, key): value} for the command-line options that override the run configuration"""
    overrides = {}
    if opts.seed is not None:
        overrides['simulation', 'seed'] = opts.seed
    if opts.workers is not None:
        overrides['simulation', 'workers'] = opts.workers
    if opts.power_uw is not None:
        overrides['comb', 'power_uw'] = opts.power_uw
    if opts.squeeze_db is not None:
        overrides['state', 'kind'] = 'squeezed'
        overrides['state', 'squeezing_db'] = opts.squeeze_db
        overrides['sql', 'squeezing_db'] = opts.squeeze_db
    if opts.applied_volts is not None:
        overrides['modulation', 'applied_volts'] = opts.applied_volts
    for key in ('axis', 'start', 'stop', 'points', 'spacing'):
        value = getattr(opts, key)
        if value is not None:
            overrides['sweep', key] = value
    if opts.monte_carlo:
        overrides['sweep', 'monte_carlo'] = 'yes'
    if opts.outdir is not None:
        overrides['output', 'directory'] = opts.outdir
    if opts.emit is not None:
        overrides['output', 'emit'] = opts.emit
    return overrides


def _real_main(argv=None):
    parser, opts, args = parseOpts(argv)

    if opts.list_presets:
        for name in list_presets():
            write_string(name + '\n', out=sys.stdout)
        sys.exit(0)

    if len(args) != 1:
        parser.error('You must provide exactly one command.\nType sqz-timing --help to see a list of all options.')
    command = args[0]
    if command not in list_commands():
        parser.error(f'unknown command {command!r}; choose one of {", ".join(list_commands())}')

    _setup_logging(opts)

    lab_opts = {
        'verbose': opts.verbose,
        'quiet': opts.quiet,
        'no_warnings': opts.no_warnings,
        'preset': opts.preset,
        'config_file': opts.config_location,
        'overrides': _overrides(opts),
    }

    with TimingLab(lab_opts) as lab:
        retcode = lab.run(command)

    sys.exit(retcode)


def main(argv=None):
    try:
        _real_main(argv)
    except KeyboardInterrupt:
        sys.exit('\nERROR: Interrupted by user')


__all__ = ['TimingLab', 'main']
