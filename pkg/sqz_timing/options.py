from __future__ import annotations

import optparse
import os.path
import shlex
import shutil
import sys

from .command import gen_command_classes
from .utils import expand_path
from .utils import preferredencoding
from .utils import write_string
from .version import __version__


def parseOpts(overrideArguments=None):
    def _readOptions(filename, default=[]):
        try:
            optionf = open(filename, encoding=preferredencoding())
        except OSError:
            return default  # silently skip if file is not present
        try:
            contents = optionf.read()
            res = shlex.split(contents, comments=True)
        finally:
            optionf.close()
        return res

    def _readUserConf():
        xdg_config_home = os.environ.get('XDG_CONFIG_HOME')
        if xdg_config_home:
            userConfFile = os.path.join(xdg_config_home, 'sqz-timing', 'config')
        else:
            userConfFile = os.path.join(expand_path('~'), '.config', 'sqz-timing', 'config')
        return _readOptions(userConfFile, [])

    def _format_option_string(option):
        """('-o', '--option') -> -o, --format METAVAR"""

        opts = []

        if option._short_opts:
            opts.append(option._short_opts[0])
        if option._long_opts:
            opts.append(option._long_opts[0])
        if len(opts) > 1:
            opts.insert(1, ', ')

        if option.takes_value():
            opts.append(f' {option.metavar}')

        return ''.join(opts)

    # No need to wrap help messages if we're on a wide console
    columns = shutil.get_terminal_size().columns
    max_width = columns if columns else 80
    max_help_position = 80

    fmt = optparse.IndentedHelpFormatter(width=max_width, max_help_position=max_help_position)
    fmt.format_option_strings = _format_option_string

    commands = '\n'.join(f'  {klass.CMD_NAME:<18}{klass.CMD_DESC}' for klass in gen_command_classes())
    kw = {
        'version': __version__,
        'formatter': fmt,
        'usage': '%prog [OPTIONS] COMMAND',
        'description': 'Commands:\n' + commands,
        'conflict_handler': 'resolve',
    }

    parser = optparse.OptionParser(**kw)
    # keep the command list on separate lines
    parser.format_description = lambda formatter: parser.description + '\n'

    general = optparse.OptionGroup(parser, 'General Options')
    general.add_option('-h', '--help', action='help', help='Print this help text and exit')
    general.add_option('--version', action='version', help='Print program version and exit')
    general.add_option(
        '--list-presets',
        action='store_true',
        dest='list_presets',
        default=False,
        help='List the run configuration presets shipped with the program and exit',
    )
    general.add_option(
        '--ignore-config',
        action='store_true',
        help='Do not read option files. '
        'When given in the system option file /etc/sqz-timing.conf, do not read the user one '
        '~/.config/sqz-timing/config',
    )

    configuration = optparse.OptionGroup(parser, 'Run Configuration')
    configuration.add_option(
        '--preset', dest='preset', metavar='NAME', default=None, help='Start from a shipped preset (see --list-presets)'
    )
    configuration.add_option(
        '--config',
        dest='config_location',
        metavar='PATH',
        default=None,
        help='INI run configuration, applied on top of the preset',
    )
    configuration.add_option(
        '--seed', dest='seed', metavar='SEED', type='int', default=None, help='Seed of the random number generator'
    )
    configuration.add_option(
        '--workers',
        dest='workers',
        metavar='N',
        type='int',
        default=None,
        help='Number of threads running Monte-Carlo sweep points',
    )
    configuration.add_option(
        '--power-uw', dest='power_uw', metavar='UW', default=None, help='Optical signal power in microwatts'
    )
    configuration.add_option(
        '--squeeze-db',
        dest='squeeze_db',
        metavar='DB',
        default=None,
        help='Phase quadrature squeezing of the signal in dB (positive numbers squeeze)',
    )
    configuration.add_option(
        '--applied-volts',
        dest='applied_volts',
        metavar='VOLTS',
        default=None,
        help='Drive amplitude of the delay modulation in volts',
    )

    sweep = optparse.OptionGroup(parser, 'Sweep Options')
    sweep.add_option(
        '--axis',
        dest='axis',
        metavar='AXIS',
        default=None,
        help='Swept parameter: power (uW), squeeze_db (dB), pump_rate or omega (rad/s)',
    )
    sweep.add_option('--start', dest='start', metavar='VALUE', default=None, help='First value of the axis')
    sweep.add_option('--stop', dest='stop', metavar='VALUE', default=None, help='Last value of the axis')
    sweep.add_option('--points', dest='points', metavar='N', default=None, help='Number of points on the axis')
    sweep.add_option('--spacing', dest='spacing', metavar='SPACING', default=None, help='log or linear')
    sweep.add_option(
        '--monte-carlo',
        action='store_true',
        dest='monte_carlo',
        default=False,
        help='Also run the simulated measurement at every sweep point',
    )

    output = optparse.OptionGroup(parser, 'Output Options')
    output.add_option('-o', '--out', dest='outdir', metavar='DIR', default=None, help='Directory for the artifacts')
    output.add_option(
        '--emit', dest='emit', metavar='KINDS', default=None, help='Comma-separated artifacts to write: csv, svg'
    )

    verbosity = optparse.OptionGroup(parser, 'Verbosity Options')
    verbosity.add_option(
        '-q', '--quiet', action='store_true', dest='quiet', default=False, help='Print warnings and errors only'
    )
    verbosity.add_option(
        '--no-warnings', dest='no_warnings', action='store_true', default=False, help='Ignore warnings'
    )
    verbosity.add_option(
        '-v',
        '--verbose',
        action='store_true',
        dest='verbose',
        default=False,
        help='Print various debugging information',
    )

    parser.add_option_group(general)
    parser.add_option_group(configuration)
    parser.add_option_group(sweep)
    parser.add_option_group(output)
    parser.add_option_group(verbosity)

    if overrideArguments is not None:
        opts, args = parser.parse_args(overrideArguments)
        if opts.verbose:
            write_string('[debug] Override config: ' + repr(overrideArguments) + '\n')
    else:
        command_line_conf = sys.argv[1:]
        opts, args = parser.parse_args(command_line_conf)

        system_conf = user_conf = []

        if '--ignore-config' not in command_line_conf:
            system_conf = _readOptions('/etc/sqz-timing.conf')
            if '--ignore-config' not in system_conf:
                user_conf = _readUserConf()

        argv = system_conf + user_conf + command_line_conf
        opts, args = parser.parse_args(argv)
        if opts.verbose:
            for conf_label, conf in (
                ('System config', system_conf),
                ('User config', user_conf),
                ('Command-line args', command_line_conf),
            ):
                write_string(f'[debug] {conf_label}: {conf!r}\n')

    return parser, opts, args
