"""Structured run configuration.

An INI file with one section per model type; every physical key carries its
unit in its name. Layers are merged as built-in defaults < preset < config
file < command-line overrides, and the result is validated as a whole before
any command runs.
"""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass
from dataclasses import field

import numpy as np

from .comb import CombParams
from .metrology import PZT_DELAY_COEFF
from .metrology import pzt_to_delay
from .montecarlo import AnalyzerSettings
from .montecarlo import Modulation
from .montecarlo import PhaseScan
from .squeezing import DEFAULT_FINESSE
from .squeezing import DEFAULT_LAMBDA_RATIOS
from .squeezing import DetectionChain
from .squeezing import SpopoParams
from .squeezing import decay_rate_from_finesse
from .squeezing import pump_rate
from .utils import ConfigError
from .utils import InvalidParameterError
from .utils import expand_path
from .utils import float_or_none
from .utils import int_or_none

PRESET_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'presets')
PRESET_ALIASES = {
    'paper': 'paper-coherent',
    'vacuum-squeezing': 'paper-vacuum',
}

STATE_KINDS = ('coherent', 'squeezed', 'spopo')
SCAN_THEORIES = ('state', 'model')
SWEEP_AXES = ('power', 'squeeze_db', 'pump_rate', 'omega')
SWEEP_SPACINGS = ('log', 'linear')
EMIT_KINDS = ('csv', 'svg')

# Empty strings mean "derive" or "not set"
DEFAULTS = {
    'comb': {
        'lambda0_nm': '815',
        'dt_fwhm_fs': '130',
        'rep_rate_mhz': '75',
        'power_uw': '2',
    },
    'spopo': {
        'zeta': '0.814',
        'finesse': repr(DEFAULT_FINESSE),
        'gamma_s_rad_s': '',
        'pump_power_mw': '27',
        'threshold_mw': '55',
        'lambda_ratios': ', '.join(repr(x) for x in DEFAULT_LAMBDA_RATIOS),
    },
    'chain': {
        'rho': '0.93',
        'eta': '0.98',
        'xi': '0.89',
        'eta_tot': '',
    },
    'state': {
        'kind': 'coherent',
        'squeezing_db': '0',
        'antisqueezing_db': '0',
    },
    'modulation': {
        'freq_mhz': '2',
        'applied_volts': '1.7',
        'pzt_coeff_s_per_v': repr(PZT_DELAY_COEFF),
    },
    'analyzer': {
        'rbw_khz': '100',
        'n_averages': 'all',
    },
    'simulation': {
        'sample_rate_mhz': '10',
        'duration_s': '0.1',
        'detection_time_s': '1',
        'seed': '0',
        'workers': '1',
    },
    'scan': {
        'analysis_freq_mhz': '1',
        'mode': '0',
        'points': '400',
        'periods': '2',
        'draws_per_point': '50000',
        'sweep_time_s': '1',
        'theory': 'state',
    },
    'spectrum': {
        'freq_min_mhz': '0.01',
        'freq_max_mhz': '100',
        'points': '200',
        'modes': '0, 1, 2, 3',
    },
    'sql': {
        'powers_uw': '',
        'squeezing_db': '0',
    },
    'sweep': {
        'axis': 'power',
        'start': '0.2',
        'stop': '20',
        'points': '11',
        'spacing': 'log',
        'monte_carlo': 'no',
    },
    'output': {
        'directory': '.',
        'emit': 'csv',
        'reference_du_min_s': '',
    },
}


@dataclass(frozen=True)
class StateSettings:
    kind: str = 'coherent'
    squeezing_db: float = 0.0
    antisqueezing_db: float = 0.0


@dataclass(frozen=True)
class SimulationSettings:
    sample_rate: float
    duration: float
    detection_time: float = 1.0
    seed: int = 0
    workers: int = 1


@dataclass(frozen=True)
class ScanSettings:
    analysis_freq: float
    mode: int
    scan: PhaseScan
    theory: str = 'state'

    @property
    def omega(self):
        return 2 * math.pi * self.analysis_freq


@dataclass(frozen=True)
class SpectrumSettings:
    freq_min: float
    freq_max: float
    points: int
    modes: tuple = (0,)

    def frequencies(self):
        return np.logspace(math.log10(self.freq_min), math.log10(self.freq_max), self.points)

    def omegas(self):
        return 2 * math.pi * self.frequencies()


@dataclass(frozen=True)
class SqlSettings:
    powers: tuple
    squeezing_db: tuple


@dataclass(frozen=True)
class SweepSettings:
    axis: str
    start: float
    stop: float
    points: int
    spacing: str = 'log'
    monte_carlo: bool = False

    def values(self):
        if self.spacing == 'log':
            return np.logspace(math.log10(self.start), math.log10(self.stop), self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class OutputSettings:
    directory: str = '.'
    emit: tuple = ('csv',)
    reference_du_min: float | None = None


@dataclass(frozen=True)
class RunConfig:
    comb: CombParams
    spopo: SpopoParams
    chain: DetectionChain
    state: StateSettings
    modulation: Modulation
    applied_volts: float
    pzt_coeff: float
    analyzer: AnalyzerSettings
    simulation: SimulationSettings
    scan: ScanSettings
    spectrum: SpectrumSettings
    sql: SqlSettings
    sweep: SweepSettings
    output: OutputSettings
    preset: str | None = None
    sources: tuple = field(default=())


def list_presets():
    """Names of the presets shipped with the package"""
    if not os.path.isdir(PRESET_DIR):
        return []
    return sorted(fn[: -len('.conf')] for fn in os.listdir(PRESET_DIR) if fn.endswith('.conf'))


def preset_path(name):
    name = PRESET_ALIASES.get(name, name)
    path = os.path.join(PRESET_DIR, name + '.conf')
    if not os.path.isfile(path):
        raise ConfigError(f'unknown preset {name!r}; available presets: {", ".join(list_presets())}')
    return path


def _new_parser():
    return configparser.ConfigParser(interpolation=None, inline_comment_prefixes=('#', ';'))


def _read_source(path):
    """Parse one INI file and reject anything outside the known sections and keys"""
    parser = _new_parser()
    try:
        with open(path, encoding='utf-8') as f:
            parser.read_file(f, source=path)
    except OSError as e:
        raise ConfigError(f'cannot read configuration file {path}: {e.strerror or e}')
    except configparser.Error as e:
        raise ConfigError(f'malformed configuration file {path}: {e}')
    if parser.defaults():
        raise ConfigError(f'{path}: keys outside any section are not allowed')
    values = {}
    for section in parser.sections():
        if section not in DEFAULTS:
            raise ConfigError(f'unknown section in {path}', section=section)
        for key, value in parser.items(section):
            if key not in DEFAULTS[section]:
                raise ConfigError(f'unknown key in {path}', section=section, key=key)
            values.setdefault(section, {})[key] = value
    return values


def _merge(layers):
    merged = {section: dict(keys) for section, keys in DEFAULTS.items()}
    for layer in layers:
        for section, keys in layer.items():
            merged[section].update(keys)
    return merged


class _Section:
    """Typed accessors over one merged section; failures name the offending key"""

    def __init__(self, name, values):
        self.name = name
        self._values = values

    def _raw(self, key):
        return self._values[key].strip()

    def error(self, msg, key=None):
        return ConfigError(msg, section=self.name, key=key)

    def float(self, key, optional=False):
        raw = self._raw(key)
        if not raw and optional:
            return None
        value = float_or_none(raw)
        if value is None:
            raise self.error(f'expected a number, got {raw!r}', key)
        if not math.isfinite(value):
            raise self.error(f'expected a finite number, got {raw!r}', key)
        return value

    def int(self, key):
        raw = self._raw(key)
        value = int_or_none(raw)
        if value is None:
            raise self.error(f'expected an integer, got {raw!r}', key)
        return value

    def bool(self, key):
        raw = self._raw(key).lower()
        if raw not in configparser.ConfigParser.BOOLEAN_STATES:
            raise self.error(f'expected yes/no, got {raw!r}', key)
        return configparser.ConfigParser.BOOLEAN_STATES[raw]

    def choice(self, key, choices):
        raw = self._raw(key).lower()
        if raw not in choices:
            raise self.error(f'expected one of {", ".join(choices)}, got {raw!r}', key)
        return raw

    def floats(self, key):
        raw = self._raw(key)
        if not raw:
            return ()
        values = tuple(float_or_none(x) for x in raw.split(','))
        if None in values:
            raise self.error(f'expected a comma-separated list of numbers, got {raw!r}', key)
        return values

    def ints(self, key):
        raw = self._raw(key)
        if not raw:
            return ()
        values = tuple(int_or_none(x) for x in raw.split(','))
        if None in values:
            raise self.error(f'expected a comma-separated list of integers, got {raw!r}', key)
        return values

    def str(self, key):
        return self._raw(key)


def _validated(section, build):
    """Run ``build``; domain errors from the model types become ConfigError for this section"""
    try:
        return build()
    except ConfigError:
        raise
    except InvalidParameterError as e:
        raise ConfigError(str(e), section=section.name) from e


def _build_comb(s):
    return _validated(
        s,
        lambda: CombParams(
            lambda0=s.float('lambda0_nm') * 1e-9,
            dt_fwhm=s.float('dt_fwhm_fs') * 1e-15,
            rep_rate=s.float('rep_rate_mhz') * 1e6,
            power=s.float('power_uw') * 1e-6,
        ),
    )


def _build_spopo(s, comb):
    def build():
        gamma_s = s.float('gamma_s_rad_s', optional=True)
        if gamma_s is None:
            gamma_s = decay_rate_from_finesse(comb.rep_rate, s.float('finesse'))
        r = pump_rate(s.float('pump_power_mw') * 1e-3, s.float('threshold_mw') * 1e-3)
        return SpopoParams(zeta=s.float('zeta'), gamma_s=gamma_s, r=r, lambda_ratios=s.floats('lambda_ratios'))

    return _validated(s, build)


def _build_chain(s):
    return _validated(
        s,
        lambda: DetectionChain(
            rho=s.float('rho'),
            eta=s.float('eta'),
            xi=s.float('xi'),
            eta_tot_override=s.float('eta_tot', optional=True),
        ),
    )


def _build_state(s):
    return StateSettings(
        kind=s.choice('kind', STATE_KINDS),
        squeezing_db=s.float('squeezing_db'),
        antisqueezing_db=s.float('antisqueezing_db'),
    )


def _build_modulation(s):
    volts = s.float('applied_volts')
    coeff = s.float('pzt_coeff_s_per_v')
    if volts < 0:
        raise s.error('must be non-negative', 'applied_volts')
    modulation = _validated(
        s, lambda: Modulation(frequency=s.float('freq_mhz') * 1e6, applied_du=pzt_to_delay(volts, coeff))
    )
    return modulation, volts, coeff


def _build_analyzer(s):
    raw = s.str('n_averages').lower()
    n_averages = None if raw in ('', 'all') else s.int('n_averages')
    return _validated(s, lambda: AnalyzerSettings(rbw=s.float('rbw_khz') * 1e3, n_averages=n_averages))


def _build_simulation(s):
    sample_rate = s.float('sample_rate_mhz') * 1e6
    duration = s.float('duration_s')
    detection_time = s.float('detection_time_s')
    positive = (('sample_rate_mhz', sample_rate), ('duration_s', duration), ('detection_time_s', detection_time))
    for key, value in positive:
        if value <= 0:
            raise s.error('must be positive', key)
    seed = s.int('seed')
    if not 0 <= seed < 2**64:
        raise s.error('must be an unsigned 64-bit integer', 'seed')
    workers = s.int('workers')
    if workers < 1:
        raise s.error('must be at least 1', 'workers')
    return SimulationSettings(sample_rate, duration, detection_time, seed, workers)


def _build_scan(s):
    freq = s.float('analysis_freq_mhz') * 1e6
    if freq < 0:
        raise s.error('must be non-negative', 'analysis_freq_mhz')
    mode = s.int('mode')
    if mode < 0:
        raise s.error(f'expected a non-negative supermode index, got {mode}', 'mode')
    scan = _validated(
        s,
        lambda: PhaseScan(
            n_points=s.int('points'),
            periods=s.float('periods'),
            draws_per_point=s.int('draws_per_point'),
            sweep_time=s.float('sweep_time_s'),
        ),
    )
    return ScanSettings(analysis_freq=freq, mode=mode, scan=scan, theory=s.choice('theory', SCAN_THEORIES))


def _build_spectrum(s):
    lo = s.float('freq_min_mhz') * 1e6
    hi = s.float('freq_max_mhz') * 1e6
    points = s.int('points')
    if not 0 < lo < hi:
        raise s.error(f'need 0 < freq_min_mhz < freq_max_mhz, got {lo / 1e6:g} and {hi / 1e6:g}')
    if points < 2:
        raise s.error('need at least 2 points', 'points')
    modes = s.ints('modes')
    if not modes or any(k < 0 for k in modes):
        raise s.error(f'expected non-negative supermode indices, got {modes!r}', 'modes')
    return SpectrumSettings(lo, hi, points, modes)


def _build_sql(s, comb):
    powers = tuple(p * 1e-6 for p in s.floats('powers_uw'))
    if not powers and comb.power > 0:
        powers = (comb.power,)
    if any(p <= 0 for p in powers):
        raise s.error('powers must be positive', 'powers_uw')
    squeezing = s.floats('squeezing_db') or (0.0,)
    return SqlSettings(powers=powers, squeezing_db=squeezing)


def _build_sweep(s):
    axis = s.choice('axis', SWEEP_AXES)
    spacing = s.choice('spacing', SWEEP_SPACINGS)
    points = s.int('points')
    if points < 1:
        raise s.error(f'the {axis} axis is empty', 'points')
    start = s.float('start')
    stop = s.float('stop')
    if spacing == 'log' and (start <= 0 or stop <= 0):
        raise s.error('a log-spaced axis needs positive start and stop')
    return SweepSettings(axis, start, stop, points, spacing, s.bool('monte_carlo'))


def _build_output(s):
    emit = tuple(x.strip().lower() for x in s.str('emit').split(',') if x.strip())
    for kind in emit:
        if kind not in EMIT_KINDS:
            raise s.error(f'unknown artifact kind {kind!r}; expected csv or svg', 'emit')
    reference = s.float('reference_du_min_s', optional=True)
    if reference is not None and reference <= 0:
        raise s.error('must be positive', 'reference_du_min_s')
    return OutputSettings(directory=expand_path(s.str('directory') or '.'), emit=emit, reference_du_min=reference)


def build_config(merged, preset=None, sources=()):
    sections = {name: _Section(name, values) for name, values in merged.items()}
    comb = _build_comb(sections['comb'])
    modulation, volts, coeff = _build_modulation(sections['modulation'])
    return RunConfig(
        comb=comb,
        spopo=_build_spopo(sections['spopo'], comb),
        chain=_build_chain(sections['chain']),
        state=_build_state(sections['state']),
        modulation=modulation,
        applied_volts=volts,
        pzt_coeff=coeff,
        analyzer=_build_analyzer(sections['analyzer']),
        simulation=_build_simulation(sections['simulation']),
        scan=_build_scan(sections['scan']),
        spectrum=_build_spectrum(sections['spectrum']),
        sql=_build_sql(sections['sql'], comb),
        sweep=_build_sweep(sections['sweep']),
        output=_build_output(sections['output']),
        preset=preset,
        sources=tuple(sources),
    )


def load_config(preset=None, path=None, overrides=None) -> RunConfig:
    """Merge defaults, preset, config file and ``overrides`` ({(section, key): value}) into a RunConfig"""
    layers = []
    sources = []
    if preset is not None:
        ppath = preset_path(preset)
        layers.append(_read_source(ppath))
        sources.append(ppath)
    if path is not None:
        path = expand_path(path)
        layers.append(_read_source(path))
        sources.append(path)
    if overrides:
        layer = {}
        for (section, key), value in overrides.items():
            if section not in DEFAULTS or key not in DEFAULTS[section]:
                raise ConfigError('unknown override', section=section, key=key)
            layer.setdefault(section, {})[key] = str(value)
        layers.append(layer)
    return build_config(_merge(layers), preset=PRESET_ALIASES.get(preset, preset), sources=sources)
