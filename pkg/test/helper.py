from __future__ import annotations

import csv
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from sqz_timing import TimingLab
from sqz_timing import main
from sqz_timing.comb import CombParams
from sqz_timing.metrology import pzt_to_delay
from sqz_timing.montecarlo import AnalyzerSettings
from sqz_timing.montecarlo import ExperimentScenario
from sqz_timing.montecarlo import Modulation
from sqz_timing.montecarlo import NoiseState
from sqz_timing.squeezing import DetectionChain
from sqz_timing.squeezing import SpopoParams
from sqz_timing.squeezing import decay_rate_from_finesse
from sqz_timing.squeezing import pump_rate

SQUEEZED_1P5DB_VAR = 10**-0.15


def reference_comb(power=2e-6):
    return CombParams(lambda0=815e-9, dt_fwhm=130e-15, rep_rate=75e6, power=power)


def reference_chain(eta_tot=0.68):
    return DetectionChain(rho=0.93, eta=0.98, xi=0.89, eta_tot_override=eta_tot)


def reference_spopo(r=None, lambda_ratios=None, **kwargs):
    if r is None:
        r = pump_rate(27e-3, 55e-3)
    if lambda_ratios is not None:
        kwargs['lambda_ratios'] = lambda_ratios
    return SpopoParams(zeta=0.814, gamma_s=decay_rate_from_finesse(75e6, 24), r=r, **kwargs)


def reference_scenario(state=None, volts=1.7, duration=0.5, seed=0, n_averages=None):
    return ExperimentScenario(
        comb=reference_comb(),
        chain=reference_chain(),
        state=state or NoiseState.coherent(),
        modulation=Modulation(frequency=2e6, applied_du=pzt_to_delay(volts)),
        analyzer=AnalyzerSettings(rbw=100e3, n_averages=n_averages),
        sample_rate=10e6,
        duration=duration,
        rng_seed=seed,
    )


def assert_rel(self, got, expected, rel, msg=None):
    """Assert |got - expected| <= rel·|expected|"""
    self.assertTrue(
        math.isclose(got, expected, rel_tol=rel, abs_tol=0.0),
        msg or f'{got!r} is not within {rel:g} (relative) of {expected!r}',
    )


class FakeLab(TimingLab):
    def __init__(self, override=None):
        params = {'quiet': False, 'verbose': True}
        if override:
            params.update(override)
        super().__init__(params)
        self.msgs = []

    def to_screen(self, message):
        self.msgs.append(message)

    def report_warning(self, message, only_once=False):
        self.msgs.append(f'WARNING: {message}')


def run_cli(argv):
    """Exit code of the command line invoked with ``argv``"""
    try:
        main(argv)
    except SystemExit as e:
        code = e.code
        return 0 if code is None else code
    raise AssertionError('main() returned without calling sys.exit')


def read_csv(path):
    """(schema comment, header, rows) of an emitted CSV file"""
    with open(path, encoding='utf-8', newline='') as f:
        comment = f.readline().rstrip('\n')
        reader = csv.reader(f)
        header = next(reader)
        rows = list(reader)
    return comment, header, rows


def csv_column(header, rows, name):
    """Column whose header starts with ``name``, as floats where possible"""
    for idx, h in enumerate(header):
        if h == name or h.startswith(name + ' ['):
            break
    else:
        raise KeyError(name)
    values = []
    for row in rows:
        try:
            values.append(float(row[idx]))
        except ValueError:
            values.append(row[idx])
    return values
