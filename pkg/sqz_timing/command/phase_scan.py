from __future__ import annotations

from ..montecarlo import pair_from_config
from ..montecarlo import phase_scan
from ..squeezing import quadrature_variances
from ..squeezing import theory_phase_curve
from ..squeezing import variance_to_db
from .common import Column
from .common import Command
from .common import CommandResult
from .common import PlotSpec
from .common import Series


class PhaseScanCommand(Command):
    CMD_NAME = 'phase-scan'
    CMD_DESC = 'Quadrature variance while the local oscillator phase is swept by a sawtooth'

    def _real_run(self, config):
        settings = config.scan
        pair = pair_from_config(config, settings.omega, settings.mode)
        self.to_screen(
            f'v{settings.mode} at {settings.analysis_freq / 1e6:g} MHz: '
            f'{variance_to_db(pair.var_p):+.2f} dB / {variance_to_db(pair.var_q):+.2f} dB, '
            f'{settings.scan.n_points} points x {settings.scan.draws_per_point} draws'
        )
        trace = phase_scan(pair, settings.scan, seed=config.simulation.seed)

        if settings.theory == 'model':
            model = quadrature_variances(settings.mode, settings.omega, config.spopo, config.chain)
            theory = theory_phase_curve(trace.phases, model)
        else:
            theory = trace.theory
        measured_db = trace.variance_db
        theory_db = variance_to_db(theory)

        columns = [Column('time', 's'), Column('phase', 'rad'), Column('variance', 'dB'), Column('theory', 'dB')]
        rows = [
            (float(t), float(phase), float(m), float(th))
            for t, phase, m, th in zip(trace.times, trace.phases, measured_db, theory_db)
        ]
        plot = PlotSpec(
            title='Quadrature variance against LO phase',
            xlabel='Time (s)',
            ylabel='Noise relative to shot noise (dB)',
            series=(
                Series('experiment', trace.times, measured_db, 'r-'),
                Series('theory', trace.times, theory_db, 'b:'),
            ),
            hlines=((0.0, 'shot noise', 'k--'),),
        )
        summary = [
            f'measured extrema {measured_db.min():+.2f} dB / {measured_db.max():+.2f} dB',
            f'theory extrema {theory_db.min():+.2f} dB / {theory_db.max():+.2f} dB',
        ]
        return CommandResult(name=self.CMD_NAME, columns=columns, rows=rows, plot=plot, summary=summary)
