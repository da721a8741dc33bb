from __future__ import annotations

import numpy as np

from ..montecarlo import NoiseState
from ..montecarlo import measure_spectrum
from ..montecarlo import scenario_from_config
from ..montecarlo import timing_result
from .common import Column
from .common import Command
from .common import CommandResult
from .common import PlotSpec
from .common import Series

DELAY_UNIT = 's/sqrt(Hz)'


class TimingCommand(Command):
    """Monte-Carlo timing measurement.

    A squeezed run is paired with a coherent run on the same seed, so both
    see the same noise realization and their ratio reflects the squeezing
    alone.
    """

    CMD_NAME = 'timing'
    CMD_DESC = 'Simulated spectrum-analyzer measurement of the minimum detectable delay'

    def _real_run(self, config):
        scenario = scenario_from_config(config)
        runs = [(scenario.state.kind, scenario)]
        if scenario.state.kind != 'coherent':
            runs.insert(0, ('coherent', scenario_from_config(config, state=NoiseState.coherent())))

        self.to_screen(
            f'applied delay {config.modulation.applied_du:.4e} s ({config.applied_volts:g} V) at '
            f'{config.modulation.frequency / 1e6:g} MHz, rbw {config.analyzer.rbw / 1e3:g} kHz, '
            f'{scenario.n_averages} averages'
        )

        columns = [
            Column('state'),
            Column('squeezing', 'dB'),
            Column('applied_du', 's'),
            Column('sigma', '1'),
            Column('sigma_predicted', '1'),
            Column('improvement', 'dB'),
            Column('du_min', DELAY_UNIT),
            Column('du_min_analytic', DELAY_UNIT),
            Column('sql_ref', DELAY_UNIT),
        ]
        rows = []
        results = {}
        series = []
        for (label, run), style in zip(runs, ('k-', 'b:')):
            spec = measure_spectrum(run)
            result = timing_result(run, spec)
            results[label] = result
            self.write_debug(f'{label}: floor bins {len(spec.power) - 1}, sigma {result.sigma:.4f}')
            rows.append(
                (
                    label,
                    0.0 - result.squeezing_db_used,
                    run.modulation.applied_du,
                    result.sigma,
                    result.sigma_predicted,
                    result.improvement_db,
                    result.du_min,
                    result.du_min_analytic,
                    result.sql_ref,
                )
            )
            series.append(Series(label, spec.frequencies / 1e6, 10 * np.log10(np.maximum(spec.power, 1e-30)), style))

        summary = []
        for label, result in results.items():
            if result.resolved:
                summary.append(
                    f'{label}: sigma {result.sigma:.3f} (+{result.improvement_db:.2f} dB), '
                    f'du_min {result.du_min:.3e} {DELAY_UNIT}'
                )
            else:
                summary.append(f'{label}: modulation not resolved (sigma {result.sigma:.3f})')
        if len(results) == 2 and all(r.resolved for r in results.values()):
            ratio = results[scenario.state.kind].du_min / results['coherent'].du_min
            summary.append(f'squeezed/coherent du_min ratio {ratio:.4f}')

        plot = PlotSpec(
            title='Spectrum analyzer trace',
            xlabel='Frequency (MHz)',
            ylabel='Power relative to shot noise (dB)',
            series=tuple(series),
            hlines=((0.0, 'shot noise', 'k--'),),
        )
        return CommandResult(name=self.CMD_NAME, columns=columns, rows=rows, plot=plot, summary=summary)
