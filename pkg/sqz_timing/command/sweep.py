from __future__ import annotations

import dataclasses
import math

from ..comb import derive_spectral
from ..metrology import effective_photons
from ..metrology import min_detectable_du
from ..metrology import sql_combined
from ..montecarlo import NoiseState
from ..montecarlo import noise_state_from_config
from ..montecarlo import run_scenarios
from ..montecarlo import scenario_from_config
from ..montecarlo import spawn_seeds
from ..squeezing import db_to_variance
from ..squeezing import quadrature_variances
from ..squeezing import squeezing_to_variance
from .common import Column
from .common import Command
from .common import CommandResult
from .common import PlotSpec
from .common import Series

DELAY_UNIT = 's/sqrt(Hz)'

AXIS_COLUMNS = {
    'power': Column('power', 'uW'),
    'squeeze_db': Column('squeezing', 'dB'),
    'pump_rate': Column('pump_rate', '1'),
    'omega': Column('omega', 'rad/s'),
}


def _spopo_state(spopo, chain, omega):
    return NoiseState.squeezed(
        quadrature_variances(0, omega, spopo, chain).var_p,
        quadrature_variances(1, omega, spopo, chain).var_q,
    )


class SweepCommand(Command):
    """Sweep one parameter and tabulate the minimum detectable delay.

    The analytic column is always computed; with monte_carlo enabled each
    point also runs the simulated measurement, on its own seed derived from
    the run seed and the point index.
    """

    CMD_NAME = 'sweep'
    CMD_DESC = 'Minimum detectable delay against power, squeezing, pump rate or analysis frequency'

    def _point(self, config, axis, x):
        """(comb, noise state) for one sweep value"""
        comb = config.comb
        omega_mod = 2 * math.pi * config.modulation.frequency
        if axis == 'power':
            return dataclasses.replace(comb, power=x * 1e-6), noise_state_from_config(config)
        if axis == 'squeeze_db':
            return comb, NoiseState.squeezed(squeezing_to_variance(x), db_to_variance(config.state.antisqueezing_db))
        if axis == 'pump_rate':
            spopo = dataclasses.replace(config.spopo, r=x)
            return comb, _spopo_state(spopo, config.chain, omega_mod)
        return comb, _spopo_state(config.spopo, config.chain, x)

    def _real_run(self, config):
        sweep = config.sweep
        values = sweep.values()
        self.to_screen(
            f'{sweep.axis} from {sweep.start:g} to {sweep.stop:g}, {sweep.points} {sweep.spacing} points'
            + (' (monte carlo)' if sweep.monte_carlo else '')
        )

        points = [self._point(config, sweep.axis, float(x)) for x in values]
        rows = []
        for x, (comb, state) in zip(values, points):
            spectral = derive_spectral(comb)
            n = effective_photons(comb.power, comb.lambda0, config.simulation.detection_time, config.chain.eta_tot())
            rows.append(
                [
                    float(x),
                    state.var_p0,
                    state.var_q1,
                    float(min_detectable_du(n.n_eff, spectral, state.var_p0, state.var_q1)),
                    float(sql_combined(n.n_eff, spectral.omega0, spectral.domega)),
                ]
            )

        columns = [
            AXIS_COLUMNS[sweep.axis],
            Column('var_p0', '1'),
            Column('var_q1', '1'),
            Column('du_min', DELAY_UNIT),
            Column('sql_combined', DELAY_UNIT),
        ]
        series = [Series('analytic', values, [row[3] for row in rows], 'b-')]

        if sweep.monte_carlo:
            seeds = spawn_seeds(config.simulation.seed, len(points))
            scenarios = [
                scenario_from_config(config, state=state, comb=comb, seed=seed)
                for (comb, state), seed in zip(points, seeds)
            ]
            workers = config.simulation.workers
            self.write_debug(f'{len(scenarios)} scenarios on {workers} worker(s)')
            results = run_scenarios(scenarios, max_workers=workers)
            for row, seed, result in zip(rows, seeds, results):
                row.extend((seed, result.sigma, result.du_min))
            columns.extend((Column('seed'), Column('sigma', '1'), Column('du_min_mc', DELAY_UNIT)))
            resolved = [(x, r.du_min) for x, r in zip(values, results) if r.resolved]
            if resolved:
                series.append(Series('monte carlo', [p[0] for p in resolved], [p[1] for p in resolved], 'ro'))

        plot = PlotSpec(
            title='Minimum detectable delay',
            xlabel=AXIS_COLUMNS[sweep.axis].header,
            ylabel=f'du_min ({DELAY_UNIT})',
            series=tuple(series),
            xscale='log' if sweep.spacing == 'log' else 'linear',
            yscale='log',
        )
        summary = [f'du_min from {rows[0][3]:.4e} to {rows[-1][3]:.4e} {DELAY_UNIT}']
        return CommandResult(
            name=self.CMD_NAME, columns=columns, rows=[tuple(r) for r in rows], plot=plot, summary=summary
        )
