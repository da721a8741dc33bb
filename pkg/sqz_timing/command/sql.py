from __future__ import annotations

from ..comb import derive_spectral
from ..metrology import effective_photons
from ..metrology import min_detectable_du
from ..metrology import project_du_min
from ..metrology import sql_combined
from ..metrology import sql_ph
from ..metrology import sql_tof
from ..squeezing import db_to_variance
from ..squeezing import squeezing_to_variance
from ..utils import ConfigError
from .common import Column
from .common import Command
from .common import CommandResult

DELAY_UNIT = 's/sqrt(Hz)'


class SqlCommand(Command):
    CMD_NAME = 'sql'
    CMD_DESC = 'Standard quantum limits and the minimum detectable delay per (power, squeezing) point'

    def _real_run(self, config):
        powers = config.sql.powers
        if not powers:
            raise ConfigError('no positive optical power to evaluate', section='sql', key='powers_uw')

        spectral = derive_spectral(config.comb)
        eta_tot = config.chain.eta_tot()
        var_q1 = db_to_variance(config.state.antisqueezing_db)
        reference = config.output.reference_du_min
        self.write_debug(
            f'omega0 = {spectral.omega0:.6e} rad/s, domega = {spectral.domega:.6e} rad/s, '
            f'alpha = {spectral.alpha:.4f}, eta_tot = {eta_tot:.4f}'
        )

        columns = [
            Column('power', 'uW'),
            Column('squeezing', 'dB'),
            Column('photons', '1'),
            Column('sql_tof', DELAY_UNIT),
            Column('sql_ph', DELAY_UNIT),
            Column('sql_combined', DELAY_UNIT),
            Column('du_min', DELAY_UNIT),
        ]
        if reference is not None:
            columns.append(Column('projected_du', DELAY_UNIT))

        rows = []
        for power in powers:
            n = effective_photons(power, config.comb.lambda0, config.simulation.detection_time, eta_tot).n_eff
            for squeezing_db in config.sql.squeezing_db:
                var_p0 = squeezing_to_variance(squeezing_db)
                row = [
                    power * 1e6,
                    float(squeezing_db),
                    float(n),
                    float(sql_tof(n, spectral.domega)),
                    float(sql_ph(n, spectral.omega0)),
                    float(sql_combined(n, spectral.omega0, spectral.domega)),
                    float(min_detectable_du(n, spectral, var_p0, var_q1)),
                ]
                if reference is not None:
                    row.append(float(project_du_min(reference, var_p0, var_q1, spectral.alpha)))
                rows.append(tuple(row))

        first = rows[0]
        summary = [f'SQL at {first[0]:g} uW: {first[5]:.4e} {DELAY_UNIT}']
        return CommandResult(name=self.CMD_NAME, columns=columns, rows=rows, summary=summary)
