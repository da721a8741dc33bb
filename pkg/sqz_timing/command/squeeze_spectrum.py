from __future__ import annotations

from ..squeezing import quadrature_spectrum
from ..squeezing import variance_to_db
from .common import Column
from .common import Command
from .common import CommandResult
from .common import PlotSpec
from .common import Series

_COLORS = 'bgrcmyk'


class SqueezeSpectrumCommand(Command):
    CMD_NAME = 'squeeze-spectrum'
    CMD_DESC = 'Phase and amplitude quadrature noise of each supermode against analysis frequency'

    def _real_run(self, config):
        settings = config.spectrum
        freqs = settings.frequencies()
        omegas = settings.omegas()
        self.to_screen(
            f'r = {config.spopo.r:.4f}, gamma_s = {config.spopo.gamma_s:.4e} rad/s, '
            f'{len(settings.modes)} supermodes over {len(freqs)} frequencies'
        )

        columns = [Column('omega', 'rad/s'), Column('freq', 'Hz')]
        curves = []
        series = []
        for i, k in enumerate(settings.modes):
            var_p, var_q = quadrature_spectrum(k, omegas, config.spopo, config.chain)
            p_db = variance_to_db(var_p)
            q_db = variance_to_db(var_q)
            curves.extend((p_db, q_db))
            columns.extend((Column(f'var_p{k}', 'dB'), Column(f'var_q{k}', 'dB')))
            color = _COLORS[i % len(_COLORS)]
            series.append(Series(f'P{k}', freqs, p_db, f'{color}-'))
            series.append(Series(f'Q{k}', freqs, q_db, f'{color}--'))

        rows = [
            (float(omega), float(freq), *(float(c[j]) for c in curves))
            for j, (omega, freq) in enumerate(zip(omegas, freqs))
        ]
        plot = PlotSpec(
            title='Supermode quadrature noise',
            xlabel='Analysis frequency (Hz)',
            ylabel='Noise relative to shot noise (dB)',
            series=tuple(series),
            xscale='log',
            hlines=((0.0, 'shot noise', 'k:'),),
        )
        summary = [
            f'v{k}: P {p_db[0]:+.2f} dB, Q {q_db[0]:+.2f} dB at {freqs[0]:.3g} Hz'
            for k, p_db, q_db in zip(settings.modes, curves[0::2], curves[1::2])
        ]
        return CommandResult(name=self.CMD_NAME, columns=columns, rows=rows, plot=plot, summary=summary)
