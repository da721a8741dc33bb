from __future__ import annotations

import matplotlib

matplotlib.use('Agg')

from matplotlib.figure import Figure  # noqa: E402

from .common import Emitter  # noqa: E402

# Text is drawn as paths so the file needs no fonts; the fixed hash salt and
# the missing date keep the output identical between runs.
SVG_RC = {
    'svg.fonttype': 'path',
    'svg.hashsalt': 'sqz-timing',
    'font.size': 9,
    'axes.linewidth': 0.5,
    'lines.linewidth': 1.0,
    'legend.frameon': False,
}
FIGSIZE = (6.0, 4.0)


class SvgEmitter(Emitter):
    EXTENSION = 'svg'

    def _write(self, result, path):
        plot = result.plot
        if plot is None:
            self.report_warning(f'{result.name} has no plot; skipping')
            return False
        with matplotlib.rc_context(SVG_RC):
            fig = Figure(figsize=FIGSIZE)
            ax = fig.add_subplot()
            for y, label, style in plot.hlines:
                ax.axhline(y, linestyle=':' if style.endswith(':') else '--', color=style[0], label=label)
            for series in plot.series:
                ax.plot(series.x, series.y, series.style, label=series.label)
            ax.set_xscale(plot.xscale)
            ax.set_yscale(plot.yscale)
            ax.set_xlabel(plot.xlabel)
            ax.set_ylabel(plot.ylabel)
            ax.set_title(plot.title)
            ax.grid(True, linewidth=0.3)
            ax.legend(loc='best')
            fig.tight_layout()
            fig.savefig(path, format='svg', metadata={'Date': None})
