from __future__ import annotations

import csv

from ..utils import format_value
from ..version import __version__
from .common import Emitter

CSV_SCHEMA = 'sqz-timing csv v1'


def header_comment(result):
    fields = [CSV_SCHEMA, f'command={result.name}', f'version={__version__}']
    if result.preset:
        fields.append(f'preset={result.preset}')
    return '# ' + '; '.join(fields)


class CsvEmitter(Emitter):
    """Comma-separated table: a schema comment line, a header naming each column with its unit, then the rows"""

    EXTENSION = 'csv'

    def _write(self, result, path):
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(header_comment(result) + '\n')
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow([c.header for c in result.columns])
            for row in result.rows:
                writer.writerow([format_value(v) for v in row])
