from __future__ import annotations

from .common import Emitter
from .csv import CsvEmitter
from .svg import SvgEmitter


def get_emitter(key):
    return globals()[key + 'Emitter']


__all__ = [
    'CsvEmitter',
    'Emitter',
    'SvgEmitter',
]
