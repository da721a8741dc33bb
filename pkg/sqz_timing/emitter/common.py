from __future__ import annotations

import os

from ..utils import EmissionError


class Emitter:
    """Emitter class.

    Emitter objects are added to a TimingLab with its add_emitter() method.
    When a command has produced its result, the lab takes its internal chain
    of Emitters and calls the run() method of each one in turn with the
    result and the output directory.

    Emitter objects follow a "mutual registration" process similar to
    Command objects.

    Subclasses set EXTENSION and implement _write(result, path).
    """

    EXTENSION = None
    _lab = None

    def __init__(self, lab=None):
        self._lab = lab

    def set_lab(self, lab):
        """Sets the lab for this emitter."""
        self._lab = lab

    @classmethod
    def emitter_key(cls):
        return cls.__name__[: -len('Emitter')]

    def artifact_path(self, result, directory):
        return os.path.join(directory, f'{result.name}.{self.EXTENSION}')

    def run(self, result, directory):
        """Write the artifact for ``result`` into ``directory``.

        Returns the path written, or None when the result has nothing for
        this emitter. May raise EmissionError if writing fails.
        """
        path = self.artifact_path(result, directory)
        try:
            os.makedirs(directory, exist_ok=True)
            written = self._write(result, path)
        except OSError as err:
            raise EmissionError(f'Unable to write {path}: {err.strerror or err}')
        return path if written is not False else None

    def _write(self, result, path):
        raise NotImplementedError('This method must be implemented by subclasses')

    def report_warning(self, msg):
        if self._lab:
            self._lab.report_warning(f'[{self.emitter_key().lower()}] {msg}')
