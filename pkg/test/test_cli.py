#!/usr/bin/env python
from __future__ import annotations

# Allow direct execution
import os
import sys
import unittest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import math
import tempfile

import numpy as np

from sqz_timing.utils import UNRESOLVED
from test.helper import assert_rel
from test.helper import csv_column
from test.helper import read_csv
from test.helper import run_cli


class CliTestCase(unittest.TestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self._tmp.cleanup)
        self.outdir = self._tmp.name

    def write_conf(self, text, name='run.conf'):
        path = os.path.join(self.outdir, name)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)
        return path

    def run_ok(self, *args, outdir=None):
        outdir = outdir or self.outdir
        self.assertEqual(run_cli(['-q', '-o', outdir, *args]), 0)

    def artifact(self, name, ext='csv', outdir=None):
        return os.path.join(outdir or self.outdir, f'{name}.{ext}')

    def read_bytes(self, path):
        with open(path, 'rb') as f:
            return f.read()


class TestExitCodes(CliTestCase):
    def test_no_command(self):
        self.assertEqual(run_cli([]), 2)

    def test_unknown_command(self):
        self.assertEqual(run_cli(['calibrate']), 2)

    def test_list_presets(self):
        self.assertEqual(run_cli(['--list-presets']), 0)

    def test_unknown_preset(self):
        self.assertEqual(run_cli(['-q', '--preset', 'nope', 'sql']), 2)

    def test_invalid_config(self):
        path = self.write_conf('[comb]\npower_mw = 2\n')
        self.assertEqual(run_cli(['-q', '--config', path, 'sql']), 2)

    def test_empty_sweep_axis(self):
        self.assertEqual(run_cli(['-q', '-o', self.outdir, '--points', '0', 'sweep']), 2)
        self.assertFalse(os.path.exists(self.artifact('sweep')))

    def test_mode_out_of_range(self):
        path = self.write_conf('[spectrum]\nmodes = 0, 7\n')
        self.assertEqual(run_cli(['-q', '-o', self.outdir, '--config', path, 'squeeze-spectrum']), 2)

    def test_above_threshold(self):
        path = self.write_conf('[spopo]\npump_power_mw = 55\n')
        self.assertEqual(run_cli(['-q', '--config', path, 'squeeze-spectrum']), 2)

    def test_no_power_for_sql(self):
        self.assertEqual(run_cli(['-q', '-o', self.outdir, '--preset', 'paper-vacuum', 'sql']), 2)


class TestSqlCommand(CliTestCase):
    def test_reference_limit(self):
        self.run_ok('--preset', 'paper', 'sql')
        comment, header, rows = read_csv(self.artifact('sql'))
        self.assertTrue(comment.startswith('# sqz-timing csv v1; command=sql; version='))
        self.assertIn('preset=paper-coherent', comment)
        self.assertEqual(header[:3], ['power [uW]', 'squeezing [dB]', 'photons [1]'])
        self.assertIn('sql_combined [s/sqrt(Hz)]', header)
        self.assertEqual(len(rows), 3)
        squeezing = csv_column(header, rows, 'squeezing')
        combined = csv_column(header, rows, 'sql_combined')
        du_min = csv_column(header, rows, 'du_min')
        i = squeezing.index(0.0)
        assert_rel(self, combined[i], 9.15e-23, 0.01)
        assert_rel(self, du_min[i], combined[i], 1e-10)
        j = squeezing.index(1.5)
        self.assertAlmostEqual(du_min[j] / du_min[i], 0.841408, delta=1e-4)

    def test_ten_db_projection(self):
        self.run_ok('--preset', 'paper', '--squeeze-db', '10', 'sql')
        _, header, rows = read_csv(self.artifact('sql'))
        self.assertEqual(len(rows), 1)
        assert_rel(self, csv_column(header, rows, 'projected_du')[0], 2.8e-23, 0.02)
        assert_rel(self, csv_column(header, rows, 'du_min')[0], 2.90e-23, 0.01)

    def test_byte_identical(self):
        other = os.path.join(self.outdir, 'again')
        self.run_ok('--preset', 'paper', 'sql')
        self.run_ok('--preset', 'paper', 'sql', outdir=other)
        self.assertEqual(self.read_bytes(self.artifact('sql')), self.read_bytes(self.artifact('sql', outdir=other)))

    def test_no_plot_for_svg(self):
        self.run_ok('--preset', 'paper', '--emit', 'csv,svg', '--no-warnings', 'sql')
        self.assertTrue(os.path.exists(self.artifact('sql')))
        self.assertFalse(os.path.exists(self.artifact('sql', 'svg')))


class TestSweepCommand(CliTestCase):
    def test_power_scaling(self):
        self.run_ok('--axis', 'power', '--start', '1', '--stop', '10', '--points', '5', 'sweep')
        _, header, rows = read_csv(self.artifact('sweep'))
        power = np.array(csv_column(header, rows, 'power'))
        du_min = np.array(csv_column(header, rows, 'du_min'))
        slope = np.polyfit(np.log(power), np.log(du_min), 1)[0]
        self.assertAlmostEqual(slope, -0.5, delta=0.01)

    def test_squeezing_monotone(self):
        self.run_ok(
            '--axis', 'squeeze_db', '--start', '0', '--stop', '10', '--points', '11', '--spacing', 'linear', 'sweep'
        )
        _, header, rows = read_csv(self.artifact('sweep'))
        du_min = np.array(csv_column(header, rows, 'du_min'))
        self.assertTrue(np.all(np.diff(du_min) < 0))
        assert_rel(self, du_min[0], csv_column(header, rows, 'sql_combined')[0], 1e-10)

    def test_monte_carlo_independent_of_workers(self):
        path = self.write_conf('[simulation]\nduration_s = 0.02\nseed = 3\n\n[sweep]\npoints = 3\n')
        serial = os.path.join(self.outdir, 'serial')
        threaded = os.path.join(self.outdir, 'threaded')
        self.run_ok('--config', path, '--monte-carlo', '--workers', '1', 'sweep', outdir=serial)
        self.run_ok('--config', path, '--monte-carlo', '--workers', '3', 'sweep', outdir=threaded)
        self.assertEqual(
            self.read_bytes(self.artifact('sweep', outdir=serial)),
            self.read_bytes(self.artifact('sweep', outdir=threaded)),
        )
        _, header, rows = read_csv(self.artifact('sweep', outdir=serial))
        self.assertIn('du_min_mc [s/sqrt(Hz)]', header)
        self.assertEqual(len(set(csv_column(header, rows, 'seed'))), 3)

    def test_svg(self):
        first = os.path.join(self.outdir, 'first')
        second = os.path.join(self.outdir, 'second')
        self.run_ok('--emit', 'csv,svg', 'sweep', outdir=first)
        self.run_ok('--emit', 'csv,svg', 'sweep', outdir=second)
        svg = self.read_bytes(self.artifact('sweep', 'svg', outdir=first))
        self.assertIn(b'<svg', svg)
        self.assertNotIn(b'<image', svg)
        self.assertEqual(svg, self.read_bytes(self.artifact('sweep', 'svg', outdir=second)))


class TestSqueezeSpectrumCommand(CliTestCase):
    def test_model(self):
        self.run_ok('squeeze-spectrum')
        _, header, rows = read_csv(self.artifact('squeeze-spectrum'))
        self.assertEqual(header[:2], ['omega [rad/s]', 'freq [Hz]'])
        self.assertEqual(len(header), 2 + 2 * 4)
        var_p0 = np.array(csv_column(header, rows, 'var_p0'))
        var_q0 = np.array(csv_column(header, rows, 'var_q0'))
        self.assertTrue(np.all(np.diff(var_p0) > 0))
        self.assertTrue(np.all(np.diff(var_q0) < 0))
        self.assertTrue(np.all(var_p0 < 0))
        # negative eigenvalue ratio: v1 is squeezed in amplitude
        self.assertTrue(np.all(np.array(csv_column(header, rows, 'var_q1')) < 0))

    def test_no_pump_is_vacuum(self):
        path = self.write_conf('[spopo]\npump_power_mw = 0\n\n[spectrum]\nmodes = 0, 1\n')
        self.run_ok('--config', path, 'squeeze-spectrum')
        _, header, rows = read_csv(self.artifact('squeeze-spectrum'))
        for name in ('var_p0', 'var_q0', 'var_p1', 'var_q1'):
            self.assertLess(max(abs(v) for v in csv_column(header, rows, name)), 1e-12)


class TestPhaseScanCommand(CliTestCase):
    def test_vacuum_preset(self):
        first = os.path.join(self.outdir, 'first')
        second = os.path.join(self.outdir, 'second')
        self.run_ok('--preset', 'vacuum-squeezing', 'phase-scan', outdir=first)
        self.run_ok('--preset', 'vacuum-squeezing', 'phase-scan', outdir=second)
        path = self.artifact('phase-scan', outdir=first)
        self.assertEqual(self.read_bytes(path), self.read_bytes(self.artifact('phase-scan', outdir=second)))
        _, header, rows = read_csv(path)
        self.assertEqual(header, ['time [s]', 'phase [rad]', 'variance [dB]', 'theory [dB]'])
        self.assertEqual(len(rows), 400)
        variance = csv_column(header, rows, 'variance')
        self.assertAlmostEqual(min(variance), -3.0, delta=0.2)
        self.assertAlmostEqual(max(variance), 6.0, delta=0.2)
        theory = csv_column(header, rows, 'theory')
        self.assertLess(min(theory), 0.0)
        self.assertGreater(max(theory), 0.0)

    def test_coherent_is_flat(self):
        self.run_ok('--preset', 'paper', 'phase-scan')
        _, header, rows = read_csv(self.artifact('phase-scan'))
        self.assertLess(max(abs(v) for v in csv_column(header, rows, 'variance')), 0.2)
        self.assertLess(max(abs(v) for v in csv_column(header, rows, 'theory')), 1e-12)


class TestTimingCommand(CliTestCase):
    def test_paper_coherent(self):
        self.run_ok('--preset', 'paper-coherent', 'timing')
        _, header, rows = read_csv(self.artifact('timing'))
        self.assertEqual(len(rows), 1)
        self.assertEqual(csv_column(header, rows, 'state'), ['coherent'])
        assert_rel(self, csv_column(header, rows, 'du_min')[0], 8.9e-23, 0.05)
        self.assertAlmostEqual(csv_column(header, rows, 'improvement')[0], 3.0, delta=0.2)

    def test_paper_squeezed(self):
        self.run_ok('--preset', 'paper-squeezed', 'timing')
        _, header, rows = read_csv(self.artifact('timing'))
        self.assertEqual(csv_column(header, rows, 'state'), ['coherent', 'squeezed'])
        coherent, squeezed = csv_column(header, rows, 'du_min')
        assert_rel(self, squeezed, 7.5e-23, 0.05)
        self.assertAlmostEqual(squeezed / coherent, 0.841, delta=0.02)
        self.assertEqual(csv_column(header, rows, 'squeezing'), [0.0, 1.5])

    def test_unresolved(self):
        path = self.write_conf('[simulation]\nduration_s = 0.05\n')
        self.run_ok('--preset', 'paper', '--config', path, '--applied-volts', '0', 'timing')
        _, header, rows = read_csv(self.artifact('timing'))
        self.assertEqual(csv_column(header, rows, 'du_min'), [UNRESOLVED])
        self.assertEqual(csv_column(header, rows, 'sigma_predicted'), [0.0])
        self.assertTrue(math.isfinite(csv_column(header, rows, 'sigma')[0]))


if __name__ == '__main__':
    unittest.main()
