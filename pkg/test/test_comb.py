#!/usr/bin/env python
from __future__ import annotations

# Allow direct execution
import os
import sys
import unittest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import math

import numpy as np

from sqz_timing.comb import CombParams
from sqz_timing.comb import TimeGrid
from sqz_timing.comb import default_grid
from sqz_timing.comb import derive_spectral
from sqz_timing.comb import inner_product
from sqz_timing.comb import materialize_carrier
from sqz_timing.comb import mode_overlap_matrix
from sqz_timing.comb import shifted_pulse
from sqz_timing.comb import shifted_pulse_decomposition
from sqz_timing.comb import supermode
from sqz_timing.comb import timing_mode
from sqz_timing.utils import GridMismatchError
from sqz_timing.utils import InvalidParameterError
from sqz_timing.utils import ResolutionError
from test.helper import reference_comb


class TestDerivedSpectral(unittest.TestCase):
    def test_reference_comb(self):
        spectral = derive_spectral(reference_comb())
        self.assertAlmostEqual(spectral.omega0 / 2.311226e15, 1, places=5)
        self.assertAlmostEqual(spectral.domega / 1.811400e13, 1, places=5)
        self.assertAlmostEqual(spectral.alpha, 127.594, places=2)
        self.assertAlmostEqual(spectral.u0 * math.hypot(spectral.omega0, spectral.domega), 1, places=12)

    def test_broadband_warning(self):
        with self.assertLogs('sqz_timing.comb', 'WARNING'):
            derive_spectral(CombParams(lambda0=815e-9, dt_fwhm=1e-16, rep_rate=75e6))

    def test_invalid_params(self):
        for kwargs in ({'lambda0': 0}, {'dt_fwhm': -1e-15}, {'rep_rate': math.nan}, {'power': -1e-6}):
            params = {'lambda0': 815e-9, 'dt_fwhm': 130e-15, 'rep_rate': 75e6}
            params.update(kwargs)
            with self.assertRaises(InvalidParameterError):
                CombParams(**params)


class TestSupermodes(unittest.TestCase):
    def setUp(self):
        self.comb = reference_comb()
        self.grid = default_grid(self.comb)

    def test_orthonormal(self):
        gram = mode_overlap_matrix(6, self.comb, self.grid)
        self.assertLess(np.max(np.abs(gram - np.eye(7))), 1e-9)

    def test_unit_norm_parity(self):
        for k in range(4):
            mode = supermode(k, self.comb, self.grid)
            self.assertAlmostEqual(mode.norm(), 1.0, places=12)
            # even modes are symmetric, odd ones antisymmetric about u = 0
            np.testing.assert_allclose(mode.samples[::-1], (-1) ** k * mode.samples, atol=1e-12)

    def test_bad_index(self):
        for k in (-1, 1.5, True):
            with self.assertRaises(InvalidParameterError):
                supermode(k, self.comb, self.grid)

    def test_grid_too_narrow(self):
        domega = derive_spectral(self.comb).domega
        with self.assertRaises(InvalidParameterError):
            supermode(0, self.comb, TimeGrid.symmetric(3 / domega, 1024))

    def test_timing_mode_normalized(self):
        w1 = timing_mode(self.comb, self.grid)
        self.assertAlmostEqual(w1.norm(), 1.0, places=9)
        alpha = derive_spectral(self.comb).alpha
        v0 = supermode(0, self.comb, self.grid)
        overlap = inner_product(v0, w1)
        self.assertAlmostEqual(overlap.real, 0.0, places=9)
        self.assertAlmostEqual(overlap.imag, alpha / math.sqrt(alpha**2 + 1), places=9)

    def test_grid_mismatch(self):
        other = TimeGrid.symmetric(-self.grid.start, self.grid.n + 2)
        with self.assertRaises(GridMismatchError):
            inner_product(supermode(0, self.comb, self.grid), supermode(0, self.comb, other))

    def test_carrier_mismatch(self):
        v0 = supermode(0, self.comb, self.grid)
        with self.assertRaises(GridMismatchError):
            inner_product(v0, materialize_carrier(v0))


class TestCarrier(unittest.TestCase):
    def test_materialize_on_fine_grid(self):
        comb = reference_comb()
        v1 = supermode(1, comb, default_grid(comb))
        field = materialize_carrier(v1)
        self.assertEqual(field.carrier, 0.0)
        np.testing.assert_allclose(np.abs(field.samples), np.abs(v1.samples), rtol=1e-12, atol=0)
        self.assertAlmostEqual(field.norm(), 1.0, places=12)
        self.assertIs(materialize_carrier(field), field)

    def test_coarse_grid(self):
        comb = reference_comb()
        grid = TimeGrid.symmetric(12 / derive_spectral(comb).domega, 256)
        with self.assertRaises(ResolutionError):
            materialize_carrier(supermode(0, comb, grid))


class TestShiftDecomposition(unittest.TestCase):
    def setUp(self):
        self.comb = reference_comb()
        self.grid = default_grid(self.comb)
        self.spectral = derive_spectral(self.comb)

    def test_no_shift(self):
        dec = shifted_pulse_decomposition(0.0, self.comb, self.grid)
        self.assertAlmostEqual(abs(dec.c0), 1.0, places=12)
        self.assertAlmostEqual(abs(dec.c_w), 0.0, places=12)
        self.assertLess(dec.residual, 1e-12)

    def test_timing_coefficient(self):
        alpha = self.spectral.alpha
        for shift in (1e-4, 1e-3):
            dec = shifted_pulse_decomposition(shift * self.spectral.u0, self.comb, self.grid)
            ratio = dec.c_w.real / shift
            self.assertAlmostEqual(ratio, (alpha**2 + 0.5) / (alpha**2 + 1), delta=1e-4, msg=f'shift {shift} u0')
            self.assertAlmostEqual(ratio, 1.0, delta=1e-3, msg=f'shift {shift} u0')

    def test_residual_is_second_order(self):
        shifts = np.logspace(-4, -2, 9) * self.spectral.u0
        residuals = [shifted_pulse_decomposition(du, self.comb, self.grid).residual for du in shifts]
        slope = np.polyfit(np.log(shifts), np.log(residuals), 1)[0]
        self.assertAlmostEqual(slope, 2.0, delta=0.1)

    def test_large_shift_warns(self):
        with self.assertLogs('sqz_timing.comb', 'WARNING'):
            shifted_pulse_decomposition(0.5 * self.spectral.u0, self.comb, self.grid)

    def test_shifted_pulse_norm(self):
        pulse = shifted_pulse(2 / self.spectral.domega, self.comb, self.grid)
        self.assertAlmostEqual(pulse.norm(), 1.0, places=9)


if __name__ == '__main__':
    unittest.main()
