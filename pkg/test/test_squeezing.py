#!/usr/bin/env python
from __future__ import annotations

# Allow direct execution
import os
import sys
import unittest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import math

import numpy as np

from sqz_timing.squeezing import DetectionChain
from sqz_timing.squeezing import QuadraturePair
from sqz_timing.squeezing import db_to_variance
from sqz_timing.squeezing import decay_rate_from_finesse
from sqz_timing.squeezing import pump_rate
from sqz_timing.squeezing import quadrature_spectrum
from sqz_timing.squeezing import quadrature_variances
from sqz_timing.squeezing import rotated_variance
from sqz_timing.squeezing import squeezing_to_variance
from sqz_timing.squeezing import theory_phase_curve
from sqz_timing.squeezing import variance_to_db
from sqz_timing.utils import AboveThresholdError
from sqz_timing.utils import InvalidParameterError
from test.helper import reference_chain
from test.helper import reference_spopo


class TestPumpAndCavity(unittest.TestCase):
    def test_pump_rate(self):
        self.assertEqual(pump_rate(0, 55e-3), 0.0)
        self.assertAlmostEqual(pump_rate(27e-3, 55e-3), 0.700649, places=6)
        self.assertAlmostEqual(pump_rate(55e-3 / 4, 55e-3), 0.5, places=12)

    def test_pump_above_threshold(self):
        for power in (55e-3, 60e-3):
            with self.assertRaises(AboveThresholdError) as cm:
                pump_rate(power, 55e-3)
            self.assertEqual(cm.exception.threshold, 55e-3)

    def test_decay_rate(self):
        self.assertAlmostEqual(decay_rate_from_finesse(75e6, 24) / 9.8175e6, 1, places=4)
        with self.assertRaises(InvalidParameterError):
            decay_rate_from_finesse(75e6, 0)

    def test_spopo_validation(self):
        with self.assertRaises(AboveThresholdError):
            reference_spopo(r=1.0)
        with self.assertRaises(AboveThresholdError):
            reference_spopo(r=1.2)
        with self.assertRaises(InvalidParameterError):
            reference_spopo(r=-0.1)
        with self.assertRaises(InvalidParameterError):
            reference_spopo(lambda_ratios=(0.9, 0.5))
        with self.assertRaises(InvalidParameterError):
            reference_spopo(lambda_ratios=(1.0, 1.5))
        self.assertEqual(reference_spopo(r=1.0, allow_threshold=True).r, 1.0)

    def test_eta_tot(self):
        self.assertAlmostEqual(DetectionChain(0.93, 0.98, 0.89).eta_tot(), 0.7219, places=4)
        self.assertEqual(reference_chain(0.68).eta_tot(), 0.68)
        with self.assertRaises(InvalidParameterError):
            DetectionChain(1.1, 0.98, 0.89)


class TestQuadratureVariances(unittest.TestCase):
    def setUp(self):
        self.chain = DetectionChain(0.93, 0.98, 0.89)
        self.spopo = reference_spopo()

    def test_no_pump_is_vacuum(self):
        pair = quadrature_variances(0, 2 * math.pi * 1e6, reference_spopo(r=0.0), self.chain)
        self.assertEqual((pair.var_p, pair.var_q), (1.0, 1.0))

    def test_threshold_limit(self):
        spopo = reference_spopo(r=1.0, lambda_ratios=(1.0,), allow_threshold=True)
        pair = quadrature_variances(0, 0.0, spopo, self.chain)
        self.assertAlmostEqual(pair.var_p, 1 - spopo.zeta * self.chain.eta_tot(), places=12)

    def test_high_frequency_is_vacuum(self):
        omega = 100 * self.spopo.gamma_s * (1 + self.spopo.r)
        pair = quadrature_variances(0, omega, self.spopo, self.chain)
        bound = 1e-3 * self.spopo.zeta * self.chain.eta_tot()
        self.assertLess(abs(pair.var_p - 1), bound)
        self.assertLess(abs(pair.var_q - 1), bound)

    def test_measured_operating_point(self):
        pair = quadrature_variances(0, 2 * math.pi * 1e6, self.spopo, self.chain)
        self.assertAlmostEqual(variance_to_db(pair.var_p), -3.0, delta=0.1)
        self.assertTrue(6.0 < variance_to_db(pair.var_q) < 6.6)
        self.assertLess(pair.var_p * pair.var_q, 2.5)
        self.assertGreater(pair.var_p * pair.var_q, 1.0)
        self.assertFalse(pair.swapped)

    def test_spectrum_monotone(self):
        omegas = np.logspace(4, 9, 60)
        var_p, var_q = quadrature_spectrum(0, omegas, self.spopo, self.chain)
        self.assertTrue(np.all(np.diff(var_p) > 0))
        self.assertTrue(np.all(np.diff(var_q) < 0))
        self.assertTrue(np.all(var_p < 1))
        self.assertTrue(np.all(var_q > 1))

    def test_spectrum_matches_scalar(self):
        omegas = np.array([0.0, 1e6, 1e7])
        var_p, var_q = quadrature_spectrum(2, omegas, self.spopo, self.chain)
        for i, omega in enumerate(omegas):
            pair = quadrature_variances(2, omega, self.spopo, self.chain)
            self.assertAlmostEqual(pair.var_p, var_p[i], places=14)
            self.assertAlmostEqual(pair.var_q, var_q[i], places=14)

    def test_efficiency_degrades_squeezing(self):
        worse = DetectionChain(0.5, 0.98, 0.89)
        good = quadrature_variances(0, 1e6, self.spopo, self.chain)
        bad = quadrature_variances(0, 1e6, self.spopo, worse)
        self.assertGreater(bad.var_p, good.var_p)
        self.assertLess(bad.var_q, good.var_q)

    def test_negative_ratio_swaps(self):
        pair = quadrature_variances(1, 1e6, self.spopo, self.chain)
        self.assertTrue(pair.swapped)
        self.assertGreater(pair.var_p, 1)
        self.assertLess(pair.var_q, 1)

    def test_mode_out_of_range(self):
        for k in (-1, 4, 10):
            with self.assertRaises(InvalidParameterError):
                quadrature_variances(k, 1e6, self.spopo, self.chain)

    def test_negative_frequency(self):
        with self.assertRaises(InvalidParameterError):
            quadrature_variances(0, -1.0, self.spopo, self.chain)


class TestDecibels(unittest.TestCase):
    def test_conversions(self):
        self.assertAlmostEqual(db_to_variance(-1.5), 0.707946, places=6)
        self.assertAlmostEqual(squeezing_to_variance(1.5), 0.707946, places=6)
        self.assertEqual(variance_to_db(1.0), 0.0)
        self.assertAlmostEqual(variance_to_db(db_to_variance(6.3)), 6.3, places=12)
        np.testing.assert_allclose(db_to_variance(np.array([0.0, 10.0])), [1.0, 10.0])

    def test_non_positive_variance(self):
        for v in (0.0, -1.0):
            with self.assertRaises(InvalidParameterError):
                variance_to_db(v)

    def test_from_db(self):
        pair = QuadraturePair.from_db(3.0, 6.0)
        self.assertAlmostEqual(pair.var_p, 0.501187, places=6)
        self.assertAlmostEqual(pair.var_q, 3.981072, places=6)


class TestRotatedVariance(unittest.TestCase):
    def test_quadratures(self):
        pair = QuadraturePair(var_p=0.5, var_q=4.0)
        self.assertAlmostEqual(rotated_variance(0.0, pair), 4.0)
        self.assertAlmostEqual(rotated_variance(math.pi / 2, pair), 0.5)
        self.assertAlmostEqual(rotated_variance(math.pi / 4, pair), 2.25)

    def test_curve_periodic_and_bounded(self):
        pair = QuadraturePair(var_p=0.5, var_q=4.0)
        thetas = np.linspace(0, 2 * math.pi, 101)
        curve = theory_phase_curve(thetas, pair)
        np.testing.assert_allclose(curve, theory_phase_curve(thetas + math.pi, pair), atol=1e-12)
        self.assertTrue(np.all(curve >= 0.5 - 1e-12))
        self.assertTrue(np.all(curve <= 4.0 + 1e-12))


if __name__ == '__main__':
    unittest.main()
