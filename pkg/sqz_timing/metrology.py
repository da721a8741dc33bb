"""Analytic timing sensitivities.

Standard quantum limits for time-of-flight, phase and combined detection, the
shaped-LO homodyne mean and noise, and the minimum resolvable delay. Photon
numbers are effective (detection efficiency already folded in); with a 1 s
detection time the delays come out per √Hz. The homodyne proportionality
constants are fixed to 1 in both the mean and the noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import constants

from .comb import DerivedSpectral
from .utils import InvalidParameterError
from .utils import check_positive
from .utils import check_unit_interval

# Longitudinal PZT calibration at 2 MHz drive
PZT_LENGTH_COEFF = 4.96e-12  # m/V
PZT_DELAY_COEFF = 1.65e-20  # s/V


@dataclass(frozen=True)
class PhotonBudget:
    n_eff: float
    power: float
    detection_time: float
    eta_tot: float


@dataclass(frozen=True)
class HomodyneConfig:
    n_signal: float
    n_lo: float
    theta_s: float = 0.0
    theta_lo: float = 0.0

    def __post_init__(self):
        check_positive('n_signal', self.n_signal, allow_zero=True)
        check_positive('n_lo', self.n_lo)


@dataclass(frozen=True)
class TimingResult:
    """Outcome of a timing measurement.

    ``du_min`` is None when the modulation was not resolved (Σ = 0).
    """

    du_min: float | None
    sql_ref: float
    sigma: float
    squeezing_db_used: float
    du_min_analytic: float | None = None
    sigma_predicted: float | None = None
    improvement_db: float | None = None

    @property
    def resolved(self):
        return self.du_min is not None


def _check_photons(n):
    check_positive('photon number', n)


def sql_tof(n, domega):
    """Time-of-flight limit 1/(2Δω√N)"""
    _check_photons(n)
    check_positive('domega', domega)
    return 1 / (2 * domega * np.sqrt(n))


def sql_ph(n, omega0):
    """Carrier-phase limit 1/(2ω₀√N)"""
    _check_photons(n)
    check_positive('omega0', omega0)
    return 1 / (2 * omega0 * np.sqrt(n))


def sql_combined(n, omega0, domega):
    """Shaped-LO limit 1/(2√N·√(ω₀²+Δω²))"""
    _check_photons(n)
    check_positive('omega0', omega0, allow_zero=True)
    check_positive('domega', domega, allow_zero=True)
    bandwidth = np.hypot(omega0, domega)
    if np.any(bandwidth == 0):
        raise InvalidParameterError('omega0 and domega cannot both be zero')
    return 1 / (2 * np.sqrt(n) * bandwidth)


def effective_photons(power, lambda0, detection_time, eta_tot):
    """Detected photon number η_tot·P·T/(ħω₀)"""
    check_positive('power', power, allow_zero=True)
    check_positive('lambda0', lambda0)
    check_positive('detection_time', detection_time)
    check_unit_interval('eta_tot', eta_tot)
    photon_energy = constants.hbar * 2 * math.pi * constants.c / lambda0
    return PhotonBudget(
        n_eff=eta_tot * power * detection_time / photon_energy,
        power=power,
        detection_time=detection_time,
        eta_tot=eta_tot,
    )


def homodyne_mean(cfg: HomodyneConfig, delta_u, spectral: DerivedSpectral):
    """Mean difference photocurrent 2√(N_s N_LO)·(Δu/u₀·cos φ + α/√(α²+1)·sin φ), φ = θ_s - θ_LO"""
    phase = cfg.theta_s - cfg.theta_lo
    alpha = spectral.alpha
    shift = np.asarray(delta_u, dtype=float) / spectral.u0
    return (
        2
        * math.sqrt(cfg.n_signal * cfg.n_lo)
        * (shift * math.cos(phase) + alpha / math.sqrt(alpha**2 + 1) * math.sin(phase))
    )


def squeezing_mixture(var_p0, var_q1, alpha):
    """Noise of the timing-mode quadrature: (α²Δ²P̂₀ + Δ²Q̂₁)/(α²+1)"""
    return (alpha**2 * np.asarray(var_p0) + var_q1) / (alpha**2 + 1)


def homodyne_std(n_lo, alpha, var_p0, var_q1):
    check_positive('var_p0', var_p0)
    check_positive('var_q1', var_q1)
    return np.sqrt(n_lo * squeezing_mixture(var_p0, var_q1, alpha))


def min_detectable_du(n, spectral: DerivedSpectral, var_p0=1.0, var_q1=1.0):
    """Delay giving unit SNR: √(ω₀²Δ²P̂₀ + Δω²Δ²Q̂₁)/(2√N(ω₀²+Δω²))"""
    _check_photons(n)
    check_positive('var_p0', var_p0)
    check_positive('var_q1', var_q1)
    w2 = spectral.omega0**2
    d2 = spectral.domega**2
    return np.sqrt(w2 * np.asarray(var_p0) + d2 * np.asarray(var_q1)) / (2 * np.sqrt(n) * (w2 + d2))


def project_du_min(reference_du, var_p0, var_q1, alpha):
    """Scale a shot-noise-limited sensitivity by the squeezed timing-mode noise"""
    check_positive('reference_du', reference_du)
    check_positive('var_p0', var_p0)
    check_positive('var_q1', var_q1)
    return reference_du * np.sqrt(squeezing_mixture(var_p0, var_q1, alpha))


def pzt_to_delay(volts, coeff=PZT_DELAY_COEFF):
    check_positive('coeff', coeff)
    return volts * coeff


def length_to_delay(dx):
    """Single-pass path change Δx expressed as Δx/c"""
    return dx / constants.c


def snr_to_sa_improvement(sigma):
    """Rise of the analyzer trace when a tone of amplitude SNR Σ sits on the noise: 10·log₁₀(1+Σ²)"""
    check_positive('sigma', sigma, allow_zero=True)
    return 10 * np.log10(1 + np.square(sigma))


def sa_improvement_to_snr(improvement_db):
    if np.any(np.asarray(improvement_db) < 0):
        raise InvalidParameterError(f'analyzer improvement must be non-negative, got {improvement_db!r} dB')
    return np.sqrt(np.power(10.0, np.asarray(improvement_db) / 10) - 1)


def du_min_from_experiment(applied_du, sigma, rbw):
    """Per-√Hz minimum delay from an applied modulation seen with SNR Σ at resolution bandwidth ``rbw``"""
    check_positive('applied_du', applied_du)
    check_positive('sigma', sigma)
    check_positive('rbw', rbw)
    return applied_du / (sigma * np.sqrt(rbw))


def predicted_sigma(applied_du, du_min, rbw):
    """SNR Σ expected for ``applied_du`` given a per-√Hz sensitivity ``du_min``"""
    check_positive('applied_du', applied_du, allow_zero=True)
    check_positive('du_min', du_min)
    check_positive('rbw', rbw)
    return applied_du / (du_min * np.sqrt(rbw))
