"""Below-threshold SPOPO quadrature noise.

All variances are normalized to shot noise (vacuum = 1). Squeezing quoted as
a positive number of dB maps to a variance of 10^(-dB/10).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .utils import AboveThresholdError
from .utils import InvalidParameterError
from .utils import check_positive
from .utils import check_unit_interval

logger = logging.getLogger(__name__)

# Placeholder eigenvalue ratios Λ_k/Λ₀ for k = 0..3, not derived from a
# phase-matching calculation. Supply measured ratios where available.
DEFAULT_LAMBDA_RATIOS = (1.0, -0.7, 0.5, -0.35)
DEFAULT_FINESSE = 24.0


@dataclass(frozen=True)
class SpopoParams:
    """Escape efficiency ``zeta``, signal decay rate ``gamma_s`` (rad/s),
    pump rate ``r`` = √(P/P_thr) and eigenvalue ratios Λ_k/Λ₀.

    ``allow_threshold`` admits r = 1, where the model is only meaningful as
    an algebraic limit.
    """

    zeta: float
    gamma_s: float
    r: float
    lambda_ratios: tuple = DEFAULT_LAMBDA_RATIOS
    allow_threshold: bool = False

    def __post_init__(self):
        check_unit_interval('zeta', self.zeta)
        check_positive('gamma_s', self.gamma_s)
        if not math.isfinite(self.r) or self.r < 0:
            raise InvalidParameterError(f'pump rate must be non-negative, got {self.r!r}')
        if self.r > 1 or (self.r == 1 and not self.allow_threshold):
            # r² = P/P_thr
            raise AboveThresholdError(self.r**2, 1.0)
        ratios = tuple(float(x) for x in self.lambda_ratios)
        if not ratios or ratios[0] != 1.0:
            raise InvalidParameterError(f'lambda_ratios must start with Λ0/Λ0 = 1, got {ratios!r}')
        if any(not math.isfinite(x) or abs(x) > 1 for x in ratios):
            raise InvalidParameterError(f'|Λk/Λ0| must not exceed 1, got {ratios!r}')
        object.__setattr__(self, 'lambda_ratios', ratios)

    @property
    def n_modes(self):
        return len(self.lambda_ratios)


@dataclass(frozen=True)
class DetectionChain:
    """Photodiode efficiency ``rho``, propagation efficiency ``eta``, visibility ``xi``.

    ``eta_tot_override`` replaces ρηξ² when an independently measured total
    efficiency is known.
    """

    rho: float
    eta: float
    xi: float
    eta_tot_override: float | None = None

    def __post_init__(self):
        check_unit_interval('rho', self.rho)
        check_unit_interval('eta', self.eta)
        check_unit_interval('xi', self.xi)
        if self.eta_tot_override is not None:
            check_unit_interval('eta_tot_override', self.eta_tot_override)

    def eta_tot(self):
        if self.eta_tot_override is not None:
            return self.eta_tot_override
        return self.rho * self.eta * self.xi**2


@dataclass(frozen=True)
class QuadraturePair:
    """Phase (``var_p``) and amplitude (``var_q``) quadrature variances of supermode ``k`` at Ω = ``omega``.

    ``swapped`` is set when a negative eigenvalue ratio moved the squeezing
    to the amplitude quadrature.
    """

    var_p: float
    var_q: float
    omega: float = 0.0
    k: int = 0
    swapped: bool = False

    def __post_init__(self):
        check_positive('var_p', self.var_p)
        if not self.var_q > 0:
            raise InvalidParameterError(f'var_q must be positive, got {self.var_q!r}')

    @classmethod
    def from_db(cls, squeezing_db, antisqueezing_db, **kwargs):
        """Pair with ``squeezing_db`` below and ``antisqueezing_db`` above shot noise"""
        return cls(var_p=squeezing_to_variance(squeezing_db), var_q=db_to_variance(antisqueezing_db), **kwargs)


def pump_rate(power: float, threshold: float) -> float:
    """Normalized amplitude pump rate r = √(P/P_thr)"""
    check_positive('threshold', threshold)
    check_positive('power', power, allow_zero=True)
    if power >= threshold:
        raise AboveThresholdError(power, threshold)
    return math.sqrt(power / threshold)


def decay_rate_from_finesse(rep_rate: float, finesse: float = DEFAULT_FINESSE) -> float:
    """Cavity half-linewidth γ_s = π·FSR/F (rad/s), with the free spectral range equal to the repetition rate"""
    check_positive('rep_rate', rep_rate)
    check_positive('finesse', finesse)
    return math.pi * rep_rate / finesse


def _mode_rate(k, spopo):
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or not 0 <= k < spopo.n_modes:
        raise InvalidParameterError(f'supermode index {k!r} outside the {spopo.n_modes} known eigenvalue ratios')
    ratio = spopo.lambda_ratios[k]
    return spopo.r * abs(ratio), ratio < 0


def _variances(rho_k, omega, spopo, chain):
    g2 = spopo.gamma_s**2
    omega2 = np.square(omega)
    gain = spopo.zeta * chain.eta_tot() * g2 * ((1 + rho_k) ** 2 - (1 - rho_k) ** 2)
    with np.errstate(divide='ignore'):
        var_p = 1 - gain / (g2 * (1 + rho_k) ** 2 + omega2)
        var_q = 1 + gain / (g2 * (1 - rho_k) ** 2 + omega2)
    return var_p, var_q


def quadrature_variances(k: int, omega: float, spopo: SpopoParams, chain: DetectionChain) -> QuadraturePair:
    """Phase and amplitude quadrature variances of supermode ``k`` at analysis frequency ``omega`` (rad/s)"""
    check_positive('omega', omega, allow_zero=True)
    rho_k, swapped = _mode_rate(k, spopo)
    var_p, var_q = (float(v) for v in _variances(rho_k, omega, spopo, chain))
    if swapped:
        var_p, var_q = var_q, var_p
    return QuadraturePair(var_p=var_p, var_q=var_q, omega=float(omega), k=int(k), swapped=swapped)


def quadrature_spectrum(k, omegas, spopo, chain):
    """Vectorized :func:`quadrature_variances` over an array of analysis frequencies"""
    omegas = np.asarray(omegas, dtype=float)
    check_positive('omegas', omegas, allow_zero=True)
    rho_k, swapped = _mode_rate(k, spopo)
    var_p, var_q = _variances(rho_k, omegas, spopo, chain)
    var_p = np.broadcast_to(var_p, omegas.shape).copy()
    var_q = np.broadcast_to(var_q, omegas.shape).copy()
    return (var_q, var_p) if swapped else (var_p, var_q)


def variance_to_db(v):
    if np.any(np.asarray(v) <= 0):
        raise InvalidParameterError(f'variance must be positive to express in dB, got {v!r}')
    return 10 * np.log10(v)


def db_to_variance(d):
    v = np.power(10.0, np.asarray(d, dtype=float) / 10)
    return float(v) if v.ndim == 0 else v


def squeezing_to_variance(squeezing_db):
    """Variance for a positive "dB of squeezing" figure"""
    return db_to_variance(-np.asarray(squeezing_db, dtype=float))


def rotated_variance(theta, pair: QuadraturePair):
    """Variance of the quadrature at LO phase ``theta``: var_q·cos²θ + var_p·sin²θ"""
    return pair.var_q * np.cos(theta) ** 2 + pair.var_p * np.sin(theta) ** 2


def theory_phase_curve(thetas, pair: QuadraturePair):
    return rotated_variance(np.asarray(thetas, dtype=float), pair)
