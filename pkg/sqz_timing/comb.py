"""Frequency-comb pulse model.

Supermodes are Hermite-Gauss functions of the delay u,

    v_k(u) ∝ H_k(uΔω/√2) exp(-(uΔω)²/4),

sampled as complex envelopes on a uniform grid. The optical carrier is kept
as a phase (``ModeFunction.carrier``) rather than sampled; it is folded into
the samples only on request (:func:`materialize_carrier`). The carrier is
exp(-iω₀u), so delaying a pulse by Δu multiplies its envelope by exp(+iω₀Δu).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from dataclasses import field

import numpy as np
from scipy import constants
from scipy.integrate import trapezoid
from scipy.special import eval_hermite

from .utils import GridMismatchError
from .utils import InvalidParameterError
from .utils import ResolutionError
from .utils import check_positive

logger = logging.getLogger(__name__)

FWHM_TO_DOMEGA = 2 * math.sqrt(2 * math.log(2))
MIN_SPAN = 6.0
DEFAULT_SPAN = 12.0
DEFAULT_SAMPLES = 4096
# Shifts with |Δu|/u₀ above this are outside the first-order regime
LINEAR_REGIME_LIMIT = 0.1


@dataclass(frozen=True)
class CombParams:
    lambda0: float
    dt_fwhm: float
    rep_rate: float
    power: float = 0.0

    def __post_init__(self):
        check_positive('lambda0', self.lambda0)
        check_positive('dt_fwhm', self.dt_fwhm)
        check_positive('rep_rate', self.rep_rate)
        check_positive('power', self.power, allow_zero=True)


@dataclass(frozen=True)
class DerivedSpectral:
    omega0: float
    domega: float
    alpha: float
    u0: float


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling grid: ``n`` points starting at ``start`` with spacing ``step`` (s)"""

    start: float
    step: float
    n: int

    def __post_init__(self):
        check_positive('step', self.step)
        if self.n < 2:
            raise InvalidParameterError(f'a time grid needs at least 2 samples, got {self.n}')

    @classmethod
    def symmetric(cls, half_width, n=DEFAULT_SAMPLES):
        check_positive('half_width', half_width)
        return cls(-half_width, 2 * half_width / (n - 1), n)

    @property
    def stop(self):
        return self.start + (self.n - 1) * self.step

    @property
    def times(self):
        return self.start + self.step * np.arange(self.n)

    def matches(self, other):
        return (
            self.n == other.n
            and math.isclose(self.start, other.start, rel_tol=1e-12, abs_tol=1e-12 * self.step)
            and math.isclose(self.step, other.step, rel_tol=1e-12)
        )


@dataclass(frozen=True)
class ModeFunction:
    """A temporal mode sampled on ``grid``.

    ``samples`` hold the complex envelope; the full field is
    samples·exp(-i·carrier·u). ``k`` is the supermode index, or None for
    combinations such as the timing mode.
    """

    k: int | None
    grid: TimeGrid
    samples: np.ndarray = field(repr=False)
    carrier: float = 0.0
    name: str = ''

    def __post_init__(self):
        self.samples.setflags(write=False)

    def norm(self):
        return math.sqrt(inner_product(self, self).real)


@dataclass(frozen=True)
class ShiftDecomposition:
    c0: complex
    c_w: complex
    residual: float


def derive_spectral(comb: CombParams) -> DerivedSpectral:
    """Carrier and spectral width of the comb, plus α = ω₀/Δω and u₀ = 1/√(ω₀²+Δω²)"""
    omega0 = 2 * math.pi * constants.c / comb.lambda0
    domega = FWHM_TO_DOMEGA / comb.dt_fwhm
    if omega0 <= domega:
        logger.warning(
            'carrier %.4e rad/s does not exceed the spectral width %.4e rad/s; '
            'the narrow-band comb model is outside its regime',
            omega0,
            domega,
        )
    return DerivedSpectral(
        omega0=omega0,
        domega=domega,
        alpha=omega0 / domega,
        u0=1 / math.hypot(omega0, domega),
    )


def default_grid(comb: CombParams, span=DEFAULT_SPAN, n=DEFAULT_SAMPLES) -> TimeGrid:
    """Symmetric grid of ``n`` samples over ±span/Δω"""
    return TimeGrid.symmetric(span / derive_spectral(comb).domega, n)


def _envelope(k, u, domega):
    return eval_hermite(k, u * domega / math.sqrt(2)) * np.exp(-((u * domega) ** 2) / 4)


def _l2_norm(samples, step):
    return math.sqrt(trapezoid(np.abs(samples) ** 2, dx=step))


def _check_span(grid, domega):
    need = MIN_SPAN / domega
    if grid.start > -need or grid.stop < need:
        raise InvalidParameterError(
            f'time grid [{grid.start:.3e}, {grid.stop:.3e}] s does not span ±{MIN_SPAN:g}/Δω = ±{need:.3e} s'
        )


def supermode(k: int, comb: CombParams, grid: TimeGrid) -> ModeFunction:
    """Supermode v_k, renormalized on ``grid`` to unit L² norm"""
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 0:
        raise InvalidParameterError(f'supermode index must be a non-negative integer, got {k!r}')
    spectral = derive_spectral(comb)
    _check_span(grid, spectral.domega)
    env = _envelope(int(k), grid.times, spectral.domega).astype(complex)
    env /= _l2_norm(env, grid.step)
    return ModeFunction(k=int(k), grid=grid, samples=env, carrier=spectral.omega0, name=f'v{k}')


def materialize_carrier(mode: ModeFunction) -> ModeFunction:
    """Fold the carrier phase into the samples.

    The grid must sample the carrier above Nyquist (step·ω₀ < π).
    """
    if mode.carrier == 0:
        return mode
    if mode.grid.step * abs(mode.carrier) >= math.pi:
        raise ResolutionError(
            f'grid step {mode.grid.step:.3e} s cannot resolve a {mode.carrier:.4e} rad/s carrier '
            f'(needs < {math.pi / abs(mode.carrier):.3e} s)'
        )
    samples = mode.samples * np.exp(-1j * mode.carrier * mode.grid.times)
    return ModeFunction(k=mode.k, grid=mode.grid, samples=samples, carrier=0.0, name=mode.name)


def inner_product(f: ModeFunction, g: ModeFunction) -> complex:
    """⟨f|g⟩ by trapezoidal quadrature of conj(f)·g"""
    if not f.grid.matches(g.grid):
        raise GridMismatchError(f'modes {f.name or f.k} and {g.name or g.k} are sampled on different grids')
    if not math.isclose(f.carrier, g.carrier, rel_tol=1e-12, abs_tol=0.0):
        raise GridMismatchError(
            f'modes {f.name or f.k} and {g.name or g.k} carry different carriers; materialize them first'
        )
    return complex(trapezoid(np.conj(f.samples) * g.samples, dx=f.grid.step))


def timing_mode(comb: CombParams, grid: TimeGrid) -> ModeFunction:
    """w₁ = (iα v₀ + v₁)/√(α²+1)"""
    alpha = derive_spectral(comb).alpha
    v0 = supermode(0, comb, grid)
    v1 = supermode(1, comb, grid)
    samples = (1j * alpha * v0.samples + v1.samples) / math.sqrt(alpha**2 + 1)
    return ModeFunction(k=None, grid=grid, samples=samples, carrier=v0.carrier, name='w1')


def shifted_pulse(delta_u: float, comb: CombParams, grid: TimeGrid) -> ModeFunction:
    """v₀(u-Δu) with the carrier phase applied analytically"""
    spectral = derive_spectral(comb)
    _check_span(grid, spectral.domega)
    u = grid.times
    scale = _l2_norm(_envelope(0, u, spectral.domega), grid.step)
    samples = _envelope(0, u - delta_u, spectral.domega) / scale * np.exp(1j * spectral.omega0 * delta_u)
    return ModeFunction(k=None, grid=grid, samples=samples, carrier=spectral.omega0, name='v0(u-du)')


def shifted_pulse_decomposition(delta_u: float, comb: CombParams, grid: TimeGrid) -> ShiftDecomposition:
    """Decompose the delayed pulse on {v₀, w₁}.

    c0 is ⟨v₀|s⟩; c_w is what a w₁-shaped local oscillator sees on top of the
    undelayed pulse, ⟨w₁|s⟩ - ⟨w₁|v₀⟩, and tends to Δu/u₀; residual is the
    norm of the part of s outside span{v₀, w₁}.
    """
    spectral = derive_spectral(comb)
    if abs(delta_u) / spectral.u0 > LINEAR_REGIME_LIMIT:
        logger.warning(
            'shift %.3e s is %.2f u0; the first-order timing-mode expansion is not accurate there',
            delta_u,
            abs(delta_u) / spectral.u0,
        )
    v0 = supermode(0, comb, grid)
    w1 = timing_mode(comb, grid)
    s = shifted_pulse(delta_u, comb, grid)

    c0 = inner_product(v0, s)
    c_w = inner_product(w1, s) - inner_product(w1, v0)

    # Gram-Schmidt on {v0, w1}
    e2 = w1.samples - inner_product(v0, w1) * v0.samples
    e2 /= _l2_norm(e2, grid.step)
    e2_mode = ModeFunction(k=None, grid=grid, samples=e2, carrier=v0.carrier)
    rest = s.samples - c0 * v0.samples - inner_product(e2_mode, s) * e2
    return ShiftDecomposition(c0=c0, c_w=c_w, residual=_l2_norm(rest, grid.step))


def mode_overlap_matrix(k_max: int, comb: CombParams, grid: TimeGrid) -> np.ndarray:
    """Gram matrix ⟨v_j|v_k⟩ for j, k ≤ k_max"""
    modes = [supermode(k, comb, grid) for k in range(k_max + 1)]
    return np.array([[inner_product(a, b) for b in modes] for a in modes])
