"""Monte-Carlo homodyne timing experiment.

The difference photocurrent is synthesized in shot-noise units: white
Gaussian noise whose variance is the timing-mode quadrature noise, plus the
delay modulation as a sine. The tone amplitude is scaled so that the
analyzer's single-bin SNR equals Σ = Δu/((Δu)_min·√RBW), the per-√Hz
convention used to quote the measured sensitivity.

Random numbers come from numpy's Philox counter-based generator, one stream
per run, seeded with a 64-bit integer.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import signal

from .comb import CombParams
from .comb import derive_spectral
from .metrology import TimingResult
from .metrology import du_min_from_experiment
from .metrology import effective_photons
from .metrology import min_detectable_du
from .metrology import predicted_sigma as _predicted_sigma
from .metrology import snr_to_sa_improvement
from .metrology import sql_combined
from .metrology import squeezing_mixture
from .squeezing import DetectionChain
from .squeezing import QuadraturePair
from .squeezing import db_to_variance
from .squeezing import quadrature_variances
from .squeezing import rotated_variance
from .squeezing import squeezing_to_variance
from .squeezing import variance_to_db
from .utils import InsufficientSamplesError
from .utils import InvalidParameterError
from .utils import NumericalError
from .utils import NyquistError
from .utils import check_positive

logger = logging.getLogger(__name__)

RNG_ALGORITHM = 'Philox'
DEFAULT_SAMPLE_RATE = 10e6
DEFAULT_DURATION = 0.1
DEFAULT_N_AVERAGES = None
# Bins on each side of the tone left out of the floor estimate
GUARD_BINS = 2


def make_rng(seed):
    return np.random.Generator(np.random.Philox(int(seed)))


def spawn_seeds(seed, n):
    """``n`` independent 64-bit seeds derived from ``seed``; element i depends only on (seed, i)"""
    return [
        int(np.random.SeedSequence(int(seed), spawn_key=(i,)).generate_state(1, dtype=np.uint64)[0]) for i in range(n)
    ]


@dataclass(frozen=True)
class NoiseState:
    """Quadrature noise of the signal: Δ²P̂₀ and Δ²Q̂₁ (1 = shot noise)"""

    var_p0: float = 1.0
    var_q1: float = 1.0

    def __post_init__(self):
        check_positive('var_p0', self.var_p0)
        check_positive('var_q1', self.var_q1)

    @classmethod
    def coherent(cls):
        return cls()

    @classmethod
    def squeezed(cls, var_p0, var_q1=1.0):
        return cls(var_p0=var_p0, var_q1=var_q1)

    @property
    def kind(self):
        return 'coherent' if self.var_p0 == 1 and self.var_q1 == 1 else 'squeezed'


@dataclass(frozen=True)
class Modulation:
    frequency: float
    applied_du: float

    def __post_init__(self):
        check_positive('modulation frequency', self.frequency)
        check_positive('applied_du', self.applied_du, allow_zero=True)


@dataclass(frozen=True)
class AnalyzerSettings:
    """Resolution bandwidth (Hz) and number of averaged segments; None averages every available segment"""

    rbw: float
    n_averages: int | None = DEFAULT_N_AVERAGES

    def __post_init__(self):
        check_positive('rbw', self.rbw)
        if self.n_averages is not None and self.n_averages < 1:
            raise InvalidParameterError(f'n_averages must be at least 1, got {self.n_averages!r}')


@dataclass(frozen=True)
class ExperimentScenario:
    comb: CombParams
    chain: DetectionChain
    state: NoiseState
    modulation: Modulation
    analyzer: AnalyzerSettings
    sample_rate: float = DEFAULT_SAMPLE_RATE
    duration: float = DEFAULT_DURATION
    rng_seed: int = 0

    def __post_init__(self):
        check_positive('sample_rate', self.sample_rate)
        check_positive('duration', self.duration)
        if not 0 <= self.rng_seed < 2**64:
            raise InvalidParameterError(f'rng_seed must be an unsigned 64-bit integer, got {self.rng_seed!r}')
        if self.sample_rate <= 2 * self.modulation.frequency:
            raise NyquistError(
                f'sample rate {self.sample_rate:g} Hz does not exceed twice the modulation '
                f'frequency {self.modulation.frequency:g} Hz'
            )
        segment = self.sample_rate / self.analyzer.rbw
        if abs(segment - round(segment)) > 1e-9 * segment or round(segment) < 2:
            raise InvalidParameterError(
                f'sample rate / rbw must be an integer segment length, got {segment:g} samples'
            )
        if self.n_segments < 1:
            raise InvalidParameterError('duration is shorter than one analyzer segment')
        if self.analyzer.n_averages is not None and self.n_segments < self.analyzer.n_averages:
            raise InvalidParameterError(
                f'duration·rbw = {self.n_segments} segments, fewer than the {self.analyzer.n_averages} '
                'requested averages'
            )
        tone_bin = self.modulation.frequency / self.analyzer.rbw
        if abs(tone_bin - round(tone_bin)) > 1e-9 * max(tone_bin, 1):
            logger.warning(
                'modulation %.6g Hz is not a multiple of the rbw %.6g Hz; the tone will leak into '
                'neighbouring bins',
                self.modulation.frequency,
                self.analyzer.rbw,
            )

    @property
    def n_samples(self):
        return int(round(self.duration * self.sample_rate))

    @property
    def segment_length(self):
        return int(round(self.sample_rate / self.analyzer.rbw))

    @property
    def n_segments(self):
        return self.n_samples // self.segment_length

    @property
    def n_averages(self):
        return self.analyzer.n_averages if self.analyzer.n_averages is not None else self.n_segments

    def with_seed(self, seed):
        return ExperimentScenario(
            comb=self.comb,
            chain=self.chain,
            state=self.state,
            modulation=self.modulation,
            analyzer=self.analyzer,
            sample_rate=self.sample_rate,
            duration=self.duration,
            rng_seed=seed,
        )

    def photons_per_second(self):
        return effective_photons(self.comb.power, self.comb.lambda0, 1.0, self.chain.eta_tot()).n_eff

    def noise_variance(self):
        alpha = derive_spectral(self.comb).alpha
        return float(squeezing_mixture(self.state.var_p0, self.state.var_q1, alpha))

    def tone_amplitude(self):
        """Sine amplitude of the delay modulation in shot-noise units per sample"""
        if self.modulation.applied_du == 0:
            return 0.0
        spectral = derive_spectral(self.comb)
        sql = sql_combined(self.photons_per_second(), spectral.omega0, spectral.domega)
        return float(2 * self.modulation.applied_du / (sql * math.sqrt(self.sample_rate)))


@dataclass(frozen=True)
class Trace:
    samples: np.ndarray
    sample_rate: float

    @property
    def times(self):
        return np.arange(len(self.samples)) / self.sample_rate


@dataclass(frozen=True)
class SpectrumTrace:
    frequencies: np.ndarray
    power: np.ndarray
    rbw: float
    n_averages: int


@dataclass(frozen=True)
class PhaseScan:
    """Sawtooth ramp of the LO phase: ``periods`` ramps from 0 to ``span`` over ``n_points`` points"""

    n_points: int = 400
    periods: float = 2.0
    span: float = 2 * math.pi
    draws_per_point: int = 50000
    sweep_time: float = 1.0

    def __post_init__(self):
        if self.n_points < 2:
            raise InvalidParameterError(f'a phase scan needs at least 2 points, got {self.n_points}')
        if self.draws_per_point < 2:
            raise InvalidParameterError(f'draws_per_point must be at least 2, got {self.draws_per_point}')
        check_positive('periods', self.periods)
        check_positive('span', self.span)
        check_positive('sweep_time', self.sweep_time)

    def phases(self):
        ramp = np.arange(self.n_points) * self.periods / self.n_points
        return self.span * (ramp - np.floor(ramp))

    def times(self):
        return np.arange(self.n_points) * self.sweep_time / self.n_points


@dataclass(frozen=True)
class PhaseScanTrace:
    times: np.ndarray
    phases: np.ndarray
    variance: np.ndarray
    theory: np.ndarray

    @property
    def variance_db(self):
        return variance_to_db(self.variance)

    @property
    def theory_db(self):
        return variance_to_db(self.theory)


def synthesize_trace(scenario: ExperimentScenario) -> Trace:
    """Difference photocurrent d(tᵢ) = A·sin(2πf tᵢ) + nᵢ in shot-noise units"""
    n = scenario.n_samples
    t = np.arange(n) / scenario.sample_rate
    rng = make_rng(scenario.rng_seed)
    samples = rng.standard_normal(n)
    samples *= math.sqrt(scenario.noise_variance())
    amplitude = scenario.tone_amplitude()
    if amplitude:
        samples += amplitude * np.sin(2 * math.pi * scenario.modulation.frequency * t)
    return Trace(samples=samples, sample_rate=scenario.sample_rate)


def spectrum(trace: Trace, rbw: float, n_averages: int | None = None) -> SpectrumTrace:
    """Averaged rectangular-window periodogram, one segment of sample_rate/rbw samples per average.

    Bin power is |X_k|²/L, so white noise of unit variance has a floor of 1
    and a bin-aligned sine of amplitude A has a peak of A²L/4.
    """
    check_positive('rbw', rbw)
    segment = int(round(trace.sample_rate / rbw))
    if segment < 2:
        raise InvalidParameterError(f'rbw {rbw:g} Hz is too wide for sample rate {trace.sample_rate:g} Hz')
    available = len(trace.samples) // segment
    if n_averages is None:
        n_averages = available
    needed = n_averages * segment
    if n_averages < 1 or needed > len(trace.samples):
        raise InsufficientSamplesError(max(needed, segment), len(trace.samples))

    frequencies, power = signal.welch(
        trace.samples[:needed],
        fs=trace.sample_rate,
        window='boxcar',
        nperseg=segment,
        noverlap=0,
        detrend=False,
        return_onesided=True,
        scaling='spectrum',
    )
    power = power * segment / 2
    # one-sided scaling doubles every bin except DC and (even length) Nyquist
    power[0] *= 2
    if segment % 2 == 0:
        power[-1] *= 2
    return SpectrumTrace(frequencies=frequencies, power=power, rbw=trace.sample_rate / segment, n_averages=n_averages)


def _tone_bin(spec, f_mod):
    index = int(round(f_mod / spec.rbw))
    if not 0 < index < len(spec.frequencies) - 1:
        raise InvalidParameterError(
            f'modulation frequency {f_mod:g} Hz lies outside the analyzed band (0, {spec.frequencies[-1]:g}) Hz'
        )
    return index


def noise_floor(spec: SpectrumTrace, f_mod: float, guard=GUARD_BINS) -> float:
    """Mean power over the analyzed band, excluding DC, Nyquist and the bins around the tone"""
    index = _tone_bin(spec, f_mod)
    mask = np.ones(len(spec.power), dtype=bool)
    mask[0] = mask[-1] = False
    mask[max(index - guard, 0) : index + guard + 1] = False
    if not mask.any():
        raise InsufficientSamplesError(GUARD_BINS * 2 + 4, len(spec.power))
    return float(np.mean(spec.power[mask]))


def estimate_sigma(spec: SpectrumTrace, f_mod: float) -> float:
    """Amplitude SNR Σ = √(P(f_mod)/P_floor - 1), clamped at 0"""
    peak = float(spec.power[_tone_bin(spec, f_mod)])
    floor = noise_floor(spec, f_mod)
    if floor <= 0:
        return 0.0
    return math.sqrt(max(peak / floor - 1, 0.0))


def measure_spectrum(scenario: ExperimentScenario) -> SpectrumTrace:
    return spectrum(synthesize_trace(scenario), scenario.analyzer.rbw, scenario.n_averages)


def analytic_du_min(scenario: ExperimentScenario) -> float:
    """Per-√Hz minimum delay predicted for the scenario's photon flux and noise"""
    spectral = derive_spectral(scenario.comb)
    return float(
        min_detectable_du(scenario.photons_per_second(), spectral, scenario.state.var_p0, scenario.state.var_q1)
    )


def predicted_sigma(scenario: ExperimentScenario) -> float:
    return float(_predicted_sigma(scenario.modulation.applied_du, analytic_du_min(scenario), scenario.analyzer.rbw))


def timing_result(scenario: ExperimentScenario, spec: SpectrumTrace) -> TimingResult:
    sigma = estimate_sigma(spec, scenario.modulation.frequency)
    if not math.isfinite(sigma):
        raise NumericalError(f'non-finite SNR estimate {sigma!r}')
    applied = scenario.modulation.applied_du
    du_min = None
    if sigma > 0 and applied > 0:
        du_min = float(du_min_from_experiment(applied, sigma, spec.rbw))
    spectral = derive_spectral(scenario.comb)
    return TimingResult(
        du_min=du_min,
        sql_ref=float(sql_combined(scenario.photons_per_second(), spectral.omega0, spectral.domega)),
        sigma=sigma,
        squeezing_db_used=float(variance_to_db(scenario.state.var_p0)),
        du_min_analytic=analytic_du_min(scenario),
        sigma_predicted=predicted_sigma(scenario),
        improvement_db=float(snr_to_sa_improvement(sigma)),
    )


def run_timing_experiment(scenario: ExperimentScenario) -> TimingResult:
    """Synthesize, analyze and convert the tone SNR into a per-√Hz minimum delay.

    Floating-point overflow and invalid operations raise NumericalError,
    on pool threads as well as on the calling thread.
    """
    try:
        with np.errstate(over='raise', invalid='raise'):
            return timing_result(scenario, measure_spectrum(scenario))
    except FloatingPointError as e:
        raise NumericalError(f'Monte-Carlo run with seed {scenario.rng_seed}: {e}') from e


def run_scenarios(scenarios, max_workers=1):
    """Run independent scenarios, optionally on a thread pool; results keep the input order"""
    scenarios = list(scenarios)
    if max_workers is None or max_workers <= 1 or len(scenarios) <= 1:
        return [run_timing_experiment(s) for s in scenarios]
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        return list(executor.map(run_timing_experiment, scenarios))


def run_seeds(scenario: ExperimentScenario, seeds, max_workers=1):
    """Run the experiment once per seed; results keep the order of ``seeds``"""
    return run_scenarios((scenario.with_seed(seed) for seed in seeds), max_workers)


def pair_from_config(cfg, omega, k=0) -> QuadraturePair:
    """Quadrature pair of supermode ``k`` described by the run configuration's [state] section"""
    state = cfg.state
    if state.kind == 'coherent':
        return QuadraturePair(var_p=1.0, var_q=1.0, omega=omega, k=k)
    if state.kind == 'squeezed':
        return QuadraturePair.from_db(state.squeezing_db, state.antisqueezing_db, omega=omega, k=k)
    return quadrature_variances(k, omega, cfg.spopo, cfg.chain)


def noise_state_from_config(cfg) -> NoiseState:
    state = cfg.state
    if state.kind == 'coherent':
        return NoiseState.coherent()
    if state.kind == 'squeezed':
        return NoiseState.squeezed(squeezing_to_variance(state.squeezing_db), db_to_variance(state.antisqueezing_db))
    # v0 phase quadrature and v1 amplitude quadrature at the modulation frequency
    omega = 2 * math.pi * cfg.modulation.frequency
    return NoiseState.squeezed(
        quadrature_variances(0, omega, cfg.spopo, cfg.chain).var_p,
        quadrature_variances(1, omega, cfg.spopo, cfg.chain).var_q,
    )


def scenario_from_config(cfg, state=None, comb=None, seed=None) -> ExperimentScenario:
    return ExperimentScenario(
        comb=comb or cfg.comb,
        chain=cfg.chain,
        state=state or noise_state_from_config(cfg),
        modulation=cfg.modulation,
        analyzer=cfg.analyzer,
        sample_rate=cfg.simulation.sample_rate,
        duration=cfg.simulation.duration,
        rng_seed=cfg.simulation.seed if seed is None else seed,
    )


def phase_scan(pair: QuadraturePair, scan: PhaseScan | None = None, seed=0) -> PhaseScanTrace:
    """Sample variance of ``draws_per_point`` Gaussian draws at each LO phase of a sawtooth scan"""
    scan = scan or PhaseScan()
    phases = scan.phases()
    theory = rotated_variance(phases, pair)
    rng = make_rng(seed)
    variance = np.empty(scan.n_points)
    for i, v in enumerate(theory):
        variance[i] = np.var(rng.standard_normal(scan.draws_per_point) * math.sqrt(v), ddof=1)
    return PhaseScanTrace(times=scan.times(), phases=phases, variance=variance, theory=theory)
