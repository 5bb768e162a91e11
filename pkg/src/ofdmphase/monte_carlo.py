"""Monte Carlo oracle for the closed-form variance.

Draws correlated per-channel phase samples, pushes them through either
the first-order (Taylor) phase-error expression or a full DFT
demodulation, and estimates the phase-error variance.  Generation is cut
into fixed 65536-trial blocks, each driven by its own counter-mode
stream keyed by (seed, block index); blocks are concatenated in index
order, so the ensemble is byte-identical for any worker count.
"""

from __future__ import annotations

import enum
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import ConstellationFrame
from .errors import (
    BadTrials,
    DegenerateSymbol,
    DimensionMismatch,
    IndexOutOfRange,
    RangeViolation,
)
from .noise_model import (
    CorrelationModel,
    correlation_matrix,
    overlap_correlation_matrix,
)
from .variance_engine import channel_weights, variance_given_correlation

MC_BLOCK = 65536

# Relative eigenvalue mass below this is numerical noise, not a model
# property; no warning for it.
_CLIP_WARN_TOL = 1e-12


class PhaseSampler(enum.Enum):
    """How to realize the correlated per-channel phase samples.

    CORRELATION_MATRIX draws Gaussians with exactly the configured
    correlation matrix (eigen-factorized, clipping negative eigenvalues
    when the matrix is indefinite).  WIENER_OVERLAP builds each sample as
    the sum of N fine Wiener increments from a shared pool of 2N-1, which
    realizes the triangular correlation 1 - |lag|/N and is always
    physical.
    """

    CORRELATION_MATRIX = "matrix"
    WIENER_OVERLAP = "overlap"

    @classmethod
    def from_name(cls, name: str) -> "PhaseSampler":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown sampler {name!r}; "
                             f"expected one of {[s.value for s in cls]}") from None


@dataclass(frozen=True)
class PhaseEnsemble:
    """trials x n matrix of phase samples plus the recipe that made it."""

    n: int
    trials: int
    variance: float
    sampler: PhaseSampler
    model: CorrelationModel | None
    seed: int
    phases: np.ndarray
    clipped_mass: float = 0.0

    def __post_init__(self):
        self.phases.setflags(write=False)


@dataclass(frozen=True)
class McEstimate:
    """Sample variance of the phase error with its own standard error."""

    variance: float
    std_error: float
    trials: int
    excluded: int = 0


def _block_rng(seed: int, block: int) -> np.random.Generator:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, block], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def factor_covariance(cov: np.ndarray) -> tuple[np.ndarray, float]:
    """Split cov into W with W @ W.T == cov (negative eigenvalues clipped).

    Returns the transform and the clipped mass, the total magnitude of
    the negative eigenvalues that had to be zeroed.
    """
    eigenvalues, vectors = np.linalg.eigh(cov)
    negative = eigenvalues < 0
    mass = float(-eigenvalues[negative].sum())
    clipped = np.where(negative, 0.0, eigenvalues)
    return vectors * np.sqrt(clipped), mass


def sample_phases(n: int, variance: float, trials: int, *,
                  sampler: PhaseSampler = PhaseSampler.CORRELATION_MATRIX,
                  model: CorrelationModel = CorrelationModel.PARTIAL,
                  seed: int = 0, workers: int = 1) -> PhaseEnsemble:
    """Draw `trials` frames of n correlated phase samples.

    Parameters
    ----------
    n, variance : int, float
        Channel count and per-sample variance in rad^2.
    trials : int
        Number of independent frames, at least 1.
    sampler, model : PhaseSampler, CorrelationModel
        model is only consulted by CORRELATION_MATRIX.
    seed, workers : int
        Stream seed and thread count; the result does not depend on
        workers.
    """
    if not (isinstance(n, int) and n >= 1):
        raise RangeViolation("channels", "channel count must be an integer >= 1")
    if not (isinstance(trials, int) and trials >= 1):
        raise BadTrials(f"trial count must be a positive integer, got {trials!r}")
    if not (isinstance(variance, (int, float)) and math.isfinite(variance)
            and variance >= 0):
        raise RangeViolation("sigma2", "variance must be finite and non-negative")
    if not (isinstance(seed, int) and seed >= 0):
        raise RangeViolation("seed", "seed must be a non-negative integer")

    clipped_mass = 0.0
    if sampler is PhaseSampler.CORRELATION_MATRIX:
        corr = correlation_matrix(n, model).values
        transform, corr_mass = factor_covariance(corr)
        clipped_mass = corr_mass * variance
        if corr_mass > n * _CLIP_WARN_TOL:
            warnings.warn(
                f"correlation matrix for n={n} model={model.value} is not positive "
                f"semidefinite; clipped eigenvalue mass {corr_mass:.6g} "
                f"({clipped_mass:.6g} rad^2 after scaling)")
        transform = transform * math.sqrt(variance)

        def draw(block: int, rows: int) -> np.ndarray:
            z = _block_rng(seed, block).standard_normal((rows, n))
            return z @ transform.T
    else:
        model = None
        step = math.sqrt(variance / n)

        def draw(block: int, rows: int) -> np.ndarray:
            grains = _block_rng(seed, block).standard_normal((rows, 2 * n - 1)) * step
            sums = np.cumsum(grains, axis=1)
            phases = np.empty((rows, n))
            phases[:, 0] = sums[:, n - 1]
            if n > 1:
                phases[:, 1:] = sums[:, n:] - sums[:, : n - 1]
            return phases

    n_blocks = (trials + MC_BLOCK - 1) // MC_BLOCK
    sizes = [min(MC_BLOCK, trials - b * MC_BLOCK) for b in range(n_blocks)]
    if workers <= 1 or n_blocks == 1:
        parts = [draw(b, sizes[b]) for b in range(n_blocks)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(draw, range(n_blocks), sizes))
    phases = parts[0] if n_blocks == 1 else np.vstack(parts)

    return PhaseEnsemble(n=n, trials=trials, variance=float(variance),
                         sampler=sampler, model=model, seed=seed,
                         phases=phases, clipped_mass=clipped_mass)


def _check_frame(ensemble: PhaseEnsemble, frame: ConstellationFrame, k: int) -> None:
    if len(frame) != ensemble.n:
        raise DimensionMismatch(f"frame length {len(frame)} does not match "
                                f"ensemble n={ensemble.n}")
    if not (isinstance(k, int) and 0 <= k < ensemble.n):
        raise IndexOutOfRange(f"channel index {k!r} out of range for n={ensemble.n}")


def _estimate(samples: np.ndarray, excluded: int = 0) -> McEstimate:
    trials = int(samples.shape[0])
    if trials < 2:
        raise BadTrials("variance estimation needs at least 2 trials")
    variance = float(np.var(samples, ddof=1))
    return McEstimate(variance=variance,
                      std_error=variance * math.sqrt(2.0 / trials),
                      trials=trials, excluded=excluded)


def taylor_phase_error(ensemble: PhaseEnsemble, frame: ConstellationFrame,
                       k: int) -> McEstimate:
    """First-order phase error: the weighted sample average per trial."""
    _check_frame(ensemble, frame, k)
    weights = channel_weights(frame, k).weights
    theta = ensemble.phases @ (weights / ensemble.n)
    return _estimate(theta)


def full_demod_phase_error(ensemble: PhaseEnsemble, frame: ConstellationFrame,
                           k: int, magnitude_floor: float = 1e-12) -> McEstimate:
    """Exact phase error: synthesize, rotate by the noise, demodulate.

    Trials whose demodulated symbol magnitude falls below magnitude_floor
    carry no usable phase; they are excluded and counted.  Raises
    DegenerateSymbol if fewer than two trials survive.
    """
    _check_frame(ensemble, frame, k)
    n = ensemble.n
    values = frame.values()
    time_signal = np.fft.ifft(values) * n
    reference = values[k]
    pieces = []
    excluded = 0
    for start in range(0, ensemble.trials, MC_BLOCK):
        chunk = ensemble.phases[start : start + MC_BLOCK]
        received = time_signal[None, :] * np.exp(1j * chunk)
        demodulated = np.fft.fft(received, axis=1)[:, k] / n
        keep = np.abs(demodulated) >= magnitude_floor
        excluded += int(chunk.shape[0] - keep.sum())
        pieces.append(np.angle(demodulated[keep] / reference))
    theta = np.concatenate(pieces)
    if theta.shape[0] < 2:
        raise DegenerateSymbol(f"only {theta.shape[0]} trials carried a usable "
                               f"phase; {excluded} excluded")
    return _estimate(theta, excluded=excluded)


def analytic_variance(ensemble: PhaseEnsemble, frame: ConstellationFrame,
                      k: int) -> float:
    """Closed-form Var[theta] matching the ensemble's true covariance."""
    _check_frame(ensemble, frame, k)
    if ensemble.sampler is PhaseSampler.WIENER_OVERLAP:
        corr = overlap_correlation_matrix(ensemble.n)
    else:
        corr = correlation_matrix(ensemble.n, ensemble.model).values
    return variance_given_correlation(frame, k, corr) * ensemble.variance
