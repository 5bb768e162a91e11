"""Normalized phase-error variance of one demodulated OFDM channel.

To first order in the phase noise, the phase error of channel k under a
frame of QPSK symbols is a weighted average of the N per-channel noise
samples.  The weight of sample m depends only on the symbol ratios
a_r/a_k, which for QPSK are fourth roots of unity, so every weight is a
signed cosine or sine read from a 4 x N table.  The variance normalized
by the per-sample variance is then a quadratic form of the weights with
the channel correlation matrix.

Evaluation order is pinned: weights accumulate channel-by-channel in
ascending r, and the quadratic form accumulates row-major.  The batch
kernels replay the same order, which makes scalar, NumPy, and compiled
paths bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ConstellationFrame
from .errors import DimensionMismatch, IndexOutOfRange
from .noise_model import CorrelationModel, correlation_matrix


def weight_table(n: int) -> np.ndarray:
    """Per-ratio weight contributions, shape (4, n).

    Entry [d, t] is the real part of i**d * exp(2j*pi*t/n): the
    contribution of a channel whose symbol ratio is i**d at shifted tone
    index t.  Rows are cos, -sin, -cos, sin of 2*pi*t/n.
    """
    angles = 2.0 * np.pi * np.arange(n) / n
    cos = np.cos(angles)
    sin = np.sin(angles)
    return np.stack([cos, -sin, -cos, sin])


def shift_table(n: int, k: int) -> np.ndarray:
    """Tone index t = ((r - k) * m) mod n for every (r, m), shape (n, n)."""
    r = np.arange(n, dtype=np.int64)[:, None]
    m = np.arange(n, dtype=np.int64)[None, :]
    return ((r - k) % n) * m % n


def ratio_digits(digits: np.ndarray, k: int) -> np.ndarray:
    """Symbol-ratio exponents d_r = (digits[r] - digits[k]) mod 4, as uint8."""
    return ((digits.astype(np.int64) - int(digits[k])) & 3).astype(np.uint8)


@dataclass(frozen=True)
class ChannelWeights:
    """Noise-sample weights of one (frame, k) pair; weights.sum() == n."""

    frame: ConstellationFrame
    k: int
    weights: np.ndarray


def _check_channel(frame: ConstellationFrame, k: int) -> int:
    n = len(frame)
    if not (isinstance(k, int) and 0 <= k < n):
        raise IndexOutOfRange(f"channel {k!r} out of range for n={n}")
    return n


def channel_weights(frame: ConstellationFrame, k: int) -> ChannelWeights:
    """Compute the N noise-sample weights of channel k under the frame."""
    n = _check_channel(frame, k)
    d = ratio_digits(frame.digits(), k)
    table = weight_table(n)
    shifts = shift_table(n, k)
    weights = np.zeros(n)
    for r in range(n):
        weights += table[d[r], shifts[r]]
    return ChannelWeights(frame=frame, k=k, weights=weights)


def _quadratic_form(weights: np.ndarray, corr: np.ndarray) -> float:
    # Row-major accumulation; same order as the batch kernels.
    n = weights.shape[0]
    acc = 0.0
    for p in range(n):
        wp = weights[p]
        row = corr[p]
        for q in range(n):
            acc += (wp * row[q]) * weights[q]
    return float(acc / (n * n))


def variance_given_correlation(frame: ConstellationFrame, k: int,
                               corr: np.ndarray) -> float:
    """Normalized variance of channel k under an explicit correlation matrix."""
    n = _check_channel(frame, k)
    corr = np.asarray(corr, dtype=np.float64)
    if corr.shape != (n, n):
        raise DimensionMismatch(f"correlation matrix shape {corr.shape} does not "
                                f"match n={n}")
    return _quadratic_form(channel_weights(frame, k).weights, corr)


def channel_variance(frame: ConstellationFrame, k: int,
                     model: CorrelationModel = CorrelationModel.PARTIAL) -> float:
    """Normalized variance of channel k's phase error under the frame.

    The value is Var[theta_k] divided by the per-sample variance; it is
    exactly 1 for every frame under the FULL model and equals the common
    phase error plus inter-channel interference otherwise.
    """
    n = _check_channel(frame, k)
    corr = correlation_matrix(n, model).values
    return _quadratic_form(channel_weights(frame, k).weights, corr)


@dataclass(frozen=True)
class VarianceReport:
    """Per-channel normalized variances of one frame plus summary values."""

    model: CorrelationModel
    per_channel: tuple[float, ...]
    aggregate: float
    max_channel: tuple[int, float]


def frame_report(frame: ConstellationFrame,
                 model: CorrelationModel = CorrelationModel.PARTIAL) -> VarianceReport:
    """Evaluate every channel of the frame and summarize.

    aggregate is the plain sum over channels; max_channel is (k, value)
    with ties resolved toward the smallest k.
    """
    n = len(frame)
    per_channel = tuple(channel_variance(frame, k, model) for k in range(n))
    aggregate = 0.0
    for value in per_channel:
        aggregate += value
    best_k = 0
    for k in range(1, n):
        if per_channel[k] > per_channel[best_k]:
            best_k = k
    return VarianceReport(model=model, per_channel=per_channel,
                          aggregate=aggregate,
                          max_channel=(best_k, per_channel[best_k]))
