"""Phase-noise variance closed forms and channel correlation models.

Two Lorentzian lasers (transmitter and local oscillator) contribute a
Wiener phase walk with per-symbol variance 2*pi*(dv_tx + dv_lo)*T.  After
uncompensated chromatic dispersion the local oscillator contribution is
enhanced (EEPN); the enhancement grows with link length and shrinks with
symbol time, so it can be folded into an equivalent extra linewidth.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import SPEED_OF_LIGHT, FiberLink, LaserSpec, SystemKind, SystemParams
from .errors import RangeViolation


class CorrelationModel(enum.Enum):
    """How phase-noise samples of different channels co-vary within a frame.

    FULL: one shared sample (classic single-carrier assumption).
    PARTIAL: correlation decays as sqrt(1 - |p - q|/N) with channel lag.
    NONE: independent samples per channel.
    """

    FULL = "full"
    PARTIAL = "partial"
    NONE = "none"

    @classmethod
    def from_name(cls, name: str) -> "CorrelationModel":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown correlation model {name!r}; "
                             f"expected one of {[m.value for m in cls]}") from None


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric unit-diagonal correlation of the N phase samples of a frame."""

    n: int
    model: CorrelationModel
    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)


def correlation_matrix(n: int, model: CorrelationModel) -> CorrelationMatrix:
    """Build the N x N sample correlation matrix for the given model.

    The PARTIAL matrix is exactly the square-root lag profile; it is not
    positive semidefinite for every N (first negative eigenvalue appears
    at N = 30), which the Monte Carlo sampler handles by eigenvalue
    clipping.  overlap_correlation_matrix is the PSD triangular profile
    realized by physically overlapping Wiener windows.
    """
    if n < 1:
        raise RangeViolation("channels", "channel count must be >= 1")
    if model is CorrelationModel.FULL:
        values = np.ones((n, n))
    elif model is CorrelationModel.NONE:
        values = np.eye(n)
    else:
        lag = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
        values = np.sqrt(1.0 - lag / n)
    return CorrelationMatrix(n=n, model=model, values=values)


def overlap_correlation_matrix(n: int) -> np.ndarray:
    """Correlation of N unit-variance Wiener displacements taken T/N apart.

    Windows m and m' share N - |m - m'| of their N increments, giving
    1 - |m - m'|/N.  Always positive semidefinite.
    """
    if n < 1:
        raise RangeViolation("channels", "channel count must be >= 1")
    lag = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    values = 1.0 - lag / n
    values.setflags(write=False)
    return values


@dataclass(frozen=True)
class PhaseVariance:
    """Phase-noise variance budget for one detected symbol.

    total = intrinsic + eepn holds exactly.  eepn_linewidth is the extra
    linewidth that would reproduce the eepn part over symbol_time:
    eepn / (2 * pi * symbol_time).
    """

    total: float
    intrinsic: float
    eepn: float
    eepn_linewidth: float
    symbol_time: float


def symbol_phase_variance(symbol_time: float, lasers: LaserSpec,
                          fiber: FiberLink) -> PhaseVariance:
    """Variance of the phase walk over one symbol of duration symbol_time.

    Parameters
    ----------
    symbol_time : float
        Symbol duration in seconds, strictly positive.
    lasers : LaserSpec
        Transmitter and local-oscillator linewidths.
    fiber : FiberLink
        Dispersion, length, wavelength of the span; only the local
        oscillator sees the dispersed signal, so only linewidth_lo
        enters the EEPN term.

    Returns
    -------
    PhaseVariance
        intrinsic = 2*pi*(dv_tx + dv_lo)*T,
        eepn = pi*lambda^2/(2*c) * D * L * dv_lo / T.
    """
    if not (isinstance(symbol_time, (int, float)) and math.isfinite(symbol_time)
            and symbol_time > 0):
        raise RangeViolation("symbol_time_ps", "symbol time must be finite and positive")
    intrinsic = 2.0 * math.pi * (lasers.linewidth_tx + lasers.linewidth_lo) * symbol_time
    eepn = (math.pi * fiber.wavelength**2 / (2.0 * SPEED_OF_LIGHT)
            * fiber.dispersion * fiber.length * lasers.linewidth_lo / symbol_time)
    return PhaseVariance(
        total=intrinsic + eepn,
        intrinsic=intrinsic,
        eepn=eepn,
        eepn_linewidth=eepn / (2.0 * math.pi * symbol_time),
        symbol_time=symbol_time,
    )


def system_phase_variance(params: SystemParams) -> PhaseVariance:
    """Effective per-symbol variance for a whole system description.

    SINGLE_QPSK evaluates the closed form at the serial symbol time T/N.
    OFDM_WORST_CASE evaluates at T and multiplies every part by N, the
    exact supremum of the normalized frame variance over constellations.
    """
    base = symbol_phase_variance(params.effective_symbol_time, params.lasers,
                                 params.fiber)
    if params.kind is SystemKind.OFDM_WORST_CASE:
        n = params.grid.n_channels
        scaled_intrinsic = n * base.intrinsic
        scaled_eepn = n * base.eepn
        return PhaseVariance(
            total=scaled_intrinsic + scaled_eepn,
            intrinsic=scaled_intrinsic,
            eepn=scaled_eepn,
            eepn_linewidth=scaled_eepn / (2.0 * math.pi * base.symbol_time),
            symbol_time=base.symbol_time,
        )
    return base
