"""BER floor of QPSK under residual phase noise, and what it implies.

A Gaussian phase error of standard deviation sigma pushes a QPSK symbol
across its decision boundary at pi/4 with probability erfc-of-distance,
giving the floor 0.5 * erfc(pi / (4 * sqrt(2) * sigma)).  Everything
else here inverts that relation: the sigma budget for a target floor,
the fiber length at which a system exhausts the budget (reach), and the
laser linewidth consistent with a known reach (fit).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .core import SystemParams
from .errors import NonPositiveAnchor, NoRootInBracket, RangeViolation
from .noise_model import system_phase_variance

TARGET_BER = 0.01

# Reach bisection: far tighter than the metre the physics would justify,
# so that reach ratios are clean to ~1e-12 relative.
_REACH_TOL_M = 1e-6


def ber_floor(sigma: float) -> float:
    """BER floor of QPSK for phase-error standard deviation sigma (rad)."""
    if not (isinstance(sigma, (int, float)) and math.isfinite(sigma) and sigma >= 0):
        raise RangeViolation("sigma", "sigma must be finite and non-negative")
    if sigma == 0:
        return 0.0
    return 0.5 * math.erfc(math.pi / (4.0 * math.sqrt(2.0) * sigma))


def sigma_for_ber(target: float) -> float:
    """Phase-error sigma whose BER floor equals target; inverse of ber_floor.

    Bisection on the monotone floor; valid targets lie strictly between
    0 and the sigma -> infinity limit of 0.5.
    """
    if not (isinstance(target, (int, float)) and 0.0 < target < 0.5):
        raise NoRootInBracket(f"BER floor target must be in (0, 0.5), got {target!r}")
    lo = 1e-8
    hi = 1.0
    guard = 0
    while ber_floor(hi) < target:
        hi *= 2.0
        guard += 1
        if guard > 200:
            raise NoRootInBracket(f"no sigma reaches BER floor {target!r}")
    while hi - lo > 1e-14 * hi:
        mid = 0.5 * (lo + hi)
        if ber_floor(mid) >= target:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _variance_at(template: SystemParams, length: float,
                 include_intrinsic: bool) -> float:
    params = replace(template, fiber=replace(template.fiber, length=length))
    budget = system_phase_variance(params)
    return budget.total if include_intrinsic else budget.eepn


@dataclass(frozen=True)
class ReachResult:
    """Outcome of a reach search: length in m, plus the final bracket."""

    length: float
    target_ber: float
    bracket: tuple[float, float]

    @property
    def finite(self) -> bool:
        return math.isfinite(self.length)


def reach(template: SystemParams, *, target_ber: float = TARGET_BER,
          include_intrinsic: bool = True) -> ReachResult:
    """Longest fiber length whose BER floor stays at or below target_ber.

    include_intrinsic=False keeps only the length-dependent (EEPN) part
    of the variance, isolating the dispersion-induced penalty.  The
    result length is math.inf when no length exhausts the budget (for
    example zero dispersion or a zero LO linewidth).  Raises
    NoRootInBracket when the budget is already exhausted at zero length,
    so a finite result always brackets a genuine crossing.
    """
    threshold = sigma_for_ber(target_ber) ** 2
    at_zero = _variance_at(template, 0.0, include_intrinsic)
    if at_zero >= threshold:
        raise NoRootInBracket(
            f"BER floor exceeds target {target_ber!r} already at zero length")
    if _variance_at(template, 1.0, include_intrinsic) <= at_zero:
        return ReachResult(math.inf, target_ber, (0.0, math.inf))
    hi = 1.0
    guard = 0
    while _variance_at(template, hi, include_intrinsic) < threshold:
        hi *= 2.0
        guard += 1
        if guard > 400:
            return ReachResult(math.inf, target_ber, (hi, math.inf))
    lo = 0.0
    while hi - lo > _REACH_TOL_M:
        mid = 0.5 * (lo + hi)
        if _variance_at(template, mid, include_intrinsic) >= threshold:
            hi = mid
        else:
            lo = mid
    return ReachResult(0.5 * (lo + hi), target_ber, (lo, hi))


def fit_linewidth(template: SystemParams, anchor_length: float, *,
                  target_ber: float = TARGET_BER,
                  assume_equal: bool = True) -> float:
    """Linewidth (Hz) that puts the BER-floor reach exactly at anchor_length.

    With assume_equal both lasers get the fitted value; the variance is
    then proportional to it and the fit is a single division.  Otherwise
    the transmitter keeps template.lasers.linewidth_tx and only the LO
    linewidth is fitted; raises NoRootInBracket when the transmitter
    alone already exceeds the budget at the anchor.
    """
    if not (isinstance(anchor_length, (int, float)) and math.isfinite(anchor_length)
            and anchor_length > 0):
        raise NonPositiveAnchor(f"anchor length must be positive, got {anchor_length!r}")
    threshold = sigma_for_ber(target_ber) ** 2
    anchored = replace(template, fiber=replace(template.fiber, length=anchor_length))
    if assume_equal:
        unit = replace(anchored, lasers=replace(anchored.lasers,
                                                linewidth_tx=1.0, linewidth_lo=1.0))
        return threshold / system_phase_variance(unit).total
    base_params = replace(anchored, lasers=replace(anchored.lasers, linewidth_lo=0.0))
    base = system_phase_variance(base_params).total
    probe = replace(anchored, lasers=replace(anchored.lasers, linewidth_lo=1.0))
    slope = system_phase_variance(probe).total - base
    fitted = (threshold - base) / slope
    if fitted < 0:
        raise NoRootInBracket("transmitter linewidth alone exceeds the BER budget "
                              "at the anchor length")
    return fitted


@dataclass(frozen=True)
class BerPoint:
    """BER floor of one link length: length in m, variance in rad^2."""

    length: float
    sigma2: float
    ber_floor: float


def ber_sweep(template: SystemParams, lengths) -> list[BerPoint]:
    """Evaluate the BER floor at each fiber length (meters)."""
    points = []
    for length in lengths:
        if not (isinstance(length, (int, float)) and math.isfinite(length)
                and length >= 0):
            raise RangeViolation("length_km", "sweep lengths must be finite and non-negative")
        sigma2 = _variance_at(template, float(length), True)
        points.append(BerPoint(length=float(length), sigma2=sigma2,
                               ber_floor=ber_floor(math.sqrt(sigma2))))
    if not points:
        raise RangeViolation("length_km", "sweep needs at least one length")
    return points
