"""Core domain types and system-config serialization.

All quantities are stored in SI units (seconds, hertz, meters, s/m^2).
The text config format uses presentation units (ps, GHz, km, nm,
ps/(nm*km)); conversion happens only at the parse/render boundary and is
done with exact decimal exponent shifts so that a rendered config parses
back to bit-identical parameters.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation

import numpy as np

from .errors import (
    BadUnit,
    DimensionMismatch,
    IndexOutOfRange,
    MissingKey,
    RangeViolation,
    UnknownKey,
)

# Fixed model convention, not CODATA: the closed forms in this package
# use a round 3e8 m/s.
SPEED_OF_LIGHT = 3.0e8

# Orthogonality slack for the spacing * symbol-time product.
ORTHOGONALITY_TOL = 1e-9

_QPSK_POINTS = (1 + 0j, 1j, -1 + 0j, -1j)


def _require(condition: bool, key: str, message: str) -> None:
    if not condition:
        raise RangeViolation(key, message)


def _finite(x: float) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)


@dataclass(frozen=True)
class OfdmGrid:
    """Channel grid of an OFDM transmitter.

    Parameters
    ----------
    n_channels : int
        Number of subcarriers, at least 1.
    symbol_time : float
        OFDM symbol duration T in seconds.
    channel_spacing : float or None
        Subcarrier spacing in Hz.  ``None`` selects the orthogonal
        default 1/T.
    """

    n_channels: int
    symbol_time: float
    channel_spacing: float | None = None
    non_orthogonal: bool = field(init=False, default=False)

    def __post_init__(self):
        _require(isinstance(self.n_channels, int) and self.n_channels >= 1,
                 "channels", "channel count must be an integer >= 1")
        _require(_finite(self.symbol_time) and self.symbol_time > 0,
                 "symbol_time_ps", "symbol time must be finite and positive")
        if self.channel_spacing is None:
            object.__setattr__(self, "channel_spacing", 1.0 / self.symbol_time)
        _require(_finite(self.channel_spacing) and self.channel_spacing > 0,
                 "channel_spacing_ghz", "channel spacing must be finite and positive")
        product = self.channel_spacing * self.symbol_time
        object.__setattr__(self, "non_orthogonal",
                           abs(product - 1.0) > ORTHOGONALITY_TOL)


@dataclass(frozen=True)
class LaserSpec:
    """Transmitter and local-oscillator laser linewidths in Hz."""

    linewidth_tx: float
    linewidth_lo: float

    def __post_init__(self):
        _require(_finite(self.linewidth_tx) and self.linewidth_tx >= 0,
                 "linewidth_tx_hz", "linewidth must be finite and non-negative")
        _require(_finite(self.linewidth_lo) and self.linewidth_lo >= 0,
                 "linewidth_lo_hz", "linewidth must be finite and non-negative")


@dataclass(frozen=True)
class FiberLink:
    """Dispersive fiber span.

    dispersion is the chromatic dispersion parameter in s/m^2
    (1 ps/(nm*km) = 1e-6 s/m^2), length in meters, wavelength in meters.
    """

    dispersion: float
    length: float
    wavelength: float

    def __post_init__(self):
        _require(_finite(self.dispersion) and self.dispersion >= 0,
                 "dispersion_ps_nm_km", "dispersion must be finite and non-negative")
        _require(_finite(self.length) and self.length >= 0,
                 "length_km", "length must be finite and non-negative")
        _require(_finite(self.wavelength) and self.wavelength > 0,
                 "wavelength_nm", "wavelength must be finite and positive")


@dataclass(frozen=True, order=True)
class QpskSymbol:
    """One Gray-unlabelled QPSK point, indexed 0..3 counter-clockwise from 1+0j."""

    index: int

    def __post_init__(self):
        if not (isinstance(self.index, int) and 0 <= self.index <= 3):
            raise IndexOutOfRange(f"QPSK symbol index must be 0..3, got {self.index!r}")

    @property
    def value(self) -> complex:
        return _QPSK_POINTS[self.index]


@dataclass(frozen=True)
class ConstellationFrame:
    """An assignment of one QPSK symbol to every channel of a frame.

    Channel r carries ``symbols[r]``.  The compact text form is a base-4
    string with channel 0 as the least significant (rightmost) digit, and
    the integer form packs two bits per channel the same way.
    """

    symbols: tuple[QpskSymbol, ...]

    def __post_init__(self):
        if len(self.symbols) == 0:
            raise DimensionMismatch("frame must contain at least one symbol")

    @classmethod
    def from_digits(cls, digits) -> "ConstellationFrame":
        return cls(tuple(QpskSymbol(int(d)) for d in digits))

    @classmethod
    def from_base4(cls, text: str) -> "ConstellationFrame":
        if not text or any(ch not in "0123" for ch in text):
            raise DimensionMismatch(f"not a base-4 frame string: {text!r}")
        return cls.from_digits(int(ch) for ch in reversed(text))

    @classmethod
    def from_index(cls, value: int, n_channels: int) -> "ConstellationFrame":
        if not 0 <= value < 4**n_channels:
            raise IndexOutOfRange(f"frame index {value} out of range for n={n_channels}")
        return cls.from_digits((value >> (2 * r)) & 3 for r in range(n_channels))

    @classmethod
    def uniform(cls, n_channels: int, index: int = 0) -> "ConstellationFrame":
        return cls(tuple(QpskSymbol(index) for _ in range(n_channels)))

    def __len__(self) -> int:
        return len(self.symbols)

    def digits(self) -> np.ndarray:
        return np.array([s.index for s in self.symbols], dtype=np.uint8)

    def to_base4(self) -> str:
        return "".join(str(s.index) for s in reversed(self.symbols))

    @property
    def index(self) -> int:
        return sum(s.index << (2 * r) for r, s in enumerate(self.symbols))

    def values(self) -> np.ndarray:
        return np.array([s.value for s in self.symbols], dtype=np.complex128)


class SystemKind(enum.Enum):
    """Which transmission format a parameter set describes."""

    OFDM_WORST_CASE = "ofdm_worst_case"
    SINGLE_QPSK = "single_qpsk"


@dataclass(frozen=True)
class SystemParams:
    """Complete description of one link: grid, lasers, fiber, format."""

    grid: OfdmGrid
    lasers: LaserSpec
    fiber: FiberLink
    kind: SystemKind = SystemKind.OFDM_WORST_CASE

    @property
    def effective_symbol_time(self) -> float:
        """Duration over which phase noise acts on one detected symbol.

        A serial QPSK stream at the same net rate as an N-channel OFDM
        frame spends T/N per symbol; the OFDM frame spends T.
        """
        if self.kind is SystemKind.SINGLE_QPSK:
            return self.grid.symbol_time / self.grid.n_channels
        return self.grid.symbol_time


def capacity_gbit(params: SystemParams) -> float:
    """Aggregate bit rate in Gbit/s: QPSK on every channel, two polarizations."""
    grid = params.grid
    bits_per_sec = grid.n_channels * 2 * (1.0 / grid.symbol_time) * 2
    return bits_per_sec / 1e9


# --- config text format -----------------------------------------------------
#
# Line-oriented "key = value"; '#' starts a comment; scientific notation
# accepted.  _SCALES maps each numeric key to the power of ten taking the
# presentation unit to SI.

_SCALES = {
    "symbol_time_ps": -12,
    "channel_spacing_ghz": 9,
    "linewidth_tx_hz": 0,
    "linewidth_lo_hz": 0,
    "dispersion_ps_nm_km": -6,
    "length_km": 3,
    "wavelength_nm": -9,
}

_ALL_KEYS = ("channels", *_SCALES, "system_kind")

_REQUIRED_KEYS = ("channels", "symbol_time_ps", "linewidth_tx_hz",
                  "linewidth_lo_hz", "dispersion_ps_nm_km", "length_km",
                  "wavelength_nm")


def _si_value(key: str, text: str) -> float:
    """Parse a presentation-unit number and shift it to SI exactly.

    Decimal exponent shifts are exact, so the only rounding is the single
    final binary conversion.  This makes render/parse an exact inverse
    pair (see _presentation_text).
    """
    try:
        value = Decimal(text)
    except InvalidOperation:
        raise BadUnit(key, f"cannot parse {text!r} as a number") from None
    if not value.is_finite():
        raise BadUnit(key, f"non-finite value {text!r}")
    return float(value.scaleb(_SCALES[key]))


def _presentation_text(key: str, si_value: float) -> str:
    # Prefer the shortest repr that survives the parse; fall back to the
    # exact decimal expansion, which always does.
    shifted = -_SCALES[key]
    candidate = repr(float(Decimal(si_value).scaleb(shifted)))
    if _si_value(key, candidate) == si_value:
        return candidate
    return str(Decimal(si_value).scaleb(shifted))


def parse_system_config(text: str) -> SystemParams:
    """Parse the ``key = value`` system description into SystemParams.

    Raises MissingKey, UnknownKey, BadUnit, or RangeViolation; each names
    the offending key.  Later duplicates of a key override earlier ones.
    """
    entries: dict[str, str] = {}
    for raw_line in text.splitlines():
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep or not key:
            raise BadUnit(key or "?", f"expected 'key = value', got {raw_line!r}")
        if key not in _ALL_KEYS:
            raise UnknownKey(key, f"unknown config key {key!r}")
        entries[key] = value

    for key in _REQUIRED_KEYS:
        if key not in entries:
            raise MissingKey(key, f"required config key {key!r} is missing")

    try:
        n_channels = int(entries["channels"], 10)
    except ValueError:
        raise BadUnit("channels", f"cannot parse {entries['channels']!r} as an integer") from None

    spacing = None
    if "channel_spacing_ghz" in entries:
        spacing = _si_value("channel_spacing_ghz", entries["channel_spacing_ghz"])

    kind = SystemKind.OFDM_WORST_CASE
    if "system_kind" in entries:
        try:
            kind = SystemKind(entries["system_kind"])
        except ValueError:
            raise BadUnit("system_kind",
                          f"system_kind must be one of "
                          f"{[k.value for k in SystemKind]}, got {entries['system_kind']!r}") from None

    grid = OfdmGrid(n_channels=n_channels,
                    symbol_time=_si_value("symbol_time_ps", entries["symbol_time_ps"]),
                    channel_spacing=spacing)
    lasers = LaserSpec(linewidth_tx=_si_value("linewidth_tx_hz", entries["linewidth_tx_hz"]),
                       linewidth_lo=_si_value("linewidth_lo_hz", entries["linewidth_lo_hz"]))
    fiber = FiberLink(dispersion=_si_value("dispersion_ps_nm_km", entries["dispersion_ps_nm_km"]),
                      length=_si_value("length_km", entries["length_km"]),
                      wavelength=_si_value("wavelength_nm", entries["wavelength_nm"]))
    return SystemParams(grid=grid, lasers=lasers, fiber=fiber, kind=kind)


def render_system_config(params: SystemParams) -> str:
    """Emit the config text for params; parse_system_config inverts it exactly."""
    lines = [
        f"channels = {params.grid.n_channels}",
        f"symbol_time_ps = {_presentation_text('symbol_time_ps', params.grid.symbol_time)}",
        f"channel_spacing_ghz = {_presentation_text('channel_spacing_ghz', params.grid.channel_spacing)}",
        f"linewidth_tx_hz = {_presentation_text('linewidth_tx_hz', params.lasers.linewidth_tx)}",
        f"linewidth_lo_hz = {_presentation_text('linewidth_lo_hz', params.lasers.linewidth_lo)}",
        f"dispersion_ps_nm_km = {_presentation_text('dispersion_ps_nm_km', params.fiber.dispersion)}",
        f"length_km = {_presentation_text('length_km', params.fiber.length)}",
        f"wavelength_nm = {_presentation_text('wavelength_nm', params.fiber.wavelength)}",
        f"system_kind = {params.kind.value}",
    ]
    return "\n".join(lines) + "\n"
