"""Exception types raised by the ofdmphase package."""

from __future__ import annotations


class OfdmPhaseError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(OfdmPhaseError):
    """Base class for system-config problems; carries the offending key."""

    def __init__(self, key: str, message: str | None = None):
        self.key = key
        super().__init__(message if message is not None else key)


class MissingKey(ConfigError):
    """A required config key is absent."""


class UnknownKey(ConfigError):
    """A config key is not part of the format."""


class BadUnit(ConfigError):
    """A config value could not be parsed in its declared unit."""


class RangeViolation(ConfigError):
    """A parameter is outside its physical range."""


class IndexOutOfRange(OfdmPhaseError):
    """A channel or symbol index is outside the grid."""


class DimensionMismatch(OfdmPhaseError):
    """Array or frame length does not match the channel count."""


class CapExceeded(OfdmPhaseError):
    """Exhaustive enumeration was requested above the configured cap."""


class BadTrials(OfdmPhaseError):
    """Monte Carlo trial count must be a positive integer."""


class DegenerateSymbol(OfdmPhaseError):
    """Demodulated symbol magnitude too small to carry a phase."""


class NoRootInBracket(OfdmPhaseError):
    """A root solve has no solution in the admissible range."""


class NonPositiveAnchor(OfdmPhaseError):
    """A linewidth fit needs a strictly positive anchor distance."""
