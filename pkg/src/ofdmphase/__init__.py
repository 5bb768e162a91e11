"""Laser phase noise penalties in coherent optical OFDM.

Closed-form per-channel phase-error variance under correlated phase
noise, exhaustive and sampled worst-case constellation searches, a Monte
Carlo oracle, and BER-floor reach analysis with equalization-enhanced
phase noise.
"""

__version__ = "0.1.0"

from .ber_analysis import (
    TARGET_BER,
    BerPoint,
    ReachResult,
    ber_floor,
    ber_sweep,
    fit_linewidth,
    reach,
    sigma_for_ber,
)
from .core import (
    ConstellationFrame,
    FiberLink,
    LaserSpec,
    OfdmGrid,
    QpskSymbol,
    SystemKind,
    SystemParams,
    capacity_gbit,
    parse_system_config,
    render_system_config,
)
from .monte_carlo import (
    McEstimate,
    PhaseEnsemble,
    PhaseSampler,
    analytic_variance,
    full_demod_phase_error,
    sample_phases,
    taylor_phase_error,
)
from .noise_model import (
    CorrelationMatrix,
    CorrelationModel,
    PhaseVariance,
    correlation_matrix,
    overlap_correlation_matrix,
    symbol_phase_variance,
    system_phase_variance,
)
from .variance_engine import (
    ChannelWeights,
    VarianceReport,
    channel_variance,
    channel_weights,
    frame_report,
    variance_given_correlation,
)
from .worst_case_search import (
    Exhaustive,
    RandomSample,
    SearchResult,
    SearchSpec,
    search,
    worst_case_vs_n,
)

__all__ = [
    "BerPoint", "ChannelWeights", "ConstellationFrame", "CorrelationMatrix",
    "CorrelationModel", "Exhaustive", "FiberLink", "LaserSpec", "McEstimate",
    "OfdmGrid", "PhaseEnsemble", "PhaseSampler", "PhaseVariance", "QpskSymbol",
    "RandomSample", "ReachResult", "SearchResult", "SearchSpec", "SystemKind",
    "SystemParams", "TARGET_BER",
    "VarianceReport", "analytic_variance", "ber_floor", "ber_sweep",
    "capacity_gbit", "channel_variance", "channel_weights", "correlation_matrix",
    "fit_linewidth", "frame_report", "full_demod_phase_error",
    "overlap_correlation_matrix", "parse_system_config", "reach",
    "render_system_config", "sample_phases", "search", "sigma_for_ber",
    "symbol_phase_variance", "system_phase_variance", "taylor_phase_error",
    "variance_given_correlation", "worst_case_vs_n",
]
