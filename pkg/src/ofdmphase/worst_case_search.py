"""Worst-case constellation search over all frames and channels.

A frame of N QPSK symbols yields N normalized channel variances; the
search scans all N * 4**N (frame, channel) cases for the maximum and a
histogram of the distribution.  Multiplying every symbol of a frame by a
constant phase leaves all ratios, hence all variances, unchanged, so the
4**N frames split into 4**(N-1) rotation classes of size 4; enumerating
one representative per class and weighting counts by 4 reproduces the
full scan exactly, including the reported worst case, because the true
frame is reconstructed as the smallest member of the winning class.

Work is cut into fixed-size blocks merged in a worker-independent order,
so results are identical for any --workers value.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ._kernels import get_eval_block
from .core import ConstellationFrame
from .errors import BadTrials, CapExceeded, RangeViolation
from .noise_model import CorrelationModel, correlation_matrix
from .variance_engine import frame_report, shift_table, weight_table

# Default guard: 12 channels is N * 4**N ~ 2e8 cases, minutes of work.
EXHAUSTIVE_CAP = 12

# Reconstructing frame integers uses int64; 4**31 is the last safe power.
_HARD_CAP = 31

_BLOCK = 1 << 14


@dataclass(frozen=True)
class Exhaustive:
    """Enumerate every (frame, channel) case; refuses n_channels > cap."""

    cap: int = EXHAUSTIVE_CAP


@dataclass(frozen=True)
class RandomSample:
    """Sample (frame, channel) cases uniformly at random, reproducibly."""

    count: int
    seed: int = 0

    def __post_init__(self):
        if not (isinstance(self.count, int) and self.count >= 1):
            raise BadTrials(f"sample count must be a positive integer, got {self.count!r}")
        if not (isinstance(self.seed, int) and self.seed >= 0):
            raise RangeViolation("seed", "seed must be a non-negative integer")


@dataclass(frozen=True)
class SearchSpec:
    """What to search: channel count, correlation model, mode, binning."""

    n_channels: int
    model: CorrelationModel = CorrelationModel.PARTIAL
    mode: Exhaustive | RandomSample = field(default_factory=Exhaustive)
    bin_width: float = 0.05

    def __post_init__(self):
        if not (isinstance(self.n_channels, int) and self.n_channels >= 1):
            raise RangeViolation("channels", "channel count must be an integer >= 1")
        if not (isinstance(self.bin_width, (int, float)) and math.isfinite(self.bin_width)
                and self.bin_width > 0):
            raise RangeViolation("bin_width", "bin width must be finite and positive")


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a search: the worst case and the variance histogram.

    counts[i] is the number of cases with trunc(v / bin_width) == i,
    clamped to the [0, n_channels] range of possible values.
    """

    spec: SearchSpec
    total_cases: int
    worst_v: float
    worst_frame: ConstellationFrame
    worst_k: int
    counts: np.ndarray

    def __post_init__(self):
        self.counts.setflags(write=False)

    def bin_lowers(self) -> np.ndarray:
        return np.arange(self.counts.shape[0]) * self.spec.bin_width

    def fraction_above(self, threshold: float) -> float:
        """Fraction of cases in bins whose lower edge is >= threshold.

        Bin-resolution query: cases below threshold inside the straddling
        bin are not split out.
        """
        keep = self.bin_lowers() >= threshold - 1e-12
        return float(self.counts[keep].sum() / self.total_cases)


def _bin_count(n: int, bin_width: float) -> int:
    return max(1, int(math.ceil(n / bin_width)))


def bin_index(v: np.ndarray, bin_width: float, nbins: int) -> np.ndarray:
    """Histogram bin of each value; the single truncation rule of the package."""
    idx = (np.asarray(v) / bin_width).astype(np.int64)
    return np.clip(idx, 0, nbins - 1)


def _digit_columns(ints: np.ndarray, columns: list[int], n: int) -> np.ndarray:
    """Unpack base-4 integers into uint8 digit rows over the given columns."""
    out = np.zeros((ints.shape[0], n), dtype=np.uint8)
    for j, r in enumerate(columns):
        out[:, r] = ((ints >> np.int64(2 * j)) & 3).astype(np.uint8)
    return out


def _rebase(digits: np.ndarray, k: int) -> np.ndarray:
    """Ratio digits relative to channel k, contiguous for the kernels."""
    d = (digits.astype(np.int64) - digits[:, k : k + 1].astype(np.int64)) & 3
    return np.ascontiguousarray(d.astype(np.uint8))


def _class_min_frame(tied: np.ndarray, n: int) -> int:
    """Smallest member frame integer over the rotation classes of tied rows."""
    rows = tied.astype(np.int64)
    powers = np.int64(1) << (2 * np.arange(n, dtype=np.int64))
    best = None
    for g in range(4):
        member = ((rows + g) & 3) @ powers
        best = member if best is None else np.minimum(best, member)
    return int(best.min())


def _min_frame_row(digits: np.ndarray) -> np.ndarray:
    """Row of digits whose frame integer is smallest (any channel count)."""
    order = np.lexsort(tuple(digits[:, r] for r in range(digits.shape[1])))
    return digits[order[0]]


def _frame_int(digit_row: np.ndarray) -> int:
    return sum(int(d) << (2 * r) for r, d in enumerate(digit_row))


class _Best:
    """Mutable maximum tracker with (v desc, frame asc, k asc) ordering."""

    def __init__(self):
        self.v = -math.inf
        self.frame_int = 0
        self.k = 0
        self.empty = True

    def offer(self, v: float, frame_int: int, k: int) -> None:
        if self.empty or v > self.v or (v == self.v and (frame_int, k) < (self.frame_int, self.k)):
            self.v = v
            self.frame_int = frame_int
            self.k = k
            self.empty = False


def _run_units(units, worker, workers: int):
    if workers <= 1:
        return [worker(unit) for unit in units]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, units))


def search(spec: SearchSpec, *, workers: int = 1, reduce_symmetry: bool = True,
           backend: str | None = None) -> SearchResult:
    """Run the search described by spec.

    Parameters
    ----------
    spec : SearchSpec
    workers : int
        Thread count.  Results are byte-identical for any value.
    reduce_symmetry : bool
        Enumerate one frame per rotation class (exhaustive mode only);
        the result is identical to the full scan.
    backend : str or None
        'auto' (default), 'compiled', or 'numpy'.

    Returns
    -------
    SearchResult
    """
    n = spec.n_channels
    kernel = get_eval_block(backend)
    table = weight_table(n)
    corr = np.ascontiguousarray(correlation_matrix(n, spec.model).values)
    nbins = _bin_count(n, spec.bin_width)
    shifts = {k: shift_table(n, k) for k in range(n)}

    if isinstance(spec.mode, Exhaustive):
        if n > spec.mode.cap or n > _HARD_CAP:
            raise CapExceeded(f"exhaustive search over n={n} exceeds the cap of "
                              f"{min(spec.mode.cap, _HARD_CAP)} channels; "
                              f"use RandomSample for large n")
        reduced = reduce_symmetry
        space = 4 ** (n - 1) if reduced else 4**n
        columns_by_k = {k: [r for r in range(n) if r != k] for k in range(n)}

        def exhaustive_unit(unit):
            k, start, stop = unit
            ints = np.arange(start, stop, dtype=np.int64)
            if reduced:
                digits = _digit_columns(ints, columns_by_k[k], n)
            else:
                digits = _digit_columns(ints, list(range(n)), n)
            d = _rebase(digits, k)
            v = kernel(d, shifts[k], table, corr)
            mult = 4 if reduced else 1
            hist = np.bincount(bin_index(v, spec.bin_width, nbins),
                               minlength=nbins) * mult
            vmax = float(v.max())
            tied = np.flatnonzero(v == vmax)
            if reduced:
                frame_int = _class_min_frame(d[tied], n)
            else:
                frame_int = int(start + tied[0])
            return hist, mult * ints.shape[0], vmax, frame_int, k

        units = [(k, start, min(start + _BLOCK, space))
                 for k in range(n) for start in range(0, space, _BLOCK)]
        results = _run_units(units, exhaustive_unit, workers)

    else:
        mode = spec.mode
        n_blocks = (mode.count + _BLOCK - 1) // _BLOCK

        def random_unit(block):
            rows = min(_BLOCK, mode.count - block * _BLOCK)
            rng = _block_rng(mode.seed, block)
            digits = rng.integers(0, 4, size=(rows, n), dtype=np.uint8)
            ks = rng.integers(0, n, size=rows)
            hist = np.zeros(nbins, dtype=np.int64)
            best = _Best()
            for k in np.unique(ks):
                k = int(k)
                sel = np.flatnonzero(ks == k)
                d = _rebase(digits[sel], k)
                v = kernel(d, shifts[k], table, corr)
                hist += np.bincount(bin_index(v, spec.bin_width, nbins),
                                    minlength=nbins)
                vmax = float(v.max())
                tied = np.flatnonzero(v == vmax)
                best.offer(vmax, _frame_int(_min_frame_row(digits[sel][tied])), k)
            return hist, rows, best.v, best.frame_int, best.k

        results = _run_units(list(range(n_blocks)), random_unit, workers)

    counts = np.zeros(nbins, dtype=np.int64)
    total = 0
    best = _Best()
    for hist, cases, vmax, frame_int, k in results:
        counts += hist
        total += cases
        best.offer(vmax, frame_int, k)

    return SearchResult(spec=spec, total_cases=total, worst_v=best.v,
                        worst_frame=ConstellationFrame.from_index(best.frame_int, n),
                        worst_k=best.k, counts=counts)


def _block_rng(seed: int, block: int) -> np.random.Generator:
    # Counter-mode streams: one key per (seed, block), so block contents
    # never depend on which worker draws them.
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, block], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _max_aggregate(n: int, model: CorrelationModel, workers: int,
                   backend: str | None) -> float:
    """Maximum over frames of the summed per-channel variance."""
    kernel = get_eval_block(backend)
    table = weight_table(n)
    corr = np.ascontiguousarray(correlation_matrix(n, model).values)
    shifts = {k: shift_table(n, k) for k in range(n)}
    all_columns = list(range(n))

    def unit(bounds):
        start, stop = bounds
        ints = np.arange(start, stop, dtype=np.int64)
        digits = _digit_columns(ints, all_columns, n)
        agg = np.zeros(ints.shape[0])
        for k in range(n):
            agg += kernel(_rebase(digits, k), shifts[k], table, corr)
        vmax = float(agg.max())
        return vmax, int(start + np.flatnonzero(agg == vmax)[0])

    space = 4**n
    units = [(start, min(start + _BLOCK, space)) for start in range(0, space, _BLOCK)]
    best = _Best()
    for vmax, frame_int in _run_units(units, unit, workers):
        best.offer(vmax, frame_int, 0)
    return best.v


def worst_case_vs_n(n_values, model: CorrelationModel = CorrelationModel.PARTIAL,
                    *, aggregate: bool = False, method: str = "exhaustive",
                    cap: int = EXHAUSTIVE_CAP, workers: int = 1,
                    backend: str | None = None) -> list[tuple[int, float]]:
    """Worst-case variance as a function of channel count.

    method 'exhaustive' searches every case; 'all_equal' evaluates only
    the all-equal frame, which attains the aggregate maximum of exactly
    n (and the per-channel maximum under FULL, where every frame scores
    1).  Under PARTIAL the exhaustive per-channel worst is slightly
    above the all-equal frame's 1.0, so the shortcut understates it.
    aggregate selects the frame sum over channels instead of the single
    worst channel.
    """
    if method not in ("exhaustive", "all_equal"):
        raise ValueError(f"unknown method {method!r}; expected exhaustive or all_equal")
    rows: list[tuple[int, float]] = []
    for n in n_values:
        if method == "all_equal":
            report = frame_report(ConstellationFrame.uniform(n), model)
            value = report.aggregate if aggregate else report.max_channel[1]
        elif aggregate:
            if n > cap or n > _HARD_CAP:
                raise CapExceeded(f"exhaustive sweep over n={n} exceeds the cap of "
                                  f"{min(cap, _HARD_CAP)} channels; "
                                  f"use RandomSample for large n")
            value = _max_aggregate(n, model, workers, backend)
        else:
            value = search(SearchSpec(n_channels=n, model=model,
                                      mode=Exhaustive(cap=cap)),
                           workers=workers, backend=backend).worst_v
        rows.append((n, value))
    return rows
