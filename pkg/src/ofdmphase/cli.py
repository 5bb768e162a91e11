"""Command line interface.

Six subcommands: variance, search, mc, ber-sweep, reach, fit.  Tabular
results go out as CSV with '#' comment lines, single results as JSON
with a provenance field.  Outputs are a pure function of the resolved
parameters and seed; execution details (worker count, kernel backend)
never enter an output file, so reruns are byte-identical.  Exit codes:
0 success, 1 usage or config problems, 2 computation refusals.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from decimal import Decimal, InvalidOperation

from . import __version__
from .ber_analysis import ber_sweep, fit_linewidth, reach
from .core import ConstellationFrame, SystemParams, parse_system_config
from .errors import ConfigError, OfdmPhaseError
from .monte_carlo import (
    PhaseSampler,
    analytic_variance,
    full_demod_phase_error,
    sample_phases,
    taylor_phase_error,
)
from .noise_model import CorrelationModel, symbol_phase_variance
from .variance_engine import frame_report
from .worst_case_search import Exhaustive, RandomSample, SearchSpec, search


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse would exit(2) on bad flags; remap to the usage exit code 1.
    def error(self, message):
        raise _UsageError(message)


def _fail(code: int, message) -> int:
    print(f"ERROR {code}: {message}", file=sys.stderr)
    return code


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as handle:
            handle.write(text)


def _load_config(path: str) -> SystemParams:
    with open(path) as handle:
        return parse_system_config(handle.read())


def _parse_frame(text: str | None, n: int) -> ConstellationFrame:
    if text is None:
        return ConstellationFrame.uniform(n)
    if len(text) != n or any(ch not in "0123" for ch in text):
        raise _UsageError(f"--frame must be {n} base-4 digits, got {text!r}")
    return ConstellationFrame.from_base4(text)


def _provenance(command: str, items: list[tuple[str, object]]) -> str:
    rendered = " ".join(f"{key}={value}" for key, value in items)
    return f"ofdmphase {__version__} {command} {rendered}"


def _params_payload(params: SystemParams) -> dict[str, object]:
    return {
        "channels": params.grid.n_channels,
        "symbol_time_s": params.grid.symbol_time,
        "spacing_hz": params.grid.channel_spacing,
        "linewidth_tx_hz": params.lasers.linewidth_tx,
        "linewidth_lo_hz": params.lasers.linewidth_lo,
        "dispersion_s_m2": params.fiber.dispersion,
        "length_m": params.fiber.length,
        "wavelength_m": params.fiber.wavelength,
        "kind": params.kind.value,
    }


def _params_items(params: SystemParams) -> list[tuple[str, object]]:
    return [(key, repr(value) if isinstance(value, float) else value)
            for key, value in _params_payload(params).items()]


def _log_resolved(params: SystemParams, seed: int | None = None) -> None:
    items = _params_items(params)
    if seed is not None:
        items.append(("seed", seed))
    print("ofdmphase: resolved " + " ".join(f"{k}={v}" for k, v in items),
          file=sys.stderr)


def _bin_edge_text(bin_text: str, index: int) -> str:
    return format((Decimal(bin_text) * index).normalize(), "f")


def _g17(x: float) -> str:
    return format(x, ".17g")


def _cmd_variance(args) -> int:
    params = _load_config(args.config)
    _log_resolved(params)
    n = params.grid.n_channels
    frame = _parse_frame(args.frame, n)
    model = CorrelationModel.from_name(args.correlation)
    report = frame_report(frame, model)
    payload = {
        "provenance": _provenance("variance", _params_items(params) + [
            ("frame", frame.to_base4()), ("model", model.value)]),
        "channels": n,
        "frame": frame.to_base4(),
        "model": model.value,
        "per_channel": list(report.per_channel),
        "aggregate": report.aggregate,
        "max_channel": {"k": report.max_channel[0], "v": report.max_channel[1]},
    }
    _write(args.output, json.dumps(payload, indent=2) + "\n")
    return 0


def _cmd_search(args) -> int:
    model = CorrelationModel.from_name(args.correlation)
    try:
        bin_width = float(Decimal(args.bins))
    except InvalidOperation:
        raise _UsageError(f"--bins must be a number, got {args.bins!r}") from None
    if args.mode == "random":
        if args.samples is None:
            raise _UsageError("--mode random requires --samples")
        mode = RandomSample(count=args.samples, seed=args.seed)
    else:
        mode = Exhaustive()
    spec = SearchSpec(n_channels=args.channels, model=model, mode=mode,
                      bin_width=bin_width)
    result = search(spec, workers=args.workers, reduce_symmetry=args.reduce,
                    backend=args.backend)
    items: list[tuple[str, object]] = [
        ("channels", args.channels), ("model", model.value),
        ("mode", args.mode), ("bins", args.bins)]
    if args.mode == "random":
        items += [("samples", args.samples), ("seed", args.seed)]
    print(f"ofdmphase: searched {result.total_cases} cases", file=sys.stderr)
    worst = {"frame": result.worst_frame.to_base4(), "k": result.worst_k,
             "v": result.worst_v}
    lines = [f"# {_provenance('search', items)}",
             f"# worst {json.dumps(worst)}",
             "bin_lower,count"]
    for index, count in enumerate(result.counts):
        lines.append(f"{_bin_edge_text(args.bins, index)},{count}")
    _write(args.output, "\n".join(lines) + "\n")
    return 0


def _cmd_mc(args) -> int:
    params = _load_config(args.config)
    _log_resolved(params, seed=args.seed)
    n = params.grid.n_channels
    frame = _parse_frame(args.frame, n)
    if not 0 <= args.k < n:
        raise _UsageError(f"--k must be in [0, {n}), got {args.k}")
    model = CorrelationModel.from_name(args.correlation)
    sampler = PhaseSampler.from_name(args.generator)
    sigma2 = symbol_phase_variance(params.grid.symbol_time, params.lasers,
                                   params.fiber).total
    ensemble = sample_phases(n, sigma2, args.trials, sampler=sampler,
                             model=model, seed=args.seed, workers=args.workers)
    taylor = taylor_phase_error(ensemble, frame, args.k)
    full = full_demod_phase_error(ensemble, frame, args.k)
    payload = {
        "provenance": _provenance("mc", _params_items(params) + [
            ("frame", frame.to_base4()), ("k", args.k), ("model", model.value),
            ("generator", sampler.value), ("trials", args.trials),
            ("seed", args.seed)]),
        "channels": n,
        "frame": frame.to_base4(),
        "k": args.k,
        "model": model.value if sampler is PhaseSampler.CORRELATION_MATRIX else None,
        "generator": sampler.value,
        "sigma2": sigma2,
        "analytic": analytic_variance(ensemble, frame, args.k),
        "mc_taylor": taylor.variance,
        "mc_full": full.variance,
        "std_errors": {"taylor": taylor.std_error, "full": full.std_error},
        "trials": args.trials,
        "excluded_full": full.excluded,
        "clipped_mass": ensemble.clipped_mass,
    }
    _write(args.output, json.dumps(payload, indent=2) + "\n")
    return 0


def _sweep_lengths_km(args) -> list[float]:
    if args.lengths_km is not None:
        try:
            values = [float(part) for part in args.lengths_km.split(",") if part.strip()]
        except ValueError:
            raise _UsageError(f"--lengths-km must be comma-separated numbers, "
                              f"got {args.lengths_km!r}") from None
        if not values:
            raise _UsageError("--lengths-km is empty")
        return values
    if args.step_km <= 0:
        raise _UsageError("--step-km must be positive")
    if args.stop_km < args.start_km:
        raise _UsageError("--stop-km must not be below --start-km")
    count = int(math.floor((args.stop_km - args.start_km) / args.step_km + 1e-9)) + 1
    return [args.start_km + i * args.step_km for i in range(count)]


def _cmd_ber_sweep(args) -> int:
    params = _load_config(args.config)
    _log_resolved(params)
    lengths_km = _sweep_lengths_km(args)
    points = ber_sweep(params, [km * 1e3 for km in lengths_km])
    lines = [f"# {_provenance('ber-sweep', _params_items(params))}",
             "length_km,sigma2_rad2,ber_floor"]
    for km, point in zip(lengths_km, points):
        lines.append(f"{_g17(km)},{_g17(point.sigma2)},{_g17(point.ber_floor)}")
    _write(args.output, "\n".join(lines) + "\n")
    return 0


def _cmd_reach(args) -> int:
    params = _load_config(args.config)
    _log_resolved(params)
    result = reach(params, target_ber=args.target_ber,
                   include_intrinsic=args.include_intrinsic)
    payload = {
        "provenance": _provenance("reach", _params_items(params) + [
            ("target_ber", repr(args.target_ber)),
            ("include_intrinsic", args.include_intrinsic)]),
        "anchor": _params_payload(params),
        "target_ber": args.target_ber,
        "include_intrinsic": args.include_intrinsic,
        "finite": result.finite,
        "reach_m": result.length if result.finite else None,
        "reach_km": result.length / 1e3 if result.finite else None,
    }
    _write(args.output, json.dumps(payload, indent=2) + "\n")
    return 0


def _cmd_fit(args) -> int:
    params = _load_config(args.config)
    _log_resolved(params)
    if args.anchor_km <= 0 or not math.isfinite(args.anchor_km):
        raise _UsageError(f"--anchor-km must be positive, got {args.anchor_km!r}")
    linewidth = fit_linewidth(params, args.anchor_km * 1e3,
                              target_ber=args.target_ber,
                              assume_equal=args.assume_equal)
    payload = {
        "provenance": _provenance("fit", _params_items(params) + [
            ("anchor_km", repr(args.anchor_km)),
            ("target_ber", repr(args.target_ber)),
            ("assume_equal", args.assume_equal)]),
        "anchor": dict(_params_payload(params), anchor_km=args.anchor_km),
        "anchor_km": args.anchor_km,
        "target_ber": args.target_ber,
        "assume_equal": args.assume_equal,
        "linewidth_hz": linewidth,
    }
    _write(args.output, json.dumps(payload, indent=2) + "\n")
    return 0


def _add_output(parser) -> None:
    parser.add_argument("--output", help="write to this file instead of stdout")


def _add_correlation(parser) -> None:
    parser.add_argument("--correlation", choices=["full", "partial", "none"],
                        default="partial", help="channel correlation model")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ofdmphase",
                     description="Laser phase noise penalties in coherent "
                                 "optical OFDM")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("variance", help="per-channel variance report for one frame")
    p.add_argument("--config", required=True, help="system config file")
    p.add_argument("--frame", help="base-4 frame string (default: all zeros)")
    _add_correlation(p)
    _add_output(p)
    p.set_defaults(func=_cmd_variance)

    p = sub.add_parser("search", help="worst-case search over frames and channels")
    p.add_argument("--channels", type=int, required=True)
    _add_correlation(p)
    p.add_argument("--bins", default="0.05", help="histogram bin width")
    p.add_argument("--mode", choices=["exhaustive", "random"], default="exhaustive")
    p.add_argument("--samples", type=int, help="random mode: number of cases")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--reduce", action=argparse.BooleanOptionalAction, default=True,
                   help="enumerate one frame per rotation class")
    p.add_argument("--backend", choices=["auto", "compiled", "numpy"], default="auto")
    _add_output(p)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("mc", help="Monte Carlo check of the closed form")
    p.add_argument("--config", required=True)
    p.add_argument("--frame", help="base-4 frame string (default: all zeros)")
    p.add_argument("--k", type=int, default=0, help="observed channel")
    _add_correlation(p)
    p.add_argument("--generator", choices=["matrix", "overlap"], default="matrix")
    p.add_argument("--trials", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    _add_output(p)
    p.set_defaults(func=_cmd_mc)

    p = sub.add_parser("ber-sweep", help="BER floor vs fiber length")
    p.add_argument("--config", required=True)
    p.add_argument("--start-km", type=float, default=0.0)
    p.add_argument("--stop-km", type=float, default=2000.0)
    p.add_argument("--step-km", type=float, default=25.0)
    p.add_argument("--lengths-km", help="comma-separated list, overrides the range")
    _add_output(p)
    p.set_defaults(func=_cmd_ber_sweep)

    p = sub.add_parser("reach", help="longest length meeting a BER-floor target")
    p.add_argument("--config", required=True)
    p.add_argument("--target-ber", type=float, default=0.01)
    p.add_argument("--include-intrinsic", action=argparse.BooleanOptionalAction,
                   default=True)
    _add_output(p)
    p.set_defaults(func=_cmd_reach)

    p = sub.add_parser("fit", help="linewidth consistent with a known reach")
    p.add_argument("--config", required=True)
    p.add_argument("--anchor-km", type=float, required=True)
    p.add_argument("--target-ber", type=float, default=0.01)
    p.add_argument("--assume-equal", action=argparse.BooleanOptionalAction,
                   default=True, help="fit both linewidths to the same value")
    _add_output(p)
    p.set_defaults(func=_cmd_fit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as err:
        return _fail(1, err)
    except ConfigError as err:
        return _fail(1, err)
    except OSError as err:
        return _fail(1, err)
    except OfdmPhaseError as err:
        return _fail(2, err)
