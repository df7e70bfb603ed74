"""Command-line front end.

Subcommands ``describe``, ``dfa``, ``spectral``, ``seasonal``, ``generate``
and ``report``. Results go to stdout as JSON (CSV for ``generate``); with
``--out-dir`` plot-ready CSV files are written as well. Errors are printed
to stderr as one JSON object and the exit status is non-zero.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .core import GapPolicy, IngestConfig, TimeSeries, first_difference, load_csv, slice_calendar, to_csv
from .errors import ConfigError, DegenerateError, InsufficientDataError, LrdError
from .generators import GeneratorSpec, Kind, generate
from .mfdfa import MfdfaConfig, detect_crossover, fit_scaling, fluctuation_function, generalized_hurst, hurst
from .seasonal import PeriodKind, seasonal_profile
from .serialize import dumps
from .spectral import acf, smoothed_periodogram
from .stats import adf_test, describe, jarque_bera, kpss_test

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

DEFAULT_Q_LIST = "-4,-2,-1,0,1,2,4"


class StageError(Exception):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _column(text: str) -> str | int:
    return int(text) if text.isdigit() else text


# ---------------------------------------------------------------- options


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="CSV file with a header row, or '-' for stdin")
    p.add_argument("--gaps", choices=[g.value for g in GapPolicy], default=GapPolicy.DROP_AND_FLAG.value)
    p.add_argument("--timestamp-col", type=_column, default=0)
    p.add_argument("--value-col", type=_column, default=1)
    p.add_argument("--delimiter", default=",")


def _add_tests(p: argparse.ArgumentParser) -> None:
    p.add_argument("--adf-lags", type=int, default=50)
    p.add_argument("--kpss-bandwidth", type=int, default=50)


def _add_dfa(p: argparse.ArgumentParser) -> None:
    p.add_argument("--s-min", type=int, default=6)
    p.add_argument("--s-max", type=int, default=None, help="default T/4")
    p.add_argument("--scale-count", type=int, default=40)
    p.add_argument("--detrend-order", type=int, default=1)
    p.add_argument("--q-list", type=_floats, default=_floats(DEFAULT_Q_LIST), help=f"default {DEFAULT_Q_LIST}")
    p.add_argument("--crossover", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--per-year", action=argparse.BooleanOptionalAction, default=False)
    p.add_argument("--forced-splits", type=_ints, default=[36, 72])


def _add_spectral(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-lag", type=int, default=500)
    p.add_argument("--bandwidth", type=int, default=None, help="default round(0.1 T)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lrdkit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"lrdkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("describe", help="descriptive statistics and JB/ADF/KPSS tests")
    _add_input(p)
    _add_tests(p)
    p.add_argument("--diff", action="store_true", help="also analyse first differences")

    p = sub.add_parser("dfa", help="fluctuation function, Hurst fits and crossover")
    _add_input(p)
    _add_dfa(p)
    p.add_argument("--out-dir", type=Path)

    p = sub.add_parser("spectral", help="autocorrelation and smoothed periodogram")
    _add_input(p)
    _add_spectral(p)
    p.add_argument("--out-dir", type=Path)

    p = sub.add_parser("seasonal", help="hour/day/week/month profiles")
    _add_input(p)
    p.add_argument("--kind", choices=[k.value for k in PeriodKind], action="append")
    p.add_argument("--out-dir", type=Path)

    p = sub.add_parser("generate", help="synthetic series as timestamp,value CSV")
    p.add_argument("--kind", choices=[k.value for k in Kind], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--h", "--hurst", dest="hurst", type=float, default=0.5)
    p.add_argument("--phi", type=float, default=0.5)
    p.add_argument("--period", type=float, default=24.0)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--p", type=float, default=0.7)
    p.add_argument("--spacing", type=int, default=3600)
    p.add_argument("--output", type=Path, help="write here instead of stdout")

    p = sub.add_parser("report", help="full analysis into an output directory")
    _add_input(p)
    _add_tests(p)
    _add_dfa(p)
    _add_spectral(p)
    p.add_argument("--out-dir", type=Path, required=True)
    p.add_argument("--config", type=Path, help="JSON config, or a previous report.json whose config is reused")
    return parser


# ---------------------------------------------------------------- helpers


def _read_input(args) -> tuple[TimeSeries, dict]:
    cfg = IngestConfig(args.timestamp_col, args.value_col, args.delimiter, GapPolicy(args.gaps))
    if args.input == "-":
        raw = sys.stdin.buffer.read()
    else:
        raw = Path(args.input).read_bytes()
    series = load_csv(io.BytesIO(raw), cfg)
    span = series.span
    digest = {
        "path": args.input,
        "sha256": hashlib.sha256(raw).hexdigest(),
        "T": len(series),
        "span": [span[0], span[1]],
        "gap_count": len(series.gaps),
        "gaps_filled": series.gaps_filled,
    }
    return series, digest


def _guard(report: dict, name: str, fn, *args):
    try:
        report[name] = fn(*args).to_dict()
    except (DegenerateError, InsufficientDataError) as exc:
        report[name] = {"test": name, "degenerate": True, "error": str(exc)}


def _battery(series: TimeSeries, adf_lags: int, kpss_bw: int) -> dict:
    out: dict = {}
    try:
        out["stats"] = describe(series).to_dict()
    except InsufficientDataError as exc:
        out["stats"] = {"degenerate": True, "error": str(exc)}
    tests: dict = {}
    _guard(tests, "jarque_bera", jarque_bera, series)
    _guard(tests, "adf", adf_test, series, adf_lags)
    _guard(tests, "kpss", kpss_test, series, kpss_bw)
    out["tests"] = tests
    return out


def _mfdfa_config(args, q_list=None) -> MfdfaConfig:
    return MfdfaConfig(
        s_min=args.s_min,
        s_max=args.s_max,
        scale_count=args.scale_count,
        detrend_order=args.detrend_order,
        q_list=tuple(args.q_list if q_list is None else q_list),
    )


def _with_q2(q_list) -> list[float]:
    q = [float(v) for v in q_list]
    return q if 2.0 in q else q + [2.0]


def _dfa_block(series: TimeSeries, args, files: dict, prefix: str = "") -> dict:
    cfg = _mfdfa_config(args, _with_q2(args.q_list))
    curve = fluctuation_function(series, cfg)
    block: dict = {"T": len(series), "scales": curve.scales.tolist()}
    files[f"{prefix}fluctuation.csv"] = curve.to_csv()
    files[f"{prefix}scaling_q2.csv"] = curve.plot_csv(2.0)
    full = fit_scaling(curve, 2.0)
    block["fit_full"] = full.to_dict()
    selected = full
    if args.crossover:
        if curve.scales.size >= 10:
            cross = detect_crossover(curve, 2.0, forced_splits=args.forced_splits)
            block["crossover"] = cross.to_dict()
            if cross.material:
                selected = cross.fit_below
        else:
            block["crossover"] = None
    block["regime"] = "two-regime" if selected is not full else "single-regime"
    block["hurst"] = hurst(series, replace(cfg, q_list=(2.0,)), use_crossover=args.crossover).to_dict()
    lo, hi = selected.scale_range
    block["generalized_hurst"] = [fit.to_dict() for fit in generalized_hurst(curve, lo, hi).values()]
    return block


def _per_year(series: TimeSeries, args, files: dict) -> list:
    out = []
    for year in series.years():
        part = slice_calendar(series, year)
        entry: dict = {"year": year, "T": len(part)}
        try:
            yargs = argparse.Namespace(**vars(args))
            if args.s_max is not None:
                yargs.s_max = min(args.s_max, len(part) // 4)
            entry.update(_dfa_block(part, yargs, files, prefix=f"year{year}_"))
        except (ConfigError, InsufficientDataError, DegenerateError) as exc:
            entry["skipped"] = str(exc)
        out.append(entry)
    return out


def _write_files(out_dir: Path | None, files: dict) -> None:
    if out_dir is None:
        return
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out_dir / name).write_text(text)


def _emit(obj) -> None:
    sys.stdout.write(dumps(obj))


# ---------------------------------------------------------------- commands


def cmd_describe(args) -> int:
    series, digest = _read_input(args)
    out = {"input": digest, "levels": _battery(series, args.adf_lags, args.kpss_bandwidth)}
    if args.diff:
        out["differences"] = _battery(first_difference(series), args.adf_lags, args.kpss_bandwidth)
    _emit(out)
    return EXIT_OK


def cmd_dfa(args) -> int:
    series, digest = _read_input(args)
    files: dict = {}
    try:
        out = {"input": digest, "dfa": _dfa_block(series, args, files)}
    except ConfigError as exc:
        raise StageError("config", exc) from exc
    if args.per_year:
        out["per_year"] = _per_year(series, args, files)
    _write_files(args.out_dir, files)
    _emit(out)
    return EXIT_OK


def cmd_spectral(args) -> int:
    series, digest = _read_input(args)
    max_lag = min(args.max_lag, len(series) - 1)
    a = acf(series, max_lag)
    spec = smoothed_periodogram(series, args.bandwidth)
    peak = int(spec.density.argmax())
    _emit(
        {
            "input": digest,
            "acf_max_lag": max_lag,
            "bandwidth": spec.bandwidth,
            "peak_frequency": float(spec.frequencies[peak]),
            "peak_period": float(2 * 3.141592653589793 / spec.frequencies[peak]),
        }
    )
    _write_files(args.out_dir, {"acf.csv": a.to_csv(), "spectrum.csv": spec.to_csv()})
    return EXIT_OK


def cmd_seasonal(args) -> int:
    series, digest = _read_input(args)
    kinds = args.kind or [k.value for k in PeriodKind]
    profiles = {k: seasonal_profile(series, k) for k in kinds}
    _emit({"input": digest, "profiles": {k: p.to_dict() for k, p in profiles.items()}})
    _write_files(args.out_dir, {f"seasonal_{k}.csv": p.to_csv() for k, p in profiles.items()})
    return EXIT_OK


def cmd_generate(args) -> int:
    spec = GeneratorSpec(
        kind=args.kind,
        n=args.n,
        seed=args.seed,
        hurst=args.hurst,
        phi=args.phi,
        period=args.period,
        amplitude=args.amplitude,
        p=args.p,
        spacing=args.spacing,
    )
    text = to_csv(generate(spec))
    if args.output:
        args.output.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# keys echoed in report["config"]; --config restores them
REPORT_KEYS = (
    "gaps", "timestamp_col", "value_col", "delimiter", "adf_lags", "kpss_bandwidth",
    "s_min", "s_max", "scale_count", "detrend_order", "q_list", "crossover", "per_year",
    "forced_splits", "max_lag", "bandwidth",
)


def _stage(name: str, fn, *args):
    try:
        return fn(*args)
    except (LrdError, OSError) as exc:
        raise StageError(name, exc) from exc


def cmd_report(args) -> int:
    series, digest = _stage("ingest", _read_input, args)
    config = {key: getattr(args, key) for key in REPORT_KEYS}
    files: dict = {}
    report: dict = {"tool": "lrdkit", "version": __version__, "config": config, "input": digest}
    report["levels"] = _stage("tests", _battery, series, args.adf_lags, args.kpss_bandwidth)
    diff = _stage("tests", first_difference, series)
    report["differences"] = _stage("tests", _battery, diff, args.adf_lags, args.kpss_bandwidth)
    report["dfa"] = _stage("dfa", _dfa_block, series, args, files)
    if args.per_year:
        report["per_year"] = _stage("per-year", _per_year, series, args, files)

    def spectral_stage():
        a = acf(series, min(args.max_lag, len(series) - 1))
        spec = smoothed_periodogram(series, args.bandwidth)
        files["acf.csv"] = a.to_csv()
        files["spectrum.csv"] = spec.to_csv()
        peak = int(spec.density.argmax())
        return {"bandwidth": spec.bandwidth, "peak_frequency": float(spec.frequencies[peak])}

    report["spectral"] = _stage("spectral", spectral_stage)

    def seasonal_stage():
        out = {}
        for kind in PeriodKind:
            prof = seasonal_profile(series, kind)
            files[f"seasonal_{kind.value}.csv"] = prof.to_csv()
            out[kind.value] = prof.to_dict()
        return out

    report["seasonal"] = _stage("seasonal", seasonal_stage)
    files["report.json"] = dumps(report)
    try:
        _write_files(args.out_dir, files)
    except OSError as exc:
        raise StageError("write", exc) from exc
    _emit({"out_dir": str(args.out_dir), "files": sorted(files)})
    return EXIT_OK


COMMANDS = {
    "describe": cmd_describe,
    "dfa": cmd_dfa,
    "spectral": cmd_spectral,
    "seasonal": cmd_seasonal,
    "generate": cmd_generate,
    "report": cmd_report,
}


def _load_config(path: Path) -> dict:
    data = json.loads(path.read_text())
    if "config" in data and isinstance(data["config"], dict):
        data = data["config"]
    unknown = set(data) - set(REPORT_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return data


def _error(kind: str, message: str, stage: str | None = None) -> None:
    payload = {"error": kind, "message": message}
    if stage:
        payload["stage"] = stage
    sys.stderr.write(json.dumps(payload) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None) is not None:
        # the config file provides defaults; flags given explicitly still win
        try:
            defaults = _load_config(args.config)
        except (OSError, ValueError) as exc:
            _error(type(exc).__name__, str(exc), "config")
            return EXIT_USAGE
        sub = parser._subparsers._group_actions[0].choices[args.command]
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except StageError as exc:
        code = EXIT_USAGE if isinstance(exc.cause, ConfigError) else EXIT_FAILURE
        _error(type(exc.cause).__name__, str(exc.cause), exc.stage)
        return code
    except ConfigError as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_USAGE
    except (LrdError, OSError) as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
