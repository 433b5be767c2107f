"""Command-line entry point, config parsing, and result serialization.

Subcommands:
    sweep    (default) run the Monte-Carlo SER sweep and write CSV/JSON
    certify  run the continuous-time model certification and report errors
    oracle   print the analytical synchronous SER table
    corr     print partial-autocorrelation tables for the chip waveforms

Exit status: 0 success, 1 runtime/I-O failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .continuous_time import certify_discrete_model
from .montecarlo import SerEstimate, analytical_ser_sync, run_sweep, snr_axis
from .waveforms import (
    WAVEFORM_TOKENS,
    autocorr_overlapped,
    autocorr_overlapped_quad,
    autocorr_overlapping,
    autocorr_overlapping_quad,
    waveform_from_token,
)

__all__ = [
    "SweepConfig",
    "ResultRecord",
    "parse_config",
    "records_from_estimates",
    "write_results",
    "main",
]

SUBCOMMANDS = ("sweep", "certify", "oracle", "corr")
WORKERS_ENV_VAR = "QSLORA_WORKERS"

_DEFAULTS = {
    "sf": "4,5,6,7",
    "waveform": "rect,rc",
    "delta-s": "0,0.2,0.4,0.6,0.8,1",
    "snr": "-4:24:2",
    "trials-max": "1000000",
    "min-errors": "100",
    "seed": "1",
    "workers": "1",
    "fixed-delta": None,
    "output": "ser_results.csv",
    "format": "csv",
}

_CSV_COLUMNS = (
    "sf",
    "waveform",
    "delta_s",
    "snr_db",
    "trials",
    "errors",
    "ser",
    "ci_low",
    "ci_high",
    "seed",
    "elapsed_s",
)


@dataclass(frozen=True)
class SweepConfig:
    """Fully resolved sweep parameters (defaults span the full grid)."""

    sf_list: tuple[int, ...] = (4, 5, 6, 7)
    waveforms: tuple[str, ...] = ("rect", "rc")
    delta_s_list: tuple[float, ...] = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
    snr_start_db: float = -4.0
    snr_stop_db: float = 24.0
    snr_step_db: float = 2.0
    trials_max: int = 1_000_000
    min_errors: int = 100
    master_seed: int = 1
    workers: int = 1
    fixed_delta: Optional[float] = None
    output_path: str = "ser_results.csv"
    format: str = "csv"
    record_timing: bool = False


@dataclass(frozen=True)
class ResultRecord:
    """One output row plus non-serialized provenance fields."""

    sf: int
    waveform: str
    delta_s: float
    snr_db: float
    trials: int
    errors: int
    ser: float
    ci_low: float
    ci_high: float
    seed: int
    elapsed_s: float
    trials_max: int = 0
    min_errors: int = 0
    version: str = __version__


def _split_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _parse_config_file(text: str, error) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            error(f"config line {lineno} is not key=value: {raw.strip()!r}")
        key, val = line.split("=", 1)
        key = key.strip().lower().replace("_", "-")
        if key not in _DEFAULTS:
            error(f"unknown config key: {key}")
        values[key] = val.strip()
    return values


def _build_sweep_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qslora sweep",
        description="Monte-Carlo SER sweep over (sf, waveform, delta-s, snr).",
    )
    p.add_argument("--sf", help="comma-separated spreading factors (default 4,5,6,7)")
    p.add_argument("-w", "--waveform", help="comma-separated chip waveforms: rect,rc")
    p.add_argument("--delta-s", dest="delta_s", help="comma-separated max offsets in [0,1]")
    p.add_argument("--snr", help="SNR axis in dB as start:stop:step (inclusive stop)")
    p.add_argument("--trials-max", dest="trials_max", help="max trials per grid point")
    p.add_argument("--min-errors", dest="min_errors", help="early-stop error count (0 disables)")
    p.add_argument("--seed", help="master seed for all random streams")
    p.add_argument("--workers", help=f"process count (env {WORKERS_ENV_VAR} overrides config file)")
    p.add_argument("--fixed-delta", dest="fixed_delta", help="pin the per-trial offset, |delta| <= 0.5")
    p.add_argument("-o", "--output", help="output file path")
    p.add_argument("--format", help="output format: csv or json")
    p.add_argument("--config", help="key=value config file ('#' comments allowed)")
    p.add_argument(
        "--record-timing",
        dest="record_timing",
        action="store_true",
        default=False,
        help="write wall-clock elapsed_s (off by default to keep output deterministic)",
    )
    return p


def parse_config(argv: Sequence[str], config_text: Optional[str] = None) -> SweepConfig:
    """Resolve a SweepConfig from flags, environment, and config file.

    Precedence: CLI flags > QSLORA_WORKERS (workers only) > config file >
    built-in defaults. config_text, when given, is used as the config file
    content; otherwise --config names a file to read.
    """
    parser = _build_sweep_parser()
    ns = parser.parse_args(list(argv))
    if config_text is None and ns.config:
        try:
            with open(ns.config, "r", encoding="utf-8") as fh:
                config_text = fh.read()
        except OSError as exc:
            parser.error(f"cannot read config file: {exc}")
    file_vals = _parse_config_file(config_text, parser.error) if config_text else {}

    def resolve(key: str, flag_value: Optional[str], env_value: Optional[str] = None) -> Optional[str]:
        if flag_value is not None:
            return flag_value
        if env_value is not None:
            return env_value
        if key in file_vals:
            return file_vals[key]
        return _DEFAULTS[key]

    def fail(field: str, raw: str, reason: str):
        parser.error(f"invalid {field} value {raw!r}: {reason}")

    def parse_int(field: str, raw: str, minimum: Optional[int] = None) -> int:
        try:
            value = int(raw)
        except ValueError:
            fail(field, raw, "not an integer")
        if minimum is not None and value < minimum:
            fail(field, raw, f"must be >= {minimum}")
        return value

    def parse_float(field: str, raw: str) -> float:
        try:
            return float(raw)
        except ValueError:
            fail(field, raw, "not a number")

    raw_sf = resolve("sf", ns.sf)
    sf_list = tuple(parse_int("sf", item) for item in _split_list(raw_sf))
    if not sf_list:
        fail("sf", raw_sf, "empty list")
    for sf in sf_list:
        if not 2 <= sf <= 12:
            fail("sf", str(sf), "must be in [2, 12]")

    raw_wf = resolve("waveform", ns.waveform)
    waveforms = tuple(_split_list(raw_wf))
    if not waveforms:
        fail("waveform", raw_wf, "empty list")
    for tok in waveforms:
        if tok not in WAVEFORM_TOKENS:
            fail("waveform", tok, f"expected one of {', '.join(WAVEFORM_TOKENS)}")

    raw_ds = resolve("delta-s", ns.delta_s)
    delta_s_list = tuple(parse_float("delta-s", item) for item in _split_list(raw_ds))
    if not delta_s_list:
        fail("delta-s", raw_ds, "empty list")
    for ds in delta_s_list:
        if not 0.0 <= ds <= 1.0:
            fail("delta-s", str(ds), "must be in [0, 1]")

    raw_snr = resolve("snr", ns.snr)
    parts = raw_snr.split(":")
    if len(parts) != 3:
        fail("snr", raw_snr, "expected start:stop:step")
    snr_start, snr_stop, snr_step = (parse_float("snr", part) for part in parts)
    if snr_step <= 0:
        fail("snr", raw_snr, "step must be > 0")
    if snr_stop < snr_start:
        fail("snr", raw_snr, "stop is below start")

    trials_max = parse_int("trials-max", resolve("trials-max", ns.trials_max), minimum=1)
    min_errors = parse_int("min-errors", resolve("min-errors", ns.min_errors), minimum=0)
    seed = parse_int("seed", resolve("seed", ns.seed))
    env_workers = os.environ.get(WORKERS_ENV_VAR)
    workers = parse_int("workers", resolve("workers", ns.workers, env_workers), minimum=1)

    raw_fixed = resolve("fixed-delta", ns.fixed_delta)
    fixed_delta = None
    if raw_fixed is not None:
        fixed_delta = parse_float("fixed-delta", raw_fixed)
        if abs(fixed_delta) > 0.5:
            fail("fixed-delta", raw_fixed, "magnitude must be <= 0.5")

    output_path = resolve("output", ns.output)
    fmt = resolve("format", ns.format)
    if fmt not in ("csv", "json"):
        fail("format", fmt, "expected csv or json")

    return SweepConfig(
        sf_list=sf_list,
        waveforms=waveforms,
        delta_s_list=delta_s_list,
        snr_start_db=snr_start,
        snr_stop_db=snr_stop,
        snr_step_db=snr_step,
        trials_max=trials_max,
        min_errors=min_errors,
        master_seed=seed,
        workers=workers,
        fixed_delta=fixed_delta,
        output_path=output_path,
        format=fmt,
        record_timing=bool(ns.record_timing),
    )


def records_from_estimates(
    estimates: Sequence[SerEstimate], config: SweepConfig
) -> list[ResultRecord]:
    return [
        ResultRecord(
            sf=est.point.sf,
            waveform=est.point.waveform.kind,
            delta_s=est.point.delta_s,
            snr_db=est.point.snr_db,
            trials=est.trials,
            errors=est.errors,
            ser=est.ser,
            ci_low=est.ci_low,
            ci_high=est.ci_high,
            seed=est.seed,
            elapsed_s=est.elapsed if config.record_timing else 0.0,
            trials_max=config.trials_max,
            min_errors=config.min_errors,
        )
        for est in estimates
    ]


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_results(records: Sequence[ResultRecord], path: str, format: str = "csv") -> None:
    """Write records as CSV (fixed 11-column schema) or a JSON array.

    Floats are serialized with shortest round-trip precision, so parsing a
    file and re-serializing it reproduces it byte for byte.
    """
    if not records:
        raise ValueError("no records to write")
    if format == "csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(_CSV_COLUMNS)
            for rec in records:
                writer.writerow([_cell(getattr(rec, col)) for col in _CSV_COLUMNS])
    elif format == "json":
        payload = [{col: getattr(rec, col) for col in _CSV_COLUMNS} for rec in records]
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    else:
        raise ValueError(f"unknown output format {format!r}")


def _cmd_sweep(argv: Sequence[str]) -> int:
    config = parse_config(argv)

    def progress(done: int, total: int, est: SerEstimate) -> None:
        pt = est.point
        print(
            f"[{done}/{total}] sf={pt.sf} waveform={pt.waveform.kind} "
            f"delta_s={pt.delta_s:g} snr_db={pt.snr_db:g} "
            f"ser={est.ser:.3e} errors={est.errors} trials={est.trials}",
            file=sys.stderr,
            flush=True,
        )

    estimates = run_sweep(config, progress=progress)
    records = records_from_estimates(estimates, config)
    write_results(records, config.output_path, config.format)
    print(f"wrote {len(records)} records to {config.output_path}", file=sys.stderr)
    return 0


def _cmd_certify(argv: Sequence[str]) -> int:
    p = argparse.ArgumentParser(
        prog="qslora certify",
        description="Certify the chip-rate model against the continuous-time reference.",
    )
    p.add_argument("--sf", default="4", help="comma-separated spreading factors")
    p.add_argument("-w", "--waveform", default="rect,rc", help="comma-separated waveforms")
    p.add_argument("--trials", type=int, default=100, help="random realizations per combination")
    p.add_argument("--delta-s", dest="delta_s", type=float, default=1.0, help="max offset in [0,1]")
    p.add_argument("--oversampling", type=int, default=64, help="samples per chip (>= 64)")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--tolerance", type=float, default=1e-6)
    ns = p.parse_args(list(argv))
    failures = 0
    for sf_text in _split_list(ns.sf):
        sf = int(sf_text)
        for wi, tok in enumerate(_split_list(ns.waveform)):
            wf = waveform_from_token(tok)
            rng = np.random.default_rng(np.random.SeedSequence(ns.seed, spawn_key=(sf, wi)))
            err = certify_discrete_model(
                sf, wf, ns.trials, rng,
                delta_s=ns.delta_s, oversampling=ns.oversampling,
            )
            ok = err < ns.tolerance
            failures += 0 if ok else 1
            print(
                f"sf={sf} waveform={tok} trials={ns.trials} "
                f"max_abs_error={err:.3e} {'PASS' if ok else 'FAIL'}"
            )
    return 0 if failures == 0 else 1


def _cmd_oracle(argv: Sequence[str]) -> int:
    p = argparse.ArgumentParser(
        prog="qslora oracle",
        description="Analytical synchronous SER table (noncoherent M-ary orthogonal).",
    )
    p.add_argument("--sf", default="4,5,6,7", help="comma-separated spreading factors")
    p.add_argument("--snr", default="-4:24:2", help="SNR axis start:stop:step in dB")
    ns = p.parse_args(list(argv))
    start, stop, step = (float(part) for part in ns.snr.split(":"))
    print("sf snr_db ser")
    for sf_text in _split_list(ns.sf):
        sf = int(sf_text)
        for snr in snr_axis(start, stop, step):
            print(f"{sf} {snr:g} {analytical_ser_sync(sf, snr)!r}")
    return 0


def _cmd_corr(argv: Sequence[str]) -> int:
    p = argparse.ArgumentParser(
        prog="qslora corr",
        description="Partial autocorrelation tables R(delta), Rhat(delta).",
    )
    p.add_argument("-w", "--waveform", default="rect,rc", help="comma-separated waveforms")
    p.add_argument("--steps", type=int, default=21, help="number of offsets on [0, 1]")
    p.add_argument(
        "--quad", action="store_true",
        help="print quadrature reference values instead of closed forms",
    )
    ns = p.parse_args(list(argv))
    if ns.steps < 2:
        p.error("steps must be >= 2")
    print("waveform delta overlapping overlapped")
    for tok in _split_list(ns.waveform):
        wf = waveform_from_token(tok)
        for i in range(ns.steps):
            d = i / (ns.steps - 1)
            if ns.quad:
                keep = autocorr_overlapping_quad(wf, d)
                spill = autocorr_overlapped_quad(wf, d)
            else:
                keep = autocorr_overlapping(wf, d)
                spill = autocorr_overlapped(wf, d)
            print(f"{tok} {d:g} {keep!r} {spill!r}")
    return 0


_DISPATCH = {
    "sweep": _cmd_sweep,
    "certify": _cmd_certify,
    "oracle": _cmd_oracle,
    "corr": _cmd_corr,
}

_TOP_HELP = """usage: qslora [subcommand] [options]

subcommands:
  sweep    Monte-Carlo SER sweep (default when no subcommand is given)
  certify  continuous-time model certification report
  oracle   analytical synchronous SER table
  corr     chip-waveform partial autocorrelation tables

Run 'qslora <subcommand> --help' for per-command options.
"""


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = list(sys.argv[1:]) if argv is None else list(argv)
    if args and args[0] in SUBCOMMANDS:
        command, rest = args[0], args[1:]
    elif args and args[0] in ("-h", "--help"):
        print(_TOP_HELP, end="")
        return 0
    else:
        command, rest = "sweep", args
    try:
        return _DISPATCH[command](rest)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
