"""Monte-Carlo SER estimation over the (sf, waveform, delta_s, snr) grid.

Reproducibility contract: every trial outcome is a pure function of
(master_seed, grid point, trial_index). Trials are grouped into fixed-size
chunks; each chunk gets an independent counter-based stream seeded by
SeedSequence(master_seed, spawn_key=(point_hash..., chunk_index)) where
point_hash is derived from the point's own coordinates. A chunk always
draws full-size arrays in a fixed order (x_prev, x_cur, x_next, offsets,
noise), so truncating at max_trials or stopping early never shifts the
stream, and results are identical for any worker count. Adding or removing
other grid points cannot change a point's estimate because nothing but the
point's coordinates enters its seed derivation.
"""

from __future__ import annotations

import hashlib
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import mpmath as mp
import numpy as np

from .channel import synthesize_chip_rows
from .modulation import symbol_cardinality, validate_sf
from .receiver import dechirp_vector
from .waveforms import ChipWaveform, waveform_from_token

__all__ = [
    "TRIALS_PER_CHUNK",
    "GridPoint",
    "StoppingRule",
    "SerEstimate",
    "wilson_interval",
    "analytical_ser_sync",
    "run_trial",
    "run_point",
    "snr_axis",
    "sweep_points",
    "run_sweep",
]

TRIALS_PER_CHUNK = 4096
_Z95 = 1.959963984540054  # two-sided 95% normal quantile


@dataclass(frozen=True)
class GridPoint:
    """One cell of the sweep grid."""

    sf: int
    waveform: ChipWaveform
    delta_s: float
    snr_db: float

    def __post_init__(self) -> None:
        validate_sf(self.sf)
        if not 0.0 <= self.delta_s <= 1.0:
            raise ValueError(f"delta_s must be in [0, 1], got {self.delta_s}")
        if not math.isfinite(self.snr_db):
            raise ValueError(f"snr_db must be finite, got {self.snr_db}")


@dataclass(frozen=True)
class StoppingRule:
    """Stop a point after max_trials, or earlier once min_errors are seen.

    min_errors = 0 disables early stopping.
    """

    max_trials: int = 1_000_000
    min_errors: int = 100

    def __post_init__(self) -> None:
        if self.max_trials < 1:
            raise ValueError(f"max_trials must be >= 1, got {self.max_trials}")
        if self.min_errors < 0:
            raise ValueError(f"min_errors must be >= 0, got {self.min_errors}")


@dataclass(frozen=True)
class SerEstimate:
    """SER estimate for one grid point with a Wilson 95% interval.

    elapsed is wall-clock seconds and is excluded from equality so that
    estimates from different runs or worker counts compare equal.
    """

    point: GridPoint
    trials: int
    errors: int
    ser: float
    ci_low: float
    ci_high: float
    seed: int
    elapsed: float = field(default=0.0, compare=False)

    def __post_init__(self) -> None:
        if not 0 <= self.errors <= self.trials:
            raise ValueError(f"need 0 <= errors <= trials, got {self.errors}/{self.trials}")
        if self.ser != self.errors / self.trials:
            raise ValueError("ser must equal errors/trials")
        if not self.ci_low <= self.ser <= self.ci_high:
            raise ValueError("confidence interval must bracket the estimate")


def wilson_interval(errors: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not 0 <= errors <= trials:
        raise ValueError(f"need 0 <= errors <= trials, got {errors}/{trials}")
    p = errors / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials))
    # at the boundaries the exact endpoints are 0 and 1; computing
    # center -/+ half there leaves a rounding residue that would put the
    # point estimate outside its own interval
    low = 0.0 if errors == 0 else max(0.0, center - half)
    high = 1.0 if errors == trials else min(1.0, center + half)
    return low, high


def analytical_ser_sync(sf: int, snr_db: float) -> float:
    """Exact SER of noncoherent M-ary orthogonal signaling (synchronous case).

    P_e = sum_{j=1}^{M-1} (-1)^(j+1) C(M-1, j) exp(-gamma j/(j+1)) / (j+1)
    with gamma = 10^(snr_db/10). The alternating sum loses all float64
    precision beyond sf ~7 (terms grow like 2^M), so it is evaluated with
    exact integer binomials and mpmath at working precision scaled to M.
    """
    m = symbol_cardinality(sf)
    digits = int(0.302 * m) + 30
    with mp.workdps(digits):
        gamma = mp.mpf(10.0) ** (mp.mpf(snr_db) / 10.0)
        total = mp.mpf(0)
        for j in range(1, m):
            term = mp.mpf(math.comb(m - 1, j)) * mp.exp(-gamma * j / (j + 1)) / (j + 1)
            total = total + term if j % 2 == 1 else total - term
        return float(total)


def _point_spawn_key(point: GridPoint) -> tuple[int, int, int, int]:
    """Four uint32 words hashed from the point's canonical coordinates."""
    text = (
        f"sf={point.sf};wf={point.waveform.kind};"
        f"ds={point.delta_s!r};snr={point.snr_db!r}"
    )
    digest = hashlib.sha256(text.encode("ascii")).digest()
    return tuple(int.from_bytes(digest[4 * i : 4 * i + 4], "little") for i in range(4))


def _chunk_rng(point: GridPoint, master_seed: int, chunk_index: int) -> np.random.Generator:
    seq = np.random.SeedSequence(
        master_seed, spawn_key=_point_spawn_key(point) + (chunk_index,)
    )
    return np.random.Generator(np.random.Philox(seq))


def _chunk_error_flags(
    point: GridPoint,
    master_seed: int,
    chunk_index: int,
    fixed_delta: Optional[float] = None,
) -> np.ndarray:
    """Detection-error flags for one full chunk of trials (vectorized)."""
    rng = _chunk_rng(point, master_seed, chunk_index)
    m = symbol_cardinality(point.sf)
    n = TRIALS_PER_CHUNK
    x_prev = rng.integers(0, m, size=n)
    x_cur = rng.integers(0, m, size=n)
    x_next = rng.integers(0, m, size=n)
    if fixed_delta is not None:
        if abs(fixed_delta) > 0.5:
            raise ValueError(f"fixed delta magnitude must be <= 0.5, got {fixed_delta}")
        delta = np.full(n, float(fixed_delta))
    elif point.delta_s == 0.0:
        delta = np.zeros(n)
    else:
        delta = rng.uniform(-0.5 * point.delta_s, 0.5 * point.delta_s, size=n)
    rows = synthesize_chip_rows(x_prev, x_cur, x_next, delta, point.waveform, 1.0, point.sf)
    n0 = 10.0 ** (-point.snr_db / 10.0)
    scale = math.sqrt(n0 / 2.0)
    rows += scale * rng.standard_normal((n, m))
    rows += 1j * scale * rng.standard_normal((n, m))
    stats = np.fft.fft(rows * dechirp_vector(point.sf), axis=1) / math.sqrt(m)
    detected = np.argmax(np.abs(stats), axis=1)
    return detected != x_cur


def run_trial(
    point: GridPoint,
    trial_index: int,
    master_seed: int,
    fixed_delta: Optional[float] = None,
) -> bool:
    """Outcome of a single trial (True = detection error).

    Trial trial_index lives in chunk trial_index // TRIALS_PER_CHUNK; the
    whole chunk is regenerated and the one outcome extracted, so the result
    matches what run_point aggregates at any worker count.
    """
    if trial_index < 0:
        raise ValueError(f"trial_index must be >= 0, got {trial_index}")
    flags = _chunk_error_flags(
        point, master_seed, trial_index // TRIALS_PER_CHUNK, fixed_delta
    )
    return bool(flags[trial_index % TRIALS_PER_CHUNK])


def run_point(
    point: GridPoint,
    stop: StoppingRule = StoppingRule(),
    master_seed: int = 1,
    workers: int = 1,
    fixed_delta: Optional[float] = None,
    executor: Optional[ProcessPoolExecutor] = None,
) -> SerEstimate:
    """Estimate the SER at one grid point under the stopping rule.

    Chunks are consumed strictly in index order and the stopping rule is
    evaluated on cumulative counts, so the estimate does not depend on how
    many workers computed the chunks.
    """
    t_start = time.perf_counter()
    n_chunks = -(-stop.max_trials // TRIALS_PER_CHUNK)
    trials = 0
    errors = 0

    def consume(flags: np.ndarray) -> bool:
        nonlocal trials, errors
        take = min(TRIALS_PER_CHUNK, stop.max_trials - trials)
        errors += int(np.count_nonzero(flags[:take]))
        trials += take
        done = trials >= stop.max_trials
        if stop.min_errors and errors >= stop.min_errors:
            done = True
        return done

    if workers <= 1 and executor is None:
        for index in range(n_chunks):
            if consume(_chunk_error_flags(point, master_seed, index, fixed_delta)):
                break
    else:
        own = executor is None
        pool = executor if executor is not None else ProcessPoolExecutor(max_workers=workers)
        inflight = max(2 * max(workers, 1), 2)
        pending = {}
        try:
            next_submit = 0
            for index in range(n_chunks):
                while next_submit < n_chunks and next_submit - index < inflight:
                    pending[next_submit] = pool.submit(
                        _chunk_error_flags, point, master_seed, next_submit, fixed_delta
                    )
                    next_submit += 1
                if consume(pending.pop(index).result()):
                    break
        finally:
            for fut in pending.values():
                fut.cancel()
            if own:
                pool.shutdown(wait=True, cancel_futures=True)

    low, high = wilson_interval(errors, trials)
    return SerEstimate(
        point=point,
        trials=trials,
        errors=errors,
        ser=errors / trials,
        ci_low=low,
        ci_high=high,
        seed=master_seed,
        elapsed=time.perf_counter() - t_start,
    )


def snr_axis(start_db: float, stop_db: float, step_db: float) -> list[float]:
    """Inclusive dB grid start, start+step, ..., up to stop when reachable."""
    if not step_db > 0:
        raise ValueError(f"snr step must be > 0, got {step_db}")
    count = int(math.floor((stop_db - start_db) / step_db + 1e-9)) + 1
    if count < 1:
        raise ValueError(f"snr axis is empty (start {start_db} > stop {stop_db})")
    return [float(start_db + i * step_db) for i in range(count)]


def sweep_points(config) -> list[GridPoint]:
    """Expand and validate a sweep config into an ordered list of grid points.

    Ordering is (sf, waveform token, delta_s, snr_db) so output layout is
    independent of how the axes were listed.
    """
    if not config.sf_list:
        raise ValueError("sf list is empty")
    if not config.waveforms:
        raise ValueError("waveform list is empty")
    if not config.delta_s_list:
        raise ValueError("delta-s list is empty")
    for sf in config.sf_list:
        validate_sf(sf)
    waveforms = [waveform_from_token(tok) for tok in config.waveforms]
    for ds in config.delta_s_list:
        if not 0.0 <= ds <= 1.0:
            raise ValueError(f"delta-s value out of range [0, 1]: {ds}")
    snrs = snr_axis(config.snr_start_db, config.snr_stop_db, config.snr_step_db)
    fixed_delta = getattr(config, "fixed_delta", None)
    if fixed_delta is not None and abs(fixed_delta) > 0.5:
        raise ValueError(f"fixed-delta magnitude must be <= 0.5, got {fixed_delta}")
    points = [
        GridPoint(sf=int(sf), waveform=wf, delta_s=float(ds), snr_db=float(snr))
        for sf in config.sf_list
        for wf in waveforms
        for ds in config.delta_s_list
        for snr in snrs
    ]
    points.sort(key=lambda p: (p.sf, p.waveform.kind, p.delta_s, p.snr_db))
    return points


def run_sweep(
    config,
    progress: Optional[Callable[[int, int, SerEstimate], None]] = None,
) -> list[SerEstimate]:
    """Run every grid point of a sweep config; see sweep_points for ordering.

    config duck-types SweepConfig: sf_list, waveforms (tokens),
    delta_s_list, snr_start_db/stop/step, trials_max, min_errors,
    master_seed, workers, fixed_delta.
    """
    points = sweep_points(config)
    stop = StoppingRule(max_trials=config.trials_max, min_errors=config.min_errors)
    workers = int(config.workers)
    fixed_delta = getattr(config, "fixed_delta", None)
    executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    results: list[SerEstimate] = []
    try:
        for i, point in enumerate(points):
            est = run_point(
                point,
                stop,
                config.master_seed,
                workers=workers,
                fixed_delta=fixed_delta,
                executor=executor,
            )
            results.append(est)
            if progress is not None:
                progress(i + 1, len(points), est)
    finally:
        if executor is not None:
            executor.shutdown(wait=True, cancel_futures=True)
    return results
