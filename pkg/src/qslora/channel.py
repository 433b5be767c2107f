"""Discrete chip-rate channel: timing-offset draw, chip synthesis, AWGN.

A trial involves three consecutive symbols (previous, current, next) and a
timing offset delta held constant over the current symbol. The receiver's
k-th matched-filter window then sees

    r[k] = sqrt(P) * env(x_cur)[k] * R(delta)
         + sqrt(P) * env(x_src)[k_hat] * Rhat(delta)
         + noise[k]

where (k_hat, off) = overlap_indices(k, delta, sf) identifies the chip that
spills into the window (x_src is the previous/current/next symbol according
to off) and noise is i.i.d. circularly-symmetric complex Gaussian with total
variance N0 per chip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .modulation import envelope_matrix, symbol_cardinality
from .waveforms import ChipWaveform, autocorr_overlapped, autocorr_overlapping

__all__ = [
    "ChannelParams",
    "ChannelRealization",
    "draw_offset",
    "overlap_indices",
    "synthesize_chips",
    "synthesize_chip_rows",
]


@dataclass(frozen=True)
class ChannelParams:
    """Symbol power P and noise level N0 (linear), with snr_db = 10*log10(P/N0).

    P and N0 may be zero to support noise-free and signal-free calibration
    runs; snr_db is then the appropriate infinity. An explicitly supplied
    snr_db must be consistent with P/N0 to within 1e-9 dB.
    """

    power: float
    noise_density: float
    snr_db: float = field(default=math.nan)

    def __post_init__(self) -> None:
        if self.power < 0.0:
            raise ValueError(f"power must be >= 0, got {self.power}")
        if self.noise_density < 0.0:
            raise ValueError(f"noise density must be >= 0, got {self.noise_density}")
        if math.isnan(self.snr_db):
            object.__setattr__(self, "snr_db", self._ratio_db())
        elif abs(self.snr_db - self._ratio_db()) > 1e-9:
            raise ValueError(
                f"snr_db={self.snr_db} inconsistent with 10*log10(P/N0)={self._ratio_db()}"
            )

    def _ratio_db(self) -> float:
        if self.power == 0.0:
            return -math.inf
        if self.noise_density == 0.0:
            return math.inf
        return 10.0 * math.log10(self.power / self.noise_density)

    @classmethod
    def from_snr_db(cls, snr_db: float, power: float = 1.0) -> "ChannelParams":
        """Fix P and sweep N0 = P * 10**(-snr_db/10)."""
        return cls(power=power, noise_density=power * 10.0 ** (-snr_db / 10.0))


@dataclass(frozen=True)
class ChannelRealization:
    """One synthesized trial: the drawn context and the received chip vector."""

    x_prev: int
    x_cur: int
    x_next: int
    delta: float
    received_chips: np.ndarray
    params: ChannelParams
    rng_stream_id: int = 0


def draw_offset(delta_s: float, rng: np.random.Generator) -> float:
    """Draw the timing offset uniformly on [-delta_s/2, +delta_s/2].

    delta_s = 0 returns exactly 0.0 without consuming the stream.
    """
    if not 0.0 <= delta_s <= 1.0:
        raise ValueError(f"delta_s must be in [0, 1], got {delta_s}")
    if delta_s == 0.0:
        return 0.0
    return float(rng.uniform(-0.5 * delta_s, 0.5 * delta_s))


def overlap_indices(k: int, delta: float, sf: int) -> tuple[int, int]:
    """Locate the chip that spills into window k under offset delta.

    Returns (k_hat, symbol_offset): the source chip index and which symbol
    it belongs to (-1 previous, 0 current, +1 next). With s = sign(delta),
    k_hat = (k+s) mod M; the symbol offset is nonzero only at the boundary
    chip (k = M-1 for s = +1, k = 0 for s = -1).
    """
    cap = symbol_cardinality(sf)
    if not 0 <= k < cap:
        raise ValueError(f"chip index {k} out of range [0, {cap})")
    s = (delta > 0) - (delta < 0)
    shifted = k + s
    if shifted == cap:
        return 0, 1
    if shifted == -1:
        return cap - 1, -1
    return shifted, 0


def synthesize_chip_rows(
    x_prev: np.ndarray,
    x_cur: np.ndarray,
    x_next: np.ndarray,
    delta: np.ndarray,
    waveform: ChipWaveform,
    power: float,
    sf: int,
) -> np.ndarray:
    """Noise-free received chips for a batch of trials, one row per trial.

    Vectorized core shared by synthesize_chips and the Monte-Carlo harness;
    the spill term reads one chip ahead (delta > 0) or behind (delta < 0),
    crossing into the adjacent symbol only at the boundary chip.
    """
    m = symbol_cardinality(sf)
    x_prev = np.asarray(x_prev)
    x_cur = np.asarray(x_cur)
    x_next = np.asarray(x_next)
    delta = np.asarray(delta, dtype=float)
    if np.any(np.abs(delta) > 0.5):
        raise ValueError("chip offset magnitude must be <= 0.5")
    for name, arr in (("x_prev", x_prev), ("x_cur", x_cur), ("x_next", x_next)):
        if np.any((arr < 0) | (arr >= m)):
            raise ValueError(f"{name} contains indices out of range [0, {m})")
    if power < 0.0:
        raise ValueError(f"power must be >= 0, got {power}")
    env = envelope_matrix(sf)
    keep = np.asarray(autocorr_overlapping(waveform, delta), dtype=float)
    spill = np.asarray(autocorr_overlapped(waveform, delta), dtype=float)
    rows = keep[:, None] * env[x_cur]
    pos = delta > 0
    if np.any(pos):
        src = np.empty((int(pos.sum()), m), dtype=complex)
        src[:, : m - 1] = env[x_cur[pos]][:, 1:]
        src[:, m - 1] = env[x_next[pos], 0]
        rows[pos] += spill[pos, None] * src
    neg = delta < 0
    if np.any(neg):
        src = np.empty((int(neg.sum()), m), dtype=complex)
        src[:, 1:] = env[x_cur[neg]][:, : m - 1]
        src[:, 0] = env[x_prev[neg], m - 1]
        rows[neg] += spill[neg, None] * src
    rows *= math.sqrt(power)
    return rows


def synthesize_chips(
    x_prev: int,
    x_cur: int,
    x_next: int,
    delta: float,
    waveform: ChipWaveform,
    params: ChannelParams,
    sf: int,
    rng: np.random.Generator,
    rng_stream_id: int = 0,
) -> ChannelRealization:
    """Synthesize the received chip vector for one symbol under offset delta."""
    chips = synthesize_chip_rows(
        np.array([x_prev]),
        np.array([x_cur]),
        np.array([x_next]),
        np.array([float(delta)]),
        waveform,
        params.power,
        sf,
    )[0]
    m = chips.shape[0]
    scale = math.sqrt(params.noise_density / 2.0)
    noise = scale * (rng.standard_normal(m) + 1j * rng.standard_normal(m))
    return ChannelRealization(
        x_prev=int(x_prev),
        x_cur=int(x_cur),
        x_next=int(x_next),
        delta=float(delta),
        received_chips=chips + noise,
        params=params,
        rng_stream_id=rng_stream_id,
    )
