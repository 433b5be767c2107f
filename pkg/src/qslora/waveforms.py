"""Unit-energy chip pulse shapes and their partial autocorrelations.

Chip duration is normalized to 1. Two shapes are supported:

    rect: psi(t) = 1                                on [0, 1)
    rc:   psi(t) = sqrt(2/3) * (1 - cos(2*pi*t))    on [0, 1)

For a fractional chip offset delta with |delta| <= 1, a matched filter
aligned to the shifted chip grid sees two pieces of the incoming signal:

    overlapping: R(delta)    = integral_{|delta|}^{1} psi(u) psi(u - |delta|) du
    overlapped:  Rhat(delta) = integral_{0}^{|delta|} psi(u) psi(u + 1 - |delta|) du

R weights the chip the filter mostly covers, Rhat weights the sliver of the
neighbouring chip that spills into the window. Both are even in delta and
satisfy R(0) = 1, Rhat(0) = 0, R(+-1) = 0, Rhat(+-1) = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .quadrature import integrate

__all__ = [
    "ChipWaveform",
    "rectangular",
    "raised_cosine",
    "waveform_from_token",
    "WAVEFORM_TOKENS",
    "sample_waveform",
    "energy",
    "autocorr_overlapping",
    "autocorr_overlapped",
    "autocorr_overlapping_quad",
    "autocorr_overlapped_quad",
]

_RC_AMP = np.sqrt(2.0 / 3.0)


@dataclass(frozen=True)
class ChipWaveform:
    """A named unit-energy chip pulse, identified by its kind token."""

    kind: str

    def __post_init__(self) -> None:
        if self.kind not in ("rect", "rc"):
            raise ValueError(f"unknown waveform kind {self.kind!r} (expected 'rect' or 'rc')")

    def sample(self, t: np.ndarray | float) -> np.ndarray:
        return sample_waveform(self, t)


WAVEFORM_TOKENS = ("rect", "rc")


def rectangular() -> ChipWaveform:
    return ChipWaveform("rect")


def raised_cosine() -> ChipWaveform:
    return ChipWaveform("rc")


def waveform_from_token(token: str) -> ChipWaveform:
    """Build a waveform from its CLI token, 'rect' or 'rc'."""
    return ChipWaveform(token)


def sample_waveform(w: ChipWaveform, t: np.ndarray | float) -> np.ndarray:
    """Evaluate psi(t); zero outside the support [0, 1)."""
    t = np.asarray(t, dtype=float)
    inside = (t >= 0.0) & (t < 1.0)
    if w.kind == "rect":
        return np.where(inside, 1.0, 0.0)
    return np.where(inside, _RC_AMP * (1.0 - np.cos(2.0 * np.pi * t)), 0.0)


def energy(w: ChipWaveform | Callable[[np.ndarray], np.ndarray], tol: float = 1e-12) -> float:
    """Pulse energy integral of psi**2 over one chip, by quadrature.

    Accepts either a ChipWaveform or any callable t -> psi(t); unit-energy
    pulses return 1 up to the quadrature tolerance.
    """
    fn = w.sample if isinstance(w, ChipWaveform) else w
    return float(integrate(lambda t: np.asarray(fn(t)) ** 2, 0.0, 1.0, tol=tol))


def _check_offsets(delta: np.ndarray) -> np.ndarray:
    d = np.abs(np.asarray(delta, dtype=float))
    if np.any(d > 1.0 + 1e-12):
        raise ValueError("chip offset magnitude must be <= 1")
    return np.minimum(d, 1.0)


def autocorr_overlapping(w: ChipWaveform, delta: np.ndarray | float):
    """R(delta): correlation with the chip the filter window mostly covers.

    Closed forms (d = |delta|):
        rect: 1 - d
        rc:   (2/3) * ((1-d) * (1 + cos(2*pi*d)/2) + (3/(4*pi)) * sin(2*pi*d))
    """
    d = _check_offsets(delta)
    if w.kind == "rect":
        out = 1.0 - d
    else:
        c = np.cos(2.0 * np.pi * d)
        s = np.sin(2.0 * np.pi * d)
        out = (2.0 / 3.0) * ((1.0 - d) * (1.0 + 0.5 * c) + (3.0 / (4.0 * np.pi)) * s)
    return out if out.ndim else float(out)


def autocorr_overlapped(w: ChipWaveform, delta: np.ndarray | float):
    """Rhat(delta): correlation with the neighbouring chip's spill-over.

    Closed forms (d = |delta|):
        rect: d
        rc:   (2/3) * (d * (1 + cos(2*pi*d)/2) - (3/(4*pi)) * sin(2*pi*d))
    """
    d = _check_offsets(delta)
    if w.kind == "rect":
        out = d.copy() if d.ndim else d
    else:
        c = np.cos(2.0 * np.pi * d)
        s = np.sin(2.0 * np.pi * d)
        out = (2.0 / 3.0) * (d * (1.0 + 0.5 * c) - (3.0 / (4.0 * np.pi)) * s)
    return out if np.ndim(out) else float(out)


def autocorr_overlapping_quad(w: ChipWaveform, delta: float, tol: float = 1e-12) -> float:
    """Quadrature reference for autocorr_overlapping (scalar delta)."""
    d = float(_check_offsets(delta))
    if d == 1.0:
        return 0.0
    val = integrate(
        lambda u: sample_waveform(w, u) * sample_waveform(w, u - d), d, 1.0, tol=tol
    )
    return float(val)


def autocorr_overlapped_quad(w: ChipWaveform, delta: float, tol: float = 1e-12) -> float:
    """Quadrature reference for autocorr_overlapped (scalar delta)."""
    d = float(_check_offsets(delta))
    if d == 0.0:
        return 0.0
    val = integrate(
        lambda u: sample_waveform(w, u) * sample_waveform(w, u + 1.0 - d), 0.0, d, tol=tol
    )
    return float(val)
