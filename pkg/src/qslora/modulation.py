"""Frequency-shift chirp modulation (FSCM) primitives.

A spreading factor sf in [2, 12] maps sf-bit words to one of M = 2**sf
symbols. Symbol x is transmitted as M unit-modulus chips

    c_x[k] = (1/sqrt(M)) * exp(2j*pi * k * ((x + k) mod M) / M),  k = 0..M-1,

a discretely frequency-shifted chirp. The rows of the resulting M x M chip
matrix are orthonormal, which is what makes noncoherent argmax detection
work.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "MIN_SF",
    "MAX_SF",
    "validate_sf",
    "symbol_cardinality",
    "word_to_sample",
    "sample_to_word",
    "envelope",
    "envelope_matrix",
    "ModulatedSymbol",
    "modulate",
    "inner_product",
]

MIN_SF = 2
MAX_SF = 12


def validate_sf(sf: int) -> int:
    if not isinstance(sf, (int, np.integer)) or isinstance(sf, bool):
        raise ValueError(f"spreading factor must be an integer, got {sf!r}")
    if not MIN_SF <= sf <= MAX_SF:
        raise ValueError(f"spreading factor must be in [{MIN_SF}, {MAX_SF}], got {sf}")
    return int(sf)


def symbol_cardinality(sf: int) -> int:
    """Number of symbols (and chips per symbol), M = 2**sf."""
    return 1 << validate_sf(sf)


def word_to_sample(word: tuple[int, ...], sf: int) -> int:
    """Map an sf-bit word (LSB first) to its symbol index."""
    validate_sf(sf)
    if len(word) != sf:
        raise ValueError(f"word length {len(word)} does not match sf={sf}")
    if any(bit not in (0, 1) for bit in word):
        raise ValueError(f"word must contain only bits 0/1, got {word!r}")
    return sum(bit << i for i, bit in enumerate(word))


def sample_to_word(index: int, sf: int) -> tuple[int, ...]:
    """Inverse of word_to_sample: symbol index to sf-bit word, LSB first."""
    m = symbol_cardinality(sf)
    if not 0 <= index < m:
        raise ValueError(f"symbol index {index} out of range [0, {m})")
    return tuple((index >> i) & 1 for i in range(sf))


def envelope(index: int, sf: int) -> np.ndarray:
    """Chip sequence of symbol `index`: length-M complex array, unit norm.

    The integer phase k*((index+k) mod M) is reduced mod M before the complex
    exponential so the argument stays below 2*pi at any spreading factor.
    """
    m = symbol_cardinality(sf)
    if not 0 <= index < m:
        raise ValueError(f"symbol index {index} out of range [0, {m})")
    k = np.arange(m)
    phase = (k * ((index + k) % m)) % m
    return np.exp(2j * np.pi * phase / m) / np.sqrt(m)


@lru_cache(maxsize=4)
def envelope_matrix(sf: int) -> np.ndarray:
    """M x M matrix whose row x is envelope(x, sf). Cached and read-only."""
    m = symbol_cardinality(sf)
    k = np.arange(m)
    x = k[:, None]
    phase = (k * ((x + k) % m)) % m
    mat = np.exp(2j * np.pi * phase / m) / np.sqrt(m)
    mat.setflags(write=False)
    return mat


@dataclass(frozen=True)
class ModulatedSymbol:
    """A symbol index together with its transmitted chip sequence."""

    sf: int
    index: int
    chips: np.ndarray

    def __post_init__(self) -> None:
        m = symbol_cardinality(self.sf)
        if not 0 <= self.index < m:
            raise ValueError(f"symbol index {self.index} out of range [0, {m})")
        if self.chips.shape != (m,):
            raise ValueError(f"chips must have shape ({m},), got {self.chips.shape}")


def modulate(index: int, sf: int) -> ModulatedSymbol:
    return ModulatedSymbol(sf=sf, index=index, chips=envelope(index, sf))


def inner_product(a: ModulatedSymbol, b: ModulatedSymbol) -> complex:
    """Chip-sequence inner product <a, b> = sum_k a[k] * conj(b[k])."""
    if a.sf != b.sf:
        raise ValueError(f"spreading factor mismatch: {a.sf} vs {b.sf}")
    return complex(np.sum(a.chips * np.conj(b.chips)))
