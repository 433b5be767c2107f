"""Chip-accurate SER simulator for quasisynchronous LoRa over AWGN.

The package models frequency-shift chirp modulation at chip rate with a
bounded fractional-chip timing error, validates the discrete model against
an exact continuous-time matched-filter oracle, and estimates symbol error
rates over a (spreading factor, chip waveform, offset bound, SNR) grid with
deterministic, worker-count-independent Monte-Carlo.
"""

__version__ = "0.1.0"

from .channel import (
    ChannelParams,
    ChannelRealization,
    draw_offset,
    overlap_indices,
    synthesize_chips,
)
from .continuous_time import (
    ContinuousSignal,
    certify_discrete_model,
    matched_filter_chip,
    synthesize,
)
from .correlations import (
    analytic_decision_statistic,
    cross_corr_adjacent_symbol,
    cross_corr_same_symbol,
)
from .modulation import (
    ModulatedSymbol,
    envelope,
    envelope_matrix,
    inner_product,
    modulate,
    sample_to_word,
    symbol_cardinality,
    word_to_sample,
)
from .montecarlo import (
    GridPoint,
    SerEstimate,
    StoppingRule,
    analytical_ser_sync,
    run_point,
    run_sweep,
    run_trial,
    wilson_interval,
)
from .quadrature import QuadratureError, integrate
from .receiver import despread, despread_fft, detect
from .waveforms import (
    ChipWaveform,
    autocorr_overlapped,
    autocorr_overlapping,
    energy,
    raised_cosine,
    rectangular,
    sample_waveform,
    waveform_from_token,
)

__all__ = [
    "__version__",
    "ChannelParams",
    "ChannelRealization",
    "ChipWaveform",
    "ContinuousSignal",
    "GridPoint",
    "ModulatedSymbol",
    "QuadratureError",
    "SerEstimate",
    "StoppingRule",
    "analytic_decision_statistic",
    "analytical_ser_sync",
    "autocorr_overlapped",
    "autocorr_overlapping",
    "certify_discrete_model",
    "cross_corr_adjacent_symbol",
    "cross_corr_same_symbol",
    "despread",
    "despread_fft",
    "detect",
    "draw_offset",
    "energy",
    "envelope",
    "envelope_matrix",
    "inner_product",
    "integrate",
    "matched_filter_chip",
    "modulate",
    "overlap_indices",
    "raised_cosine",
    "rectangular",
    "run_point",
    "run_sweep",
    "run_trial",
    "sample_to_word",
    "sample_waveform",
    "symbol_cardinality",
    "synthesize",
    "synthesize_chips",
    "waveform_from_token",
    "wilson_interval",
    "word_to_sample",
]
