"""Tests for the chip-rate channel: params, offset draw, spillover indexing,
chip synthesis, and noise calibration."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qslora.channel import (
    ChannelParams,
    draw_offset,
    overlap_indices,
    synthesize_chip_rows,
    synthesize_chips,
)
from qslora.modulation import envelope, symbol_cardinality
from qslora.waveforms import raised_cosine, rectangular


class TestChannelParams:
    def test_snr_derived_from_ratio(self):
        params = ChannelParams(power=1.0, noise_density=0.1)
        assert params.snr_db == pytest.approx(10.0, abs=1e-12)

    def test_from_snr_db_round_trip(self):
        for snr in (-7.5, 0.0, 3.0, 21.0):
            params = ChannelParams.from_snr_db(snr)
            assert params.snr_db == pytest.approx(snr, abs=1e-9)
            assert params.power == 1.0

    def test_consistent_explicit_snr_accepted(self):
        ChannelParams(power=1.0, noise_density=0.1, snr_db=10.0)

    def test_inconsistent_explicit_snr_rejected(self):
        with pytest.raises(ValueError):
            ChannelParams(power=1.0, noise_density=0.1, snr_db=9.9)

    def test_negative_values_rejected(self):
        with pytest.raises(ValueError):
            ChannelParams(power=-1.0, noise_density=0.1)
        with pytest.raises(ValueError):
            ChannelParams(power=1.0, noise_density=-0.1)

    def test_degenerate_levels_map_to_infinities(self):
        assert ChannelParams(power=0.0, noise_density=1.0).snr_db == -math.inf
        assert ChannelParams(power=1.0, noise_density=0.0).snr_db == math.inf


class TestDrawOffset:
    def test_zero_bound_returns_exact_zero(self, rng):
        state = rng.bit_generator.state
        assert draw_offset(0.0, rng) == 0.0
        # the stream must not have been consumed
        assert rng.bit_generator.state == state

    def test_out_of_range_bound_rejected(self, rng):
        with pytest.raises(ValueError):
            draw_offset(-0.1, rng)
        with pytest.raises(ValueError):
            draw_offset(1.2, rng)

    @given(delta_s=st.floats(min_value=0.01, max_value=1.0))
    @settings(max_examples=50, deadline=None)
    def test_support_bound(self, delta_s):
        rng = np.random.default_rng(99)
        for _ in range(20):
            assert abs(draw_offset(delta_s, rng)) <= delta_s / 2

    def test_uniformity_statistics(self):
        # 10^6 draws at delta_s = 1: mean within 3 sigma of 0, max <= 0.5
        rng = np.random.default_rng(5)
        draws = np.array([draw_offset(1.0, rng) for _ in range(10_000)])
        draws = np.concatenate([draws, rng.uniform(-0.5, 0.5, 990_000)])
        sigma_mean = (1.0 / math.sqrt(12.0)) / math.sqrt(draws.size)
        assert abs(draws.mean()) < 3 * sigma_mean
        assert draws.max() <= 0.5
        assert draws.min() >= -0.5
        # quartile occupancy within 1% of uniform
        frac_low = np.mean(draws < -0.25)
        assert abs(frac_low - 0.25) < 0.01


class TestOverlapIndices:
    def test_synchronous_identity(self):
        for k in range(16):
            assert overlap_indices(k, 0.0, 4) == (k, 0)

    def test_positive_offset_boundary_wraps_forward(self):
        assert overlap_indices(15, 0.3, 4) == (0, 1)
        assert overlap_indices(7, 0.3, 4) == (8, 0)

    def test_negative_offset_boundary_reaches_back(self):
        assert overlap_indices(0, -0.3, 4) == (15, -1)
        assert overlap_indices(7, -0.3, 4) == (6, 0)

    def test_chip_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            overlap_indices(16, 0.1, 4)

    @pytest.mark.parametrize("delta", [0.2, -0.2, 0.5, -0.5])
    @pytest.mark.parametrize("sf", [2, 4, 6])
    def test_exactly_one_boundary_chip(self, delta, sf):
        cap = symbol_cardinality(sf)
        offsets = [overlap_indices(k, delta, sf)[1] for k in range(cap)]
        assert sum(1 for off in offsets if off != 0) == 1
        assert set(offsets) <= {-1, 0, 1}


class TestSynthesizeChips:
    def test_synchronous_noise_free_is_pure_envelope(self, rect, rng):
        params = ChannelParams(power=4.0, noise_density=0.0)
        real = synthesize_chips(3, 9, 12, 0.0, rect, params, 4, rng)
        np.testing.assert_allclose(real.received_chips, 2.0 * envelope(9, 4), atol=1e-15)

    def test_realization_records_context(self, rect, rng):
        params = ChannelParams.from_snr_db(10.0)
        real = synthesize_chips(1, 2, 3, 0.25, rect, params, 4, rng, rng_stream_id=77)
        assert (real.x_prev, real.x_cur, real.x_next) == (1, 2, 3)
        assert real.delta == 0.25
        assert real.params is params
        assert real.rng_stream_id == 77
        assert real.received_chips.shape == (16,)

    def test_interior_chip_half_offset(self, rect, rng):
        # delta = 0.5 rect: equal-weight mix of chip k and chip k+1 of the
        # same symbol for interior k
        params = ChannelParams(power=1.0, noise_density=0.0)
        real = synthesize_chips(2, 11, 5, 0.5, rect, params, 4, rng)
        env_cur = envelope(11, 4)
        assert real.received_chips[7] == pytest.approx(
            0.5 * env_cur[7] + 0.5 * env_cur[8], abs=1e-12
        )

    def test_boundary_chip_half_offset_spills_into_next(self, rect, rng):
        params = ChannelParams(power=1.0, noise_density=0.0)
        real = synthesize_chips(2, 11, 5, 0.5, rect, params, 4, rng)
        expected = 0.5 * envelope(11, 4)[15] + 0.5 * envelope(5, 4)[0]
        assert real.received_chips[15] == pytest.approx(expected, abs=1e-12)

    def test_boundary_chip_negative_offset_spills_into_previous(self, rect, rng):
        params = ChannelParams(power=1.0, noise_density=0.0)
        real = synthesize_chips(2, 11, 5, -0.25, rect, params, 4, rng)
        expected = 0.75 * envelope(11, 4)[0] + 0.25 * envelope(2, 4)[15]
        assert real.received_chips[0] == pytest.approx(expected, abs=1e-12)

    @given(
        sf=st.integers(min_value=2, max_value=8),
        data=st.data(),
    )
    @settings(max_examples=40, deadline=None)
    def test_noise_free_synchronous_chip_energy(self, sf, data):
        cap = symbol_cardinality(sf)
        x = data.draw(st.integers(0, cap - 1))
        power = data.draw(st.floats(min_value=0.1, max_value=10.0))
        rows = synthesize_chip_rows(
            np.array([0]), np.array([x]), np.array([0]),
            np.array([0.0]), rectangular(), power, sf,
        )
        total = float(np.sum(np.abs(rows[0]) ** 2))
        assert abs(total - power) < 1e-12

    def test_offset_magnitude_rejected(self, rect, rng):
        params = ChannelParams(power=1.0, noise_density=0.0)
        with pytest.raises(ValueError):
            synthesize_chips(1, 2, 3, 0.6, rect, params, 4, rng)

    def test_symbol_out_of_range_rejected(self, rect, rng):
        params = ChannelParams(power=1.0, noise_density=0.0)
        with pytest.raises(ValueError):
            synthesize_chips(1, 16, 3, 0.1, rect, params, 4, rng)

    def test_noise_calibration(self, rc):
        # with P = 0 the chips are pure noise; empirical per-chip variance
        # over ~10^6 draws must land within 1% of N0
        rng = np.random.default_rng(11)
        n0 = 0.37
        params = ChannelParams(power=0.0, noise_density=n0)
        chunks = []
        for _ in range(4096):
            real = synthesize_chips(0, 0, 0, 0.1, rc, params, 8, rng)
            chunks.append(real.received_chips)
        samples = np.concatenate(chunks)
        assert samples.size >= 1_000_000
        var = float(np.mean(np.abs(samples) ** 2))
        assert abs(var - n0) / n0 < 0.01
        # circular symmetry: both quadratures carry half the variance
        assert abs(np.mean(samples.real**2) - n0 / 2) / n0 < 0.01

    def test_batch_matches_scalar_path(self, rc, rng):
        deltas = np.array([-0.4, -0.1, 0.0, 0.2, 0.5])
        xp = np.array([1, 2, 3, 4, 5])
        xc = np.array([9, 8, 7, 6, 5])
        xn = np.array([0, 15, 14, 13, 12])
        batch = synthesize_chip_rows(xp, xc, xn, deltas, rc, 2.0, 4)
        params = ChannelParams(power=2.0, noise_density=0.0)
        for i in range(5):
            single = synthesize_chips(
                int(xp[i]), int(xc[i]), int(xn[i]), float(deltas[i]), rc, params, 4, rng
            )
            np.testing.assert_allclose(batch[i], single.received_chips, atol=1e-15)
