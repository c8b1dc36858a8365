#!/usr/bin/env python3
"""
Tests for the sliding-window decoder
====================================

1. Schedule counters and clipping at the end of the frame
2. Window reduction to the uncoupled block schedule
3. Extrinsic routing between the plain and permuted decoders
4. Noiseless round trips, single-bit correction and code symmetry
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import numpy as np
import pytest

from core.channel import SnrPoint, frame_rng, noiseless_llr, transmit_frame
from core.decoders.window import WindowDecoder, decode_frame
from core.errors import DimensionMismatchError, ParameterError
from core.scpcc import CouplingPath, LlrFrame, Schedule, default_params, encode_frame


def random_source(params, seed=0):
    rng = np.random.default_rng(seed)
    return rng.integers(0, 2, size=(params.frame_length, params.block_size), dtype=np.uint8)


def noisy_frame(params, source, ebno_db=3.0, seed=0):
    snr = SnrPoint.for_params(ebno_db, params)
    return transmit_frame(encode_frame(params, source), snr, frame_rng(seed, 0, 0))


def test_iteration_counter_matches_window_schedule():
    params = default_params(block_size=40, coupling_memory=1, frame_length=3,
                            window_size=3, vertical_iterations=1, horizontal_iterations=4)
    source = random_source(params)
    _, report = decode_frame(params, noisy_frame(params, source))
    assert report.window_positions == 4
    assert report.vertical_per_position == 24
    assert report.scheduled_vertical == (3 + 1) * 24
    # windows at targets 0..3 hold 3, 3, 2 and 1 real coupled times
    assert report.executed_vertical == 4 * 2 * (3 + 3 + 2 + 1)
    assert report.component_calls == 2 * report.executed_vertical


def test_block_schedule_counter():
    params = default_params(block_size=40, frame_length=2, schedule=Schedule.BLOCK,
                            vertical_iterations=24)
    _, report = decode_frame(params, noisy_frame(params, random_source(params)))
    assert report.vertical_per_position == 24
    assert report.scheduled_vertical == report.executed_vertical == 48


def test_uncoupled_window_reduces_to_block_schedule():
    n = 3
    window = default_params(block_size=60, frame_length=2, window_size=1,
                            vertical_iterations=1, horizontal_iterations=n)
    block = default_params(block_size=60, frame_length=2, schedule=Schedule.BLOCK,
                           vertical_iterations=2 * n)
    source = random_source(window, seed=4)
    received = noisy_frame(window, source, ebno_db=2.0, seed=4)

    window_bits, window_report = WindowDecoder(window, trace=True).decode(received)
    block_bits, block_report = WindowDecoder(block, trace=True).decode(received)
    assert np.array_equal(window_bits, block_bits)
    assert window_report.flips_per_time == block_report.flips_per_time
    assert window_report.executed_vertical == block_report.executed_vertical == 2 * 2 * n
    assert [(e.tau, e.path) for e in window_report.trace] == [(e.tau, e.path) for e in block_report.trace]


def test_window_larger_than_frame_is_clipped():
    common = dict(block_size=40, coupling_memory=1, frame_length=2,
                  vertical_iterations=1, horizontal_iterations=2)
    exact_fit = default_params(window_size=3, **common)
    oversized = default_params(window_size=5, **common)
    source = random_source(exact_fit, seed=2)
    received = noisy_frame(exact_fit, source, ebno_db=2.5, seed=2)

    bits_fit, report_fit = decode_frame(exact_fit, received)
    bits_big, report_big = decode_frame(oversized, received)
    assert np.array_equal(bits_fit, bits_big)
    assert report_fit.executed_vertical == report_big.executed_vertical
    assert report_fit.flips_per_time == report_big.flips_per_time
    assert report_big.scheduled_vertical > report_fit.scheduled_vertical


def test_trace_runs_decoder_one_before_decoder_two():
    params = default_params(block_size=40, coupling_memory=1, frame_length=2, window_size=2)
    _, report = decode_frame(params, noisy_frame(params, random_source(params)), trace=True)
    entries = report.trace
    assert len(entries) == report.component_calls
    for first, second in zip(entries[::2], entries[1::2]):
        assert first.path is CouplingPath.PLAIN
        assert second.path is CouplingPath.PERMUTED
        assert first.tau == second.tau
    # forward then backward sweep at target 0
    assert [e.tau for e in entries[:8:2]] == [0, 1, 1, 0]


def test_extrinsic_is_routed_through_the_coupling_map():
    params = default_params(block_size=40, coupling_memory=1, frame_length=3, window_size=2)
    decoder = WindowDecoder(params)
    state = decoder.start(noisy_frame(params, random_source(params, seed=1), ebno_db=2.0, seed=1))
    state.target = 1
    decoder.vertical_iteration(state, 1)

    coupling = decoder.coupling
    written_plain = state.store.plain != 0
    written_permuted = state.store.permuted != 0
    assert written_plain.any() and written_permuted.any()
    assert not (written_plain & (coupling.plain_time != 1)).any()
    assert not (written_permuted & (coupling.permuted_time != 1)).any()
    # bits written by decoder 2 at tau=1 sit at plain times tau-m_sc .. tau+m_sc for decoder 1
    assert set(np.unique(coupling.plain_time[written_permuted])) <= {0, 1, 2}

    apriori = state.store.read_for(coupling, CouplingPath.PLAIN, 2)
    expected = np.zeros(params.block_size)
    positions = np.arange(params.block_size)
    real = coupling.real_mask(2)
    blocks = coupling.source_blocks(2)
    expected[real] = state.store.permuted[blocks[real], positions[real]]
    assert np.array_equal(apriori, expected)


def test_exchanged_apriori_is_scaled_then_clipped():
    params = default_params(block_size=40, coupling_memory=1, frame_length=3, window_size=2,
                            extrinsic_scale=0.5, extrinsic_limit=2.5)
    decoder = WindowDecoder(params)
    state = decoder.start(noisy_frame(params, random_source(params, seed=2), ebno_db=2.0, seed=2))
    state.store.permuted[:] = np.linspace(-40.0, 40.0, state.store.permuted.size).reshape(3, 40)
    expected = np.clip(0.5 * state.store.read_for(decoder.coupling, CouplingPath.PLAIN, 1), -2.5, 2.5)

    seen = []
    decode = decoder.component.decode

    def recording_decode(channel, apriori=None):
        seen.append(np.array(apriori))
        return decode(channel, apriori)

    decoder.component.decode = recording_decode
    decoder.vertical_iteration(state, 1)

    plain_apriori = seen[0]
    assert np.max(np.abs(plain_apriori)) == 2.5
    assert np.array_equal(plain_apriori[:, :params.stream_length], expected.reshape(-1, params.k).T)


def test_vertical_iteration_outside_window_is_rejected():
    params = default_params(block_size=40, coupling_memory=1, frame_length=3, window_size=2)
    decoder = WindowDecoder(params)
    state = decoder.start(noisy_frame(params, random_source(params)))
    with pytest.raises(ParameterError):
        decoder.vertical_iteration(state, 2)


@pytest.mark.parametrize("overrides", [
    dict(block_size=40, frame_length=2, schedule="block", vertical_iterations=4),
    dict(block_size=40, coupling_memory=1, frame_length=3, window_size=2),
    dict(block_size=42, coupling_memory=2, frame_length=3, window_size=3, horizontal_iterations=2),
    dict(block_size=40, coupling_memory=1, frame_length=2, window_size=2, termination="unterminated"),
    dict(block_size=40, coupling_memory=1, frame_length=2, window_size=3, boxplus_mode="exact"),
    dict(block_size=40, coupling_memory=1, frame_length=2, window_size=2, interleaver_seed=None),
    dict(block_size=40, coupling_memory=1, frame_length=2, window_size=2, extrinsic_scale=0.0),
])
def test_noiseless_round_trip(overrides):
    params = default_params(**overrides)
    source = random_source(params, seed=3)
    frame = encode_frame(params, source)
    decisions, report = decode_frame(params, noiseless_llr(frame))
    assert np.array_equal(decisions, source)
    assert report.decision_flips == 0
    assert sum(report.flips_per_time) == 0


def test_single_unreliable_systematic_bit_is_corrected():
    params = default_params(block_size=40, coupling_memory=1, frame_length=3, window_size=2)
    source = random_source(params, seed=8)
    received = noiseless_llr(encode_frame(params, source), magnitude=4.0)
    received.systematic[1, 7] = -0.125 * received.systematic[1, 7]

    decisions, report = decode_frame(params, received)
    assert np.array_equal(decisions, source)
    assert report.decision_flips == 1


def test_decoding_beats_hard_decisions():
    params = default_params(block_size=400, coupling_memory=1, frame_length=3, window_size=3,
                            vertical_iterations=1, horizontal_iterations=2)
    decoder = WindowDecoder(params)
    raw_errors = decoded_errors = 0
    for seed in range(3):
        source = random_source(params, seed=seed)
        received = noisy_frame(params, source, ebno_db=6.0, seed=seed)
        decisions, _ = decoder.decode(received)
        raw_errors += int(np.count_nonzero((received.systematic < 0) != source))
        decoded_errors += int(np.count_nonzero(decisions != source))
    assert raw_errors > 0
    assert decoded_errors < raw_errors


def test_decisions_follow_the_codeword_symmetry():
    """Decoding codeword c equals c XOR (decoding the all-zero word under the same noise)."""
    params = default_params(block_size=40, coupling_memory=1, frame_length=3, window_size=2,
                            horizontal_iterations=2)
    zero = np.zeros((3, 40), dtype=np.uint8)
    received_zero = noisy_frame(params, zero, ebno_db=1.5, seed=5)

    source = random_source(params, seed=6)
    frame = encode_frame(params, source)
    received = LlrFrame(
        systematic=received_zero.systematic * (1.0 - 2.0 * frame.systematic),
        parity1=received_zero.parity1 * (1.0 - 2.0 * frame.parity1),
        parity2=received_zero.parity2 * (1.0 - 2.0 * frame.parity2)
    )
    decoder = WindowDecoder(params)
    zero_bits, _ = decoder.decode(received_zero)
    bits, _ = decoder.decode(received)
    assert np.array_equal(bits, source ^ zero_bits)


def test_decoder_is_deterministic_and_reusable():
    params = default_params(block_size=40, coupling_memory=1, frame_length=2, window_size=2)
    received = noisy_frame(params, random_source(params), ebno_db=1.0)
    decoder = WindowDecoder(params)
    first, _ = decoder.decode(received)
    second, _ = decoder.decode(received)
    assert np.array_equal(first, second)


def test_received_frame_shape_is_checked():
    params = default_params(block_size=40, coupling_memory=1, frame_length=2, window_size=2)
    frame = noiseless_llr(encode_frame(params, np.zeros((2, 40), dtype=np.uint8)))
    frame.parity2 = frame.parity2[:, :-1]
    with pytest.raises(DimensionMismatchError):
        decode_frame(params, frame)


def test_report_serialization():
    params = default_params(block_size=40, coupling_memory=1, frame_length=2, window_size=2)
    _, report = decode_frame(params, noisy_frame(params, random_source(params)), trace=True)
    data = report.to_dict()
    assert data['scheduled_vertical'] == report.scheduled_vertical
    assert data['trace'][0] == [0, 0, "plain"]
    assert "vertical iterations" in report.to_text()
