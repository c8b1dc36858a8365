#!/usr/bin/env python3
"""
Long-running reference checks
=============================

Deselected by default (see pytest.ini); run with ``pytest -m slow``.

1. Noiseless round trip over 100 frames of every preset entry
2. Small windows lose against w = 2(m_sc+1) in the waterfall
3. SC-PCC T=400 against PCC T=1200 at equal latency and complexity
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import math

import numpy as np
import pytest

from core.channel import noiseless_llr
from core.codes import CodeSpecification, CsocCode, save_code_file
from core.decoders.window import WindowDecoder
from core.scpcc import default_params, encode_frame
from core.simulation import SimConfig, resolve_preset, run_sweep

pytestmark = pytest.mark.slow

THREADS = max(1, min(8, os.cpu_count() or 1))


def k8_code_file(tmp_path):
    """A (9,8,154) J=4 code with every tap difference distinct."""
    code = CsocCode.from_taps([[0, i + 1, 10 + 9 * i, 84 + 10 * i] for i in range(8)])
    return str(save_code_file(CodeSpecification("csoc_9_8_154", code), tmp_path / "k8.json"))


@pytest.mark.parametrize("preset", ["rate-half", "window-sweep", "high-rate"])
def test_noiseless_frames_of_every_preset(preset, tmp_path):
    code_path = k8_code_file(tmp_path) if preset == "high-rate" else None
    for entry in resolve_preset(preset, code_path=code_path, seed=1):
        params = entry.params
        decoder = WindowDecoder(params)
        rng = np.random.default_rng(2024)
        for _ in range(100):
            source = rng.integers(0, 2, size=(params.frame_length, params.block_size), dtype=np.uint8)
            decisions, _ = decoder.decode(noiseless_llr(encode_frame(params, source)))
            assert np.array_equal(decisions, source), entry.label


def _ber(params, ebno_db, min_bit_errors, max_frames=20_000, seed=7):
    config = SimConfig(params=params, ebno_db_list=[ebno_db], min_bit_errors=min_bit_errors,
                       max_frames=max_frames, batch_size=4 * THREADS, threads=THREADS, master_seed=seed)
    return run_sweep(config)[0]


def test_smallest_window_is_worse_in_the_waterfall():
    ebno_db = 3.0
    stats = {
        w: _ber(default_params(block_size=1200, coupling_memory=1, frame_length=10, window_size=w,
                               vertical_iterations=1, horizontal_iterations=4), ebno_db, 100)
        for w in (2, 4)
    }
    assert stats[2].bit_errors >= 100 and stats[4].bit_errors >= 100
    assert stats[2].ber > stats[4].ber


def _ebno_at(params, target_ber, start_db, stop_db, step_db=0.25):
    """E_b/N_0 where BER crosses `target_ber`, interpolated in log BER on a fixed grid."""
    previous = None
    ebno_db = start_db
    while ebno_db <= stop_db + 1e-9:
        stats = _ber(params, ebno_db, min_bit_errors=200, max_frames=200_000)
        point = (ebno_db, stats.ber)
        if stats.ber < target_ber:
            assert previous is not None, f"BER already below {target_ber} at {start_db} dB"
            (x0, y0), (x1, y1) = previous, point
            if y1 == 0.0:
                return x1
            fraction = (math.log10(y0) - math.log10(target_ber)) / (math.log10(y0) - math.log10(y1))
            return x0 + fraction * (x1 - x0)
        previous = point
        ebno_db = round(ebno_db + step_db, 6)
    pytest.fail(f"BER stayed above {target_ber} up to {stop_db} dB")


def test_coupling_gain_at_equal_latency():
    entries = {entry.label: entry.params for entry in resolve_preset("rate-half", seed=0)}
    pcc = _ebno_at(entries["pcc-1200"], 1e-3, start_db=1.5, stop_db=5.0)
    scpcc = _ebno_at(entries["scpcc-400"], 1e-3, start_db=1.5, stop_db=5.0)
    gain = pcc - scpcc
    assert 0.45 <= gain <= 0.95, f"PCC {pcc:.2f} dB, SC-PCC {scpcc:.2f} dB"
