#!/usr/bin/env python3
"""
Tests for the Monte Carlo BER harness
=====================================

1. Config validation and the config hash
2. Determinism across runs and worker counts
3. Batch-boundary stopping and resume
4. Uncoded BPSK against the closed form, and presets
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import pytest

from core.codes import CodeSpecification, CsocCode, save_code_file
from core.errors import ConfigHashMismatchError, PresetError
from core.scpcc import default_params
from core.simulation import PRESET_ALIASES, PRESETS, BerStats, SimConfig, resolve_preset, resume, run_sweep, uncoded_ber
from output_formats.results_writer import RESULT_COLUMNS, echo_path, read_results, write_config_echo, write_results


def small_params(**overrides):
    values = dict(block_size=40, coupling_memory=1, frame_length=2, window_size=2)
    values.update(overrides)
    return default_params(**values)


def make_config(tmp_path=None, name="results.csv", **overrides):
    values = dict(
        params=small_params(),
        ebno_db_list=[1.0, 2.0],
        max_frames=12,
        min_bit_errors=10**9,
        batch_size=4,
        master_seed=3
    )
    if tmp_path is not None:
        values['output_path'] = str(tmp_path / name)
    values.update(overrides)
    return SimConfig(**values)


def test_config_validation():
    with pytest.raises(ValueError):
        make_config(ebno_db_list=[])
    with pytest.raises(ValueError):
        make_config(ebno_db_list=[float("nan")])
    with pytest.raises(ValueError):
        make_config(min_frames=20, max_frames=10)
    with pytest.raises(ValueError):
        make_config(threads=0)


def test_config_hash_ignores_run_limits_and_destination(tmp_path):
    base = make_config().config_hash()
    assert make_config(tmp_path, max_frames=99, min_bit_errors=5, threads=2,
                       batch_size=7, record_timing=True).config_hash() == base
    assert make_config(master_seed=4).config_hash() != base
    assert make_config(ebno_db_list=[1.0]).config_hash() != base
    assert make_config(params=small_params(block_size=42)).config_hash() != base
    assert make_config(uncoded=True).config_hash() != base


def test_ber_stats():
    stats = BerStats(ebno_db=1.0, seed=0)
    assert stats.ber == stats.fer == stats.standard_error == 0.0
    stats.add_frame(100, 0)
    stats.add_frame(100, 4)
    assert (stats.frames, stats.bits, stats.bit_errors, stats.frame_errors) == (2, 200, 4, 1)
    assert stats.ber == pytest.approx(0.02)
    assert stats.fer == pytest.approx(0.5)
    assert stats.standard_error == pytest.approx((0.02 * 0.98 / 200) ** 0.5)
    assert BerStats.from_row(stats.to_row()) == stats


def test_high_snr_sweep_is_error_free(tmp_path):
    config = make_config(tmp_path, ebno_db_list=[15.0], max_frames=4)
    stats = run_sweep(config)
    assert stats[0].frames == 4
    assert stats[0].bits == 4 * 80
    assert stats[0].bit_errors == 0

    rows = read_results(config.output_path)
    assert rows[0]['frames'] == 4
    assert rows[0]['elapsed_s'] == 0.0
    assert echo_path(config.output_path).exists()


def test_results_file_layout(tmp_path):
    config = make_config(tmp_path, ebno_db_list=[15.0], max_frames=4)
    run_sweep(config)
    with open(config.output_path, encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    assert lines[0] == ",".join(RESULT_COLUMNS)
    assert lines[1] == "15.0000,4,320,0,0,0.000000e+00,0.000000e+00,3,0.000"


def test_repeated_runs_are_byte_identical(tmp_path):
    first = make_config(tmp_path, name="a.csv")
    second = make_config(tmp_path, name="b.csv")
    run_sweep(first)
    run_sweep(second)
    with open(first.output_path, "rb") as a, open(second.output_path, "rb") as b:
        assert a.read() == b.read()


def test_worker_count_does_not_change_results(tmp_path):
    serial = make_config(tmp_path, name="serial.csv", ebno_db_list=[1.0], max_frames=6, batch_size=3)
    parallel = make_config(tmp_path, name="parallel.csv", ebno_db_list=[1.0], max_frames=6,
                           batch_size=3, threads=2)
    run_sweep(serial)
    run_sweep(parallel)
    with open(serial.output_path, "rb") as a, open(parallel.output_path, "rb") as b:
        assert a.read() == b.read()


def test_stopping_happens_on_batch_boundaries():
    config = make_config(params=default_params(block_size=100), ebno_db_list=[0.0], uncoded=True,
                         max_frames=1000, min_bit_errors=30, batch_size=4)
    stats = run_sweep(config)[0]
    assert stats.bit_errors >= 30
    assert stats.frames % 4 == 0
    assert stats.frames < 1000


def test_frame_limit_caps_the_last_batch():
    config = make_config(ebno_db_list=[15.0], max_frames=10, batch_size=4)
    assert run_sweep(config)[0].frames == 10


def test_split_run_equals_single_run(tmp_path):
    single = make_config(tmp_path, name="single.csv", max_frames=12)
    run_sweep(single)

    first_half = make_config(tmp_path, name="split.csv", max_frames=8)
    run_sweep(first_half)
    continued = make_config(tmp_path, name="split.csv", max_frames=12)
    resumed = resume(continued)

    assert [s.frames for s in resumed] == [12, 12]
    with open(single.output_path, "rb") as a, open(continued.output_path, "rb") as b:
        assert a.read() == b.read()


def _counts(stats):
    return stats.ebno_db, stats.frames, stats.bits, stats.bit_errors, stats.frame_errors


def test_resume_from_zero_frames_equals_fresh_run(tmp_path):
    config = make_config(tmp_path, name="empty.csv")
    write_config_echo(config.output_path, config.config_hash(), config.model_dump(mode="json"))
    write_results(config.output_path, [
        BerStats(ebno_db=e, seed=config.master_seed).to_row() for e in config.ebno_db_list
    ])
    resumed = resume(config)
    fresh = run_sweep(make_config())
    assert [_counts(s) for s in resumed] == [_counts(s) for s in fresh]


def test_resume_refuses_a_different_config(tmp_path):
    run_sweep(make_config(tmp_path, name="run.csv", max_frames=4))
    changed = make_config(tmp_path, name="run.csv", params=small_params(block_size=42))
    with pytest.raises(ConfigHashMismatchError):
        resume(changed)

    missing_echo = make_config(tmp_path, name="bare.csv")
    write_results(missing_echo.output_path, [])
    with pytest.raises(ConfigHashMismatchError):
        resume(missing_echo)

    with pytest.raises(FileNotFoundError):
        resume(make_config(tmp_path, name="nothing.csv"))


def test_resume_matches_points_at_file_precision(tmp_path):
    # the CSV keeps four decimals; 1.23456 reads back as 1.2346
    first = make_config(tmp_path, name="fine.csv", ebno_db_list=[1.23456], max_frames=4, batch_size=2)
    run_sweep(first)
    assert read_results(first.output_path)[0]['ebno_db'] == 1.2346

    continued = make_config(tmp_path, name="fine.csv", ebno_db_list=[1.23456], max_frames=8, batch_size=2)
    resumed = resume(continued)
    single = run_sweep(make_config(ebno_db_list=[1.23456], max_frames=8, batch_size=2))
    assert resumed[0].frames == 8
    assert _counts(resumed[0])[1:] == _counts(single[0])[1:]


def test_points_equal_at_file_precision_are_rejected():
    with pytest.raises(ValueError):
        make_config(ebno_db_list=[1.00001, 1.00002])


def _fer_error(stats):
    return (stats.fer * (1.0 - stats.fer) / stats.frames) ** 0.5


def test_disjoint_seeds_agree_statistically():
    uncoded = [
        run_sweep(make_config(params=default_params(block_size=1000, frame_length=1), ebno_db_list=[3.0],
                              uncoded=True, max_frames=10_000, min_bit_errors=1000, batch_size=10,
                              master_seed=seed))[0]
        for seed in (11, 12)
    ]
    first, second = uncoded
    spread = (first.standard_error ** 2 + second.standard_error ** 2) ** 0.5
    assert abs(first.ber - second.ber) <= 4.0 * spread
    for stats in uncoded:
        assert abs(stats.ber - uncoded_ber(3.0)) <= 4.0 * stats.standard_error

    # bit errors cluster inside a decoded frame; frames are independent
    first, second = [
        run_sweep(make_config(ebno_db_list=[1.0], max_frames=300, batch_size=50, master_seed=seed))[0]
        for seed in (11, 12)
    ]
    assert first.frames == second.frames == 300
    spread = (_fer_error(first) ** 2 + _fer_error(second) ** 2) ** 0.5
    assert abs(first.fer - second.fer) <= 4.0 * spread + 1.0 / 300


def test_uncoded_ber_matches_closed_form():
    assert uncoded_ber(4.0) == pytest.approx(0.0125, abs=2e-4)
    config = make_config(params=default_params(block_size=1000, frame_length=1), ebno_db_list=[4.0],
                         uncoded=True, max_frames=10_000, min_bit_errors=2000, batch_size=10)
    stats = run_sweep(config)[0]
    assert stats.bit_errors >= 2000
    assert abs(stats.ber - uncoded_ber(4.0)) <= 3.0 * stats.standard_error


def test_config_load_accepts_the_echo(tmp_path):
    config = make_config(tmp_path, ebno_db_list=[15.0], max_frames=2)
    run_sweep(config)
    loaded = SimConfig.load(echo_path(config.output_path))
    assert loaded.config_hash() == config.config_hash()


def test_presets():
    assert set(PRESETS) == {"rate-half", "window-sweep", "high-rate"}
    assert PRESET_ALIASES == {"fig4": "rate-half", "fig5": "window-sweep", "fig6": "high-rate"}

    rate_half = {entry.label: entry.params for entry in resolve_preset("rate-half")}
    assert rate_half["pcc-1200"].vertical_per_position == 24
    assert rate_half["scpcc-400"].vertical_per_position == 24
    assert rate_half["scpcc-1000"].coupling_memory == 1

    windows = [entry.params.window_size for entry in resolve_preset("window-sweep")]
    assert windows == list(range(2, 13))

    with pytest.raises(PresetError):
        resolve_preset("high-rate")
    with pytest.raises(PresetError):
        resolve_preset("no-such-preset")


def test_preset_aliases_resolve_to_the_same_configurations():
    for alias, name in PRESET_ALIASES.items():
        if name == "high-rate":
            continue
        by_alias = [(e.label, e.params.config_hash()) for e in resolve_preset(alias, seed=3)]
        by_name = [(e.label, e.params.config_hash()) for e in resolve_preset(name, seed=3)]
        assert by_alias == by_name

    with pytest.raises(PresetError, match="search-code"):
        resolve_preset("fig6")


def test_high_rate_preset_with_a_k8_code(tmp_path):
    code = CsocCode.from_taps([[0, i + 1, 10 + 9 * i, 84 + 10 * i] for i in range(8)])
    path = save_code_file(CodeSpecification("csoc_9_8_154", code), tmp_path / "k8.json")

    entries = {entry.label: entry.params for entry in resolve_preset("fig6", code_path=str(path))}
    assert set(entries) == {"pcc-1000", "scpcc-1000-msc1", "scpcc-1008-msc2"}
    assert entries["pcc-1000"].vertical_per_position == 16
    assert entries["scpcc-1000-msc1"].vertical_per_position == 2 * 4 * 4 * 2
    assert entries["scpcc-1008-msc2"].coupling_memory == 2
    assert all(params.code == code for params in entries.values())

    wrong = save_code_file(CodeSpecification("shipped", default_params().code), tmp_path / "k2.json")
    with pytest.raises(PresetError, match="k=8"):
        resolve_preset("high-rate", code_path=str(wrong))
