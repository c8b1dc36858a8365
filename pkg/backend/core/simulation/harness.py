"""
Monte Carlo BER Harness
=======================

A sweep simulates frames at every E_b/N_0 point until enough bit errors are
seen or the frame limit is reached. Frame f at point s draws its source bits
and noise from its own generator seeded with (master seed, s, f), so the
counts do not depend on execution order or worker count. Stopping rules are
evaluated after whole batches of frames.

Results are flushed to the CSV after every batch; a sweep can be resumed from
its CSV as long as the config hash matches.
"""

import hashlib
import json
import logging
import math
import multiprocessing
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.special import erfc

from ..channel.awgn import SnrPoint, frame_rng, hard_decision, to_llr, transmit, transmit_frame
from ..decoders.window import WindowDecoder
from ..errors import ConfigHashMismatchError, ParameterError
from ..scpcc.codec import encode_frame
from ..scpcc.params import ScPccParams
from ..settings import get_settings
from output_formats.results_writer import (
    ebno_key,
    read_config_echo,
    read_results,
    write_config_echo,
    write_results
)
from utils.enhanced_logger import log_processing_step, log_simulation_point

logger = logging.getLogger(__name__)

# fields that change how long a run goes or where it writes, not what a frame produces
_UNHASHED_FIELDS = {
    'output_path', 'threads', 'max_frames', 'min_bit_errors', 'min_frames',
    'batch_size', 'record_timing'
}


class SimConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    params: ScPccParams
    ebno_db_list: List[float] = Field(..., min_length=1)
    max_frames: int = Field(100_000, ge=1)
    min_bit_errors: int = Field(100, ge=1)
    min_frames: int = Field(1, ge=1)
    master_seed: int = Field(0, ge=0)
    output_path: Optional[str] = None
    threads: int = Field(1, ge=1)
    batch_size: int = Field(default_factory=lambda: get_settings().batch_size, ge=1)
    uncoded: bool = False
    record_timing: bool = False

    @field_validator("ebno_db_list")
    @classmethod
    def _finite_points(cls, values: List[float]) -> List[float]:
        if not all(math.isfinite(v) for v in values):
            raise ValueError("E_b/N_0 points must be finite")
        keys = [ebno_key(v) for v in values]
        if len(set(keys)) != len(keys):
            raise ValueError("E_b/N_0 points must differ in the first four decimals")
        return values

    @model_validator(mode="after")
    def _check_limits(self) -> "SimConfig":
        if self.min_frames > self.max_frames:
            raise ParameterError(
                f"min_frames={self.min_frames} exceeds max_frames={self.max_frames}"
            )
        return self

    def config_hash(self) -> str:
        data = self.model_dump(mode="json", exclude=_UNHASHED_FIELDS)
        canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    @property
    def info_bits_per_frame(self) -> int:
        return self.params.frame_length * self.params.block_size

    @classmethod
    def load(cls, path: Union[str, Path]) -> "SimConfig":
        """Load a config file, or the config echo written next to a results file."""
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if isinstance(data, dict) and 'config' in data and 'config_hash' in data:
            data = data['config']
        return cls.model_validate(data)


@dataclass
class BerStats:
    """Accumulated counts of one E_b/N_0 point."""
    ebno_db: float
    seed: int
    frames: int = 0
    bits: int = 0
    bit_errors: int = 0
    frame_errors: int = 0
    elapsed_s: float = 0.0

    @property
    def ber(self) -> float:
        return self.bit_errors / self.bits if self.bits else 0.0

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames if self.frames else 0.0

    @property
    def standard_error(self) -> float:
        """Binomial standard error of the BER estimate."""
        if not self.bits:
            return 0.0
        p = self.ber
        return math.sqrt(p * (1.0 - p) / self.bits)

    def add_frame(self, bits: int, bit_errors: int) -> None:
        self.frames += 1
        self.bits += bits
        self.bit_errors += bit_errors
        self.frame_errors += int(bit_errors > 0)

    def to_row(self) -> Dict[str, Any]:
        return {
            'ebno_db': self.ebno_db,
            'frames': self.frames,
            'bits': self.bits,
            'bit_errors': self.bit_errors,
            'frame_errors': self.frame_errors,
            'ber': self.ber,
            'fer': self.fer,
            'seed': self.seed,
            'elapsed_s': self.elapsed_s
        }

    @classmethod
    def from_row(cls, row: Dict[str, Any]) -> "BerStats":
        return cls(
            ebno_db=row['ebno_db'], seed=row['seed'], frames=row['frames'], bits=row['bits'],
            bit_errors=row['bit_errors'], frame_errors=row['frame_errors'],
            elapsed_s=row['elapsed_s']
        )


def uncoded_ber(ebno_db: float) -> float:
    """Q(sqrt(2 Eb/N0)) for uncoded BPSK."""
    ebno = 10.0 ** (ebno_db / 10.0)
    return 0.5 * float(erfc(math.sqrt(ebno)))


class FrameSimulator:
    """Runs single frames of one configuration; one instance per worker process."""

    def __init__(self, config: SimConfig):
        self.config = config
        self.params = config.params
        self.bits_per_frame = config.info_bits_per_frame
        if not config.uncoded:
            self.coupling = self.params.coupling_map()
            self.decoder = WindowDecoder(self.params, coupling=self.coupling)

    def run(self, snr_index: int, frame_index: int) -> Tuple[int, int]:
        """(info bits, bit errors) of frame `frame_index` at point `snr_index`."""
        config = self.config
        rng = frame_rng(config.master_seed, snr_index, frame_index)
        ebno_db = config.ebno_db_list[snr_index]
        source = rng.integers(0, 2, size=(self.params.frame_length, self.params.block_size),
                              dtype=np.uint8)

        if config.uncoded:
            snr = SnrPoint(ebno_db=ebno_db, rate=1.0)
            decisions = hard_decision(to_llr(transmit(source, snr, rng), snr))
        else:
            snr = SnrPoint.for_params(ebno_db, self.params)
            frame = encode_frame(self.params, source, coupling=self.coupling)
            decisions, _ = self.decoder.decode(transmit_frame(frame, snr, rng))

        return self.bits_per_frame, int(np.count_nonzero(decisions != source))


_worker: Optional[FrameSimulator] = None


def _init_worker(config_json: str) -> None:
    global _worker
    _worker = FrameSimulator(SimConfig.model_validate(json.loads(config_json)))


def _run_in_worker(task: Tuple[int, int]) -> Tuple[int, int]:
    return _worker.run(*task)


class SweepRunner:
    """Drives a sweep, serially or on a process pool."""

    def __init__(self, config: SimConfig, on_flush: Optional[Callable[[List[BerStats]], None]] = None):
        self.config = config
        self.on_flush = on_flush
        self._pool = None
        self._local: Optional[FrameSimulator] = None

    def __enter__(self) -> "SweepRunner":
        if self.config.threads > 1:
            self._pool = multiprocessing.Pool(
                processes=self.config.threads,
                initializer=_init_worker,
                initargs=(self.config.model_dump_json(),)
            )
        else:
            self._local = FrameSimulator(self.config)
        return self

    def __exit__(self, *exc) -> None:
        if self._pool is not None:
            self._pool.close()
            self._pool.join()
            self._pool = None

    def _run_batch(self, tasks: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
        if self._pool is not None:
            return self._pool.map(_run_in_worker, tasks)
        return [self._local.run(*task) for task in tasks]

    def finished(self, stats: BerStats) -> bool:
        config = self.config
        if stats.frames >= config.max_frames:
            return True
        return stats.bit_errors >= config.min_bit_errors and stats.frames >= config.min_frames

    def run_point(self, snr_index: int, stats: BerStats, all_stats: List[BerStats]) -> BerStats:
        config = self.config
        while not self.finished(stats):
            started = time.perf_counter()
            first = stats.frames
            last = min(first + config.batch_size, config.max_frames)
            results = self._run_batch([(snr_index, f) for f in range(first, last)])
            # results come back in frame order
            for bits, bit_errors in results:
                stats.add_frame(bits, bit_errors)
            stats.elapsed_s += time.perf_counter() - started
            if self.on_flush is not None:
                self.on_flush(all_stats)

        log_simulation_point(
            ebno_db=stats.ebno_db, frames=stats.frames, bit_errors=stats.bit_errors,
            ber=stats.ber, fer=stats.fer, elapsed_s=stats.elapsed_s
        )
        return stats

    def run(self, existing: Optional[List[BerStats]] = None) -> List[BerStats]:
        config = self.config
        previous = {ebno_key(s.ebno_db): s for s in (existing or [])}
        all_stats = [
            previous.get(ebno_key(ebno_db)) or BerStats(ebno_db=ebno_db, seed=config.master_seed)
            for ebno_db in config.ebno_db_list
        ]
        for snr_index, stats in enumerate(all_stats):
            self.run_point(snr_index, stats, all_stats)
        return all_stats


def _persist(config: SimConfig) -> Optional[Callable[[List[BerStats]], None]]:
    if not config.output_path:
        return None

    def flush(all_stats: List[BerStats]) -> None:
        write_results(config.output_path, [s.to_row() for s in all_stats],
                      record_timing=config.record_timing)

    return flush


def run_sweep(config: SimConfig, existing: Optional[List[BerStats]] = None) -> List[BerStats]:
    """Simulate every E_b/N_0 point of the config; continues `existing` counts when given."""
    started = time.perf_counter()
    config_hash = config.config_hash()
    if config.output_path:
        write_config_echo(config.output_path, config_hash, config.model_dump(mode="json"))

    flush = _persist(config)
    with SweepRunner(config, on_flush=flush) as runner:
        all_stats = runner.run(existing)
    if flush is not None:
        flush(all_stats)

    log_processing_step(
        "run_sweep", "success", duration_ms=(time.perf_counter() - started) * 1000.0,
        details={
            'config_hash': config_hash,
            'points': len(all_stats),
            'frames': sum(s.frames for s in all_stats),
            'uncoded': config.uncoded
        }
    )
    return all_stats


def resume(config: SimConfig, results_path: Optional[Union[str, Path]] = None) -> List[BerStats]:
    """
    Continue a sweep from a results CSV.

    Frame indices continue past the stored counts of every point, so a split
    run equals a single run to the same frame count when both stop on batch
    boundaries.
    """
    results_path = Path(results_path or config.output_path or "")
    if not results_path.is_file():
        raise FileNotFoundError(f"no results to resume at {results_path}")

    echo = read_config_echo(results_path)
    expected = config.config_hash()
    if echo is None:
        raise ConfigHashMismatchError(f"{results_path} has no config echo to compare against")
    if echo.get('config_hash') != expected:
        raise ConfigHashMismatchError(
            f"{results_path} was produced by config {echo.get('config_hash', '?')[:12]}, "
            f"current config is {expected[:12]}"
        )

    existing = [BerStats.from_row(row) for row in read_results(results_path)]
    for stats in existing:
        if stats.seed != config.master_seed:
            raise ConfigHashMismatchError(f"stored seed {stats.seed} != {config.master_seed}")
    if all(stats.frames == 0 for stats in existing):
        logger.warning(f"{results_path} holds no completed frames; resuming from scratch")
    return run_sweep(config, existing=existing)
