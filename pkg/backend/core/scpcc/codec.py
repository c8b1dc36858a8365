"""
SC-PCC Frame Encoder
====================

Two CSOC encoders share every coupled time t. Encoder 1 sees the plain
coupled block U_t, encoder 2 the permuted block U~_t. Each length-T coupled
block is demultiplexed round-robin into k streams (bit j goes to stream
j mod k) and, in terminate-blocks mode, every stream is followed by m+1 zeros.

The systematic part of a frame is the source itself (one row per source
block); parity is produced for all L + m_sc coupled times.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from enum import Enum
from typing import Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..codes.csoc import encode_block
from ..errors import DimensionMismatchError
from .coupling import CouplingMap, CouplingPath, gather_block
from .params import ScPccParams, Termination

logger = logging.getLogger(__name__)


class RateConvention(str, Enum):
    FORMULA = "formula"          # T / (T + 2T/k + nu)
    TRANSMITTED = "transmitted"  # termination zeros are known, only flushed parity counts


@dataclass
class CodedFrame:
    """Hard bits of one encoded frame."""
    systematic: NDArray[np.uint8]  # (L, T)
    parity1: NDArray[np.uint8]     # (L + m_sc, encoded_length)
    parity2: NDArray[np.uint8]     # (L + m_sc, encoded_length)

    @property
    def transmitted_bits(self) -> int:
        return int(self.systematic.size + self.parity1.size + self.parity2.size)


@dataclass
class LlrFrame:
    """Channel LLRs of one received frame, laid out like CodedFrame (positive => bit 0)."""
    systematic: NDArray[np.float64]
    parity1: NDArray[np.float64]
    parity2: NDArray[np.float64]

    def check_shape(self, params: ScPccParams) -> None:
        expected_sys = (params.frame_length, params.block_size)
        expected_par = (params.coupled_blocks, params.encoded_length)
        if self.systematic.shape != expected_sys:
            raise DimensionMismatchError(
                f"systematic LLRs have shape {self.systematic.shape}, expected {expected_sys}"
            )
        for name, parity in (("parity1", self.parity1), ("parity2", self.parity2)):
            if parity.shape != expected_par:
                raise DimensionMismatchError(
                    f"{name} LLRs have shape {parity.shape}, expected {expected_par}"
                )


def demultiplex(block: ArrayLike, k: int) -> NDArray:
    """Length-T coupled block -> (k, T/k) streams, bit j to stream j mod k."""
    block = np.asarray(block)
    if block.size % k:
        raise DimensionMismatchError(f"block length {block.size} is not a multiple of k={k}")
    return block.reshape(-1, k).T


def multiplex(streams: ArrayLike) -> NDArray:
    """Inverse of demultiplex."""
    return np.asarray(streams).T.reshape(-1)


def component_input(params: ScPccParams, coupled_block: ArrayLike, tail_fill=0) -> NDArray:
    """Component encoder/decoder input for one coupled block, tail appended."""
    streams = demultiplex(coupled_block, params.k)
    if params.tail_length:
        tail = np.full((params.k, params.tail_length), tail_fill, dtype=streams.dtype)
        streams = np.concatenate([streams, tail], axis=1)
    return streams


def _check_source(params: ScPccParams, source: ArrayLike) -> NDArray[np.uint8]:
    source = np.asarray(source)
    expected = (params.frame_length, params.block_size)
    if source.ndim == 1 and source.size == params.frame_length * params.block_size:
        source = source.reshape(expected)
    if source.shape != expected:
        raise DimensionMismatchError(f"source has shape {source.shape}, expected {expected}")
    if np.any((source != 0) & (source != 1)):
        raise DimensionMismatchError("source must contain only 0/1 bits")
    return source.astype(np.uint8)


def encode_frame(params: ScPccParams, source: ArrayLike,
                 coupling: Optional[CouplingMap] = None) -> CodedFrame:
    """Encode L source blocks of T bits into one SC-PCC frame."""
    u = _check_source(params, source)
    coupling = coupling or params.coupling_map()
    n_coupled = params.coupled_blocks

    parity1 = np.zeros((n_coupled, params.encoded_length), dtype=np.uint8)
    parity2 = np.zeros_like(parity1)
    for tau in range(n_coupled):
        plain = gather_block(coupling, u, CouplingPath.PLAIN, tau, fill=0)
        permuted = gather_block(coupling, u, CouplingPath.PERMUTED, tau, fill=0)
        parity1[tau] = encode_block(params.code, component_input(params, plain.astype(np.uint8)))
        parity2[tau] = encode_block(params.code, component_input(params, permuted.astype(np.uint8)))

    logger.debug(f"Encoded frame: L={params.frame_length}, T={params.block_size}, "
                 f"{n_coupled} coupled blocks")
    return CodedFrame(systematic=u.copy(), parity1=parity1, parity2=parity2)


def code_rate(params: ScPccParams,
              convention: Union[RateConvention, str] = RateConvention.FORMULA) -> Fraction:
    """
    Per-block code rate as an exact fraction.

    formula:      T / (T + 2T/k + nu), nu = k(m+1)
    transmitted:  T / (T + 2T/k + 2(m+1))
    Unterminated blocks carry no tail overhead under either convention.
    """
    T, k = params.block_size, params.k
    overhead = 0
    if params.termination is Termination.TERMINATE_BLOCKS:
        if RateConvention(convention) is RateConvention.FORMULA:
            overhead = params.code.nu
        else:
            overhead = 2 * (params.code.m + 1)
    return Fraction(T, T + 2 * T // k + overhead)


def transmitted_bits(params: ScPccParams) -> int:
    """Channel bits of one frame: systematic source plus both parity sequences."""
    return (params.frame_length * params.block_size
            + 2 * params.coupled_blocks * params.encoded_length)


def frame_rate(params: ScPccParams) -> Fraction:
    """Information bits per transmitted bit for one whole frame, edge blocks included."""
    return Fraction(params.frame_length * params.block_size, transmitted_bits(params))
