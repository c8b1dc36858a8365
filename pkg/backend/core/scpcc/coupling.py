"""
Spatial Coupling
================

A frame holds L source blocks u_t of T bits. Each block is split into
m_sc + 1 contiguous sub-blocks of B = T/(m_sc+1) bits; sub-block i of u_t is
placed in coupled block U_{t+i} at positions i*B .. (i+1)*B - 1, so a source
bit at position p lands at coupled time t + p // B and keeps position p.

The permuted path does the same with the interleaved block, where source
position p moves to pi(p) first. Coupled times run 0 .. L + m_sc - 1; rows
of U that would come from source blocks outside 0 .. L-1 are virtual
all-zero sub-blocks.

Per-source-bit stores are (L, T) arrays. gather() reads a store into the
coupled order of one time (virtual positions read +inf, a known zero bit);
scatter() writes coupled-order values back (virtual positions are dropped).
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import CouplingConfigError, DimensionMismatchError

logger = logging.getLogger(__name__)


class CouplingPath(str, Enum):
    PLAIN = "plain"
    PERMUTED = "permuted"


@dataclass(frozen=True)
class Interleaver:
    """Bijection on block positions: source position p moves to permutation[p]."""
    length: int
    permutation: Tuple[int, ...]
    seed: Optional[int] = None

    def __post_init__(self):
        if len(self.permutation) != self.length:
            raise CouplingConfigError(
                f"permutation has {len(self.permutation)} entries, expected {self.length}"
            )
        if sorted(self.permutation) != list(range(self.length)):
            raise CouplingConfigError("interleaver is not a permutation of 0..T-1")

    @property
    def array(self) -> NDArray[np.int64]:
        return np.asarray(self.permutation, dtype=np.int64)

    @property
    def inverse(self) -> NDArray[np.int64]:
        return np.argsort(self.array)

    @property
    def is_identity(self) -> bool:
        return self.permutation == tuple(range(self.length))

    def permute(self, block: ArrayLike) -> NDArray:
        """Interleaved block: out[pi(p)] = block[p]."""
        block = np.asarray(block)
        out = np.empty_like(block)
        out[self.array] = block
        return out

    def depermute(self, block: ArrayLike) -> NDArray:
        return np.asarray(block)[self.array]

    def to_text(self) -> str:
        return "".join(f"{index}\n" for index in self.permutation)

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_text(self.to_text(), encoding="utf-8")
        logger.info(f"Wrote interleaver of length {self.length} to {path}")
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Interleaver":
        """Read a permutation file, one index per line."""
        lines = [line.strip() for line in Path(path).read_text(encoding="utf-8").splitlines()]
        try:
            permutation = tuple(int(line) for line in lines if line)
        except ValueError as exc:
            raise CouplingConfigError(f"{path}: permutation file must hold one integer per line") from exc
        return cls(length=len(permutation), permutation=permutation)


def build_interleaver(T: int, seed: Optional[int] = None, identity: bool = False) -> Interleaver:
    """Seeded uniform random permutation of length T, or the identity on request."""
    if T < 1:
        raise CouplingConfigError(f"interleaver length must be >= 1, got {T}")
    if identity:
        return Interleaver(length=T, permutation=tuple(range(T)), seed=None)
    rng = np.random.default_rng(seed)
    permutation = tuple(int(p) for p in rng.permutation(T))
    return Interleaver(length=T, permutation=permutation, seed=seed)


@dataclass(frozen=True)
class CouplingMap:
    """Coordinates of every source bit in the plain and permuted coupled matrices."""
    T: int
    m_sc: int
    L: int
    interleaver: Interleaver
    # per path: coupled time of source bit (t, p), shape (L, T)
    plain_time: NDArray[np.int64] = field(repr=False, compare=False)
    permuted_time: NDArray[np.int64] = field(repr=False, compare=False)
    # per path: source position read at coupled position q
    _source_position: dict = field(repr=False, compare=False)

    @property
    def sub_block(self) -> int:
        return self.T // (self.m_sc + 1)

    @property
    def coupled_blocks(self) -> int:
        return self.L + self.m_sc

    def source_position(self, path: CouplingPath) -> NDArray[np.int64]:
        return self._source_position[CouplingPath(path)]

    def coupled_time(self, path: CouplingPath) -> NDArray[np.int64]:
        return self.plain_time if CouplingPath(path) is CouplingPath.PLAIN else self.permuted_time

    def decision_time(self) -> NDArray[np.int64]:
        """Coupled time at which a source bit has left both coupled matrices."""
        return np.maximum(self.plain_time, self.permuted_time)

    def source_blocks(self, tau: int) -> NDArray[np.int64]:
        """Source block feeding each coupled position at time tau (may be out of range)."""
        self._check_tau(tau)
        return tau - np.arange(self.T) // self.sub_block

    def real_mask(self, tau: int) -> NDArray[np.bool_]:
        blocks = self.source_blocks(tau)
        return (blocks >= 0) & (blocks < self.L)

    def _check_tau(self, tau: int) -> None:
        if not 0 <= tau < self.coupled_blocks:
            raise CouplingConfigError(f"coupled time {tau} outside 0..{self.coupled_blocks - 1}")

    def _check_store(self, store: NDArray) -> None:
        if store.shape != (self.L, self.T):
            raise DimensionMismatchError(f"store shape {store.shape} != ({self.L}, {self.T})")


def build_coupling_map(T: int, m_sc: int, L: int, interleaver: Interleaver) -> CouplingMap:
    if m_sc < 0:
        raise CouplingConfigError(f"coupling memory must be >= 0, got {m_sc}")
    if L < 1:
        raise CouplingConfigError(f"frame length must be >= 1, got {L}")
    if T % (m_sc + 1):
        raise CouplingConfigError(f"block size {T} is not a multiple of m_sc+1={m_sc + 1}")
    if interleaver.length != T:
        raise CouplingConfigError(f"interleaver length {interleaver.length} != block size {T}")

    sub_block = T // (m_sc + 1)
    positions = np.arange(T)
    blocks = np.arange(L)[:, None]
    plain_time = blocks + (positions // sub_block)[None, :]
    permuted_time = blocks + (interleaver.array // sub_block)[None, :]

    return CouplingMap(
        T=T, m_sc=m_sc, L=L, interleaver=interleaver,
        plain_time=plain_time,
        permuted_time=permuted_time,
        _source_position={
            CouplingPath.PLAIN: positions,
            CouplingPath.PERMUTED: interleaver.inverse
        }
    )


def gather_block(coupling: CouplingMap, store: NDArray, path: Union[CouplingPath, str],
                 tau: int, fill: float = np.inf) -> NDArray:
    """Length-T vector of coupled time tau read from a per-source-bit store."""
    coupling._check_store(store)
    blocks = coupling.source_blocks(tau)
    real = (blocks >= 0) & (blocks < coupling.L)
    positions = coupling.source_position(path)

    out = np.full(coupling.T, fill, dtype=np.result_type(store.dtype, type(fill)))
    out[real] = store[blocks[real], positions[real]]
    return out


def scatter_block(coupling: CouplingMap, store: NDArray, path: Union[CouplingPath, str],
                  tau: int, values: ArrayLike) -> NDArray:
    """Write coupled-order values of time tau into the store (in place, also returned)."""
    coupling._check_store(store)
    values = np.asarray(values)
    if values.shape != (coupling.T,):
        raise DimensionMismatchError(f"expected {coupling.T} values, got shape {values.shape}")
    blocks = coupling.source_blocks(tau)
    real = (blocks >= 0) & (blocks < coupling.L)
    positions = coupling.source_position(path)

    store[blocks[real], positions[real]] = values[real]
    return store
