"""
Latency, Memory and Computation Calculators
===========================================

Closed-form cost of an SC-PCC configuration, counted in code symbols,
stored elements and arithmetic operations.

Latency:      Delta_d = w T (block schedule: T); the window spans at least
              m_sc + 1 blocks, and w_d = 2(m_sc + 1) is the default
              recommendation.
Memory:       encoder T(m_sc + 1) + 2 nu, decoder T(w + 1) + 8 nu;
              an uncoupled PCC needs T + 2 nu and T + 8 nu.
Computation:  per component decoder and T decoded bits,
                  C_mul = T(k + 1)
                  C_add = T(k + 2 n + 1)
                  C_box = T n
              with n the number of nonzero generator terms. The empirical
              mode estimates n as nu / (1.5 k (k - 1)); the exact mode uses kJ.
              A window position costs 2 w I_V I_H component passes.
"""

from dataclasses import asdict, dataclass
from enum import Enum
from typing import Dict, Union

from ..errors import AnalysisModeError
from ..scpcc.params import Schedule, ScPccParams


class AnalysisMode(str, Enum):
    EMPIRICAL = "empirical"
    EXACT = "exact"


@dataclass(frozen=True)
class LatencyReport:
    latency_symbols: int
    minimum_symbols: int
    recommended_window: int
    pcc_symbols: int


@dataclass(frozen=True)
class MemoryReport:
    encoder: int
    decoder: int
    pcc_encoder: int
    pcc_decoder: int


@dataclass(frozen=True)
class ComplexityReport:
    mode: str
    block_size: int
    parallelism: int
    nonzero_terms: Union[int, float]
    mul: Union[int, float]
    add: Union[int, float]
    boxplus: Union[int, float]
    iterations_per_position: int
    latency: LatencyReport
    memory: MemoryReport

    @property
    def per_decoder(self) -> Union[int, float]:
        """C^d, the operation count of one component decoder pass over T bits."""
        return self.mul + self.add + self.boxplus

    @property
    def per_position(self) -> Union[int, float]:
        return self.iterations_per_position * self.per_decoder

    @property
    def per_bit(self) -> float:
        return self.per_decoder / self.block_size

    def to_dict(self) -> Dict:
        data = asdict(self)
        data['per_decoder'] = self.per_decoder
        data['per_position'] = self.per_position
        data['per_bit'] = self.per_bit
        return data


def latency(params: ScPccParams) -> LatencyReport:
    """
    Decoding latency in symbols.

    Args:
        params: codec configuration

    Returns:
        LatencyReport with Delta_d, the structural minimum (m_sc+1)T, the
        recommended window 2(m_sc+1) and the PCC reference T
    """
    T, m_sc = params.block_size, params.coupling_memory
    if params.schedule is Schedule.BLOCK:
        symbols = T
    else:
        symbols = params.window_size * T
    return LatencyReport(
        latency_symbols=symbols,
        minimum_symbols=(m_sc + 1) * T,
        recommended_window=2 * (m_sc + 1),
        pcc_symbols=T
    )


def memory(params: ScPccParams) -> MemoryReport:
    """
    Encoder and decoder storage in elements.

    The block schedule reports the PCC values as its own.
    """
    T, nu = params.block_size, params.code.nu
    pcc_encoder, pcc_decoder = T + 2 * nu, T + 8 * nu
    if params.schedule is Schedule.BLOCK:
        return MemoryReport(pcc_encoder, pcc_decoder, pcc_encoder, pcc_decoder)
    return MemoryReport(
        encoder=T * (params.coupling_memory + 1) + 2 * nu,
        decoder=T * (params.window_size + 1) + 8 * nu,
        pcc_encoder=pcc_encoder,
        pcc_decoder=pcc_decoder
    )


def nonzero_terms(params: ScPccParams, mode: Union[AnalysisMode, str] = AnalysisMode.EXACT) -> Union[int, float]:
    code = params.code
    if AnalysisMode(mode) is AnalysisMode.EXACT:
        return code.nonzero_taps
    if code.k < 2:
        raise AnalysisModeError(
            "the empirical estimate nu/(1.5k(k-1)) is undefined for k=1; use exact mode"
        )
    return code.nu / (1.5 * code.k * (code.k - 1))


def computation(params: ScPccParams, mode: Union[AnalysisMode, str] = AnalysisMode.EXACT) -> ComplexityReport:
    """
    Operation counts of the decoder.

    Args:
        params: codec configuration
        mode: "exact" counts the code's nonzero taps (integer results),
              "empirical" uses the nu-based estimate

    Returns:
        ComplexityReport; per_decoder is T(2k + 3n + 2), per_position
        multiplies it by the vertical iterations scheduled per window position

    Raises:
        AnalysisModeError: empirical mode with k = 1
    """
    mode = AnalysisMode(mode)
    T, k = params.block_size, params.k
    n = nonzero_terms(params, mode)
    return ComplexityReport(
        mode=mode.value,
        block_size=T,
        parallelism=k,
        nonzero_terms=n,
        mul=T * (k + 1),
        add=T * (k + 2 * n + 1),
        boxplus=T * n,
        iterations_per_position=params.vertical_per_position,
        latency=latency(params),
        memory=memory(params)
    )


def pcc_reference(params: ScPccParams) -> ScPccParams:
    """Uncoupled PCC with the same code, block size and iterations per position."""
    return params.model_copy(update={
        'coupling_memory': 0,
        'frame_length': 1,
        'window_size': 1,
        'horizontal_iterations': 1,
        'vertical_iterations': params.vertical_per_position,
        'schedule': Schedule.BLOCK
    })
