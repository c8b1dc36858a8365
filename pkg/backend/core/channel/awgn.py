"""
BPSK over AWGN
==============

Bit 0 maps to +1, bit 1 to -1, unit symbol energy. For a point E_b/N_0 (dB)
and transmitted rate R,

    E_s/N_0 = R * 10^(E_b/N_0 / 10),   sigma^2 = 1 / (2 E_s/N_0)

and the channel LLR of a received value y is 4 (E_s/N_0) y = 2y / sigma^2.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import ParameterError
from ..scpcc.codec import CodedFrame, LlrFrame, RateConvention, code_rate
from ..scpcc.params import ScPccParams

# stands in for sigma -> 0 when a frame is converted without noise
NOISELESS_LLR = 100.0


@dataclass(frozen=True)
class SnrPoint:
    ebno_db: float
    rate: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.ebno_db):
            raise ParameterError(f"E_b/N_0 must be finite, got {self.ebno_db}")
        if not 0.0 < self.rate <= 1.0:
            raise ParameterError(f"rate must lie in (0, 1], got {self.rate}")

    @property
    def es_n0(self) -> float:
        return self.rate * 10.0 ** (self.ebno_db / 10.0)

    @property
    def noise_variance(self) -> float:
        return 1.0 / (2.0 * self.es_n0)

    @property
    def sigma(self) -> float:
        return math.sqrt(self.noise_variance)

    @classmethod
    def from_es_n0(cls, es_n0: float, rate: float = 1.0) -> "SnrPoint":
        if es_n0 <= 0:
            raise ParameterError(f"E_s/N_0 must be positive, got {es_n0}")
        return cls(ebno_db=10.0 * math.log10(es_n0 / rate), rate=rate)

    @classmethod
    def for_params(cls, ebno_db: float, params: ScPccParams) -> "SnrPoint":
        """Point at the transmitted-convention rate of the code."""
        rate: Fraction = code_rate(params, RateConvention.TRANSMITTED)
        return cls(ebno_db=ebno_db, rate=float(rate))


def modulate(bits: ArrayLike) -> NDArray[np.float64]:
    return 1.0 - 2.0 * np.asarray(bits, dtype=float)


def transmit(bits: ArrayLike, snr: SnrPoint, rng: np.random.Generator) -> NDArray[np.float64]:
    """y = x + n, n ~ N(0, sigma^2)."""
    x = modulate(bits)
    return x + rng.normal(0.0, snr.sigma, size=x.shape)


def to_llr(y: ArrayLike, snr: Union[SnrPoint, float]) -> NDArray[np.float64]:
    """Lambda = 4 (E_s/N_0) y; `snr` may be an SnrPoint or a linear E_s/N_0."""
    es_n0 = snr.es_n0 if isinstance(snr, SnrPoint) else float(snr)
    result = 4.0 * es_n0 * np.asarray(y, dtype=float)
    if result.ndim == 0:
        return float(result)
    return result


def hard_decision(llr: ArrayLike) -> NDArray[np.uint8]:
    """Bit 1 iff LLR < 0; an erasure (0) decides bit 0."""
    return (np.asarray(llr) < 0).astype(np.uint8)


def frame_rng(master_seed: int, snr_index: int, frame_index: int) -> np.random.Generator:
    """Independent stream per (run seed, SNR point, frame)."""
    return np.random.default_rng([int(master_seed), int(snr_index), int(frame_index)])


def transmit_frame(frame: CodedFrame, snr: SnrPoint, rng: np.random.Generator) -> LlrFrame:
    """Send every segment of a coded frame and return channel LLRs."""
    return LlrFrame(
        systematic=to_llr(transmit(frame.systematic, snr, rng), snr),
        parity1=to_llr(transmit(frame.parity1, snr, rng), snr),
        parity2=to_llr(transmit(frame.parity2, snr, rng), snr)
    )


def noiseless_llr(frame: CodedFrame, magnitude: Optional[float] = None) -> LlrFrame:
    """LLRs of a perfectly received frame."""
    magnitude = NOISELESS_LLR if magnitude is None else magnitude
    return LlrFrame(
        systematic=magnitude * modulate(frame.systematic),
        parity1=magnitude * modulate(frame.parity1),
        parity2=magnitude * modulate(frame.parity2)
    )
