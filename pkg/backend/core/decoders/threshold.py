"""
APP Threshold Decoding
======================

Soft-decision threshold decoding of one CSOC block. Values are natural-log
likelihood ratios. Channel LLRs are bit-domain (positive => bit 0); a priori
and extrinsic values are error-domain (positive => the hard decision is
correct).

For each time l and stream i the decoder weights the J orthogonal checks by
the box-plus combination of their participants' reliabilities, then decides

    e_l^{(i)} = 1  iff  sum_j (1 - 2 A_j) w_j + L(e_l^{(i)} | y_l^{(i)}) < 0

and feeds every decided error back into the syndrome bits it enters. The k
decisions at one time unit all read the same syndrome state.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..codes.csoc import CheckSet, CsocCode, build_check_sets, form_syndromes
from ..errors import DimensionMismatchError

DEFAULT_LLR_CAP = 300.0
DEFAULT_EXTRINSIC_LIMIT = 20.0


class BoxplusMode(str, Enum):
    EXACT = "exact"
    APPROX = "approx"


def boxplus(a: ArrayLike, b: ArrayLike, mode: Union[BoxplusMode, str] = BoxplusMode.APPROX,
            cap: float = DEFAULT_LLR_CAP):
    """
    Check-node combination of two LLRs.

    approx: sign(a) sign(b) min(|a|, |b|)
    exact:  ln((1 + e^{a+b}) / (e^a + e^b)), evaluated as the approx value
            plus log1p(e^{-|a+b|}) - log1p(e^{-|a-b|})
    Infinite inputs are clamped to +-cap.
    """
    a = np.clip(np.asarray(a, dtype=float), -cap, cap)
    b = np.clip(np.asarray(b, dtype=float), -cap, cap)
    result = np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))
    if BoxplusMode(mode) is BoxplusMode.EXACT:
        result = result + np.log1p(np.exp(-np.abs(a + b))) - np.log1p(np.exp(-np.abs(a - b)))
    if result.ndim == 0:
        return float(result)
    return result


def boxplus_reduce(values: ArrayLike, mode: Union[BoxplusMode, str] = BoxplusMode.APPROX,
                   cap: float = DEFAULT_LLR_CAP) -> NDArray[np.float64]:
    """Box-plus over axis 0 of `values`."""
    values = np.clip(np.asarray(values, dtype=float), -cap, cap)
    if BoxplusMode(mode) is BoxplusMode.APPROX:
        return np.prod(np.sign(values), axis=0) * np.min(np.abs(values), axis=0)
    result = values[0]
    for row in values[1:]:
        result = boxplus(result, row, BoxplusMode.EXACT, cap)
    return np.asarray(result, dtype=float)


def reliability(channel_llr_magnitude: ArrayLike, apriori: ArrayLike = 0.0):
    """L(e|y) = |channel LLR| + a priori error LLR."""
    result = np.abs(np.asarray(channel_llr_magnitude, dtype=float)) + np.asarray(apriori, dtype=float)
    if result.ndim == 0:
        return float(result)
    return result


@dataclass
class LlrBlock:
    """Channel LLRs for one block: k information streams and the parity stream."""
    info_llr: NDArray[np.float64]
    parity_llr: NDArray[np.float64]

    def __post_init__(self):
        self.info_llr = np.atleast_2d(np.asarray(self.info_llr, dtype=float))
        self.parity_llr = np.asarray(self.parity_llr, dtype=float).ravel()
        if self.parity_llr.size != self.info_llr.shape[1]:
            raise DimensionMismatchError(
                f"parity length {self.parity_llr.size} != information length {self.info_llr.shape[1]}"
            )
        if np.isnan(self.info_llr).any() or np.isnan(self.parity_llr).any():
            raise DimensionMismatchError("LLR block contains NaN")

    @property
    def k(self) -> int:
        return self.info_llr.shape[0]

    @property
    def length(self) -> int:
        return self.info_llr.shape[1]

    def hard_info(self) -> NDArray[np.uint8]:
        return (self.info_llr < 0).astype(np.uint8)

    def hard_parity(self) -> NDArray[np.uint8]:
        return (self.parity_llr < 0).astype(np.uint8)


@dataclass
class DecodeOutput:
    decisions: NDArray[np.uint8]           # u_hat, k x N
    extrinsic: NDArray[np.float64]         # error-domain, k x N
    errors: NDArray[np.uint8]              # e_hat, k x N
    residual_syndromes: NDArray[np.uint8]  # syndrome register after feedback

    @property
    def flips(self) -> int:
        return int(self.errors.sum())


class ThresholdDecoder:
    """Reusable APP threshold decoder for one component code."""

    def __init__(self, code: CsocCode, mode: Union[BoxplusMode, str] = BoxplusMode.APPROX,
                 cap: float = DEFAULT_LLR_CAP, check_set: Optional[CheckSet] = None):
        self.code = code
        self.mode = BoxplusMode(mode)
        self.cap = cap
        self.check_set = check_set or build_check_sets(code)
        self.offsets: List[List[int]] = [
            [check.offset for check in self.check_set.for_stream(i)] for i in range(code.k)
        ]

    def check_weights(self, rel: NDArray[np.float64]) -> NDArray[np.float64]:
        """
        w_j^{(i)} for every time unit at once, shape (k, J, N).

        `rel` holds reliabilities per stream, shape (k+1, N), parity last.
        Checks whose syndrome time falls past the block get weight 0.
        """
        k, J = self.code.k, self.code.J
        n = rel.shape[1]
        padded = np.concatenate([rel, np.full((k + 1, self.code.m + 1), self.cap)], axis=1)
        weights = np.zeros((k, J, n))
        for i in range(k):
            for j, check in enumerate(self.check_set.for_stream(i)):
                rows = np.stack([padded[p.stream, p.offset:p.offset + n] for p in check.participants])
                w = boxplus_reduce(rows, self.mode, self.cap)
                if check.offset:
                    w[max(n - check.offset, 0):] = 0.0
                weights[i, j] = w
        return weights

    def check_sums(self, weights: NDArray[np.float64], syndrome: NDArray[np.uint8]) -> NDArray[np.float64]:
        """
        sum_j (1 - 2 A_j) w_j for every time unit at once, shape (k, N), with
        the syndrome register as given (no feedback). Terms are added in check
        order, as decode() does.
        """
        n = syndrome.size
        padded = np.concatenate([syndrome, np.zeros(self.code.m + 1, dtype=syndrome.dtype)])
        sums = np.zeros((self.code.k, n))
        for i in range(self.code.k):
            for j, d in enumerate(self.offsets[i]):
                signs = 1.0 - 2.0 * padded[d:d + n]
                sums[i] = sums[i] + signs * weights[i, j]
        return sums

    def decode(self, channel: LlrBlock, apriori: Optional[ArrayLike] = None) -> DecodeOutput:
        code = self.code
        if channel.k != code.k:
            raise DimensionMismatchError(f"expected {code.k} information streams, got {channel.k}")
        n = channel.length

        info = np.clip(channel.info_llr, -self.cap, self.cap)
        parity = np.clip(channel.parity_llr, -self.cap, self.cap)
        if apriori is None:
            apr = np.zeros_like(info)
        else:
            apr = np.clip(np.asarray(apriori, dtype=float), -self.cap, self.cap)
            if apr.shape != info.shape:
                raise DimensionMismatchError(f"a priori shape {apr.shape} != channel shape {info.shape}")

        hard_info = (info < 0).astype(np.uint8)
        hard_parity = (parity < 0).astype(np.uint8)

        rel = np.empty((code.k + 1, n))
        rel[:code.k] = reliability(info, apr)
        rel[code.k] = np.abs(parity)

        weights_array = self.check_weights(rel)
        syndrome_array = form_syndromes(code, hard_info, hard_parity)

        sums = self.check_sums(weights_array, syndrome_array)
        if not (sums + rel[:code.k] < 0.0).any():
            # no decision fires, so feedback never changes the register
            return DecodeOutput(
                decisions=hard_info,
                extrinsic=sums,
                errors=np.zeros((code.k, n), dtype=np.uint8),
                residual_syndromes=syndrome_array
            )

        weights = weights_array.tolist()
        own = rel[:code.k].tolist()
        syndrome = syndrome_array.tolist()
        offsets = self.offsets

        errors = np.zeros((code.k, n), dtype=np.uint8)
        extrinsic = [[0.0] * n for _ in range(code.k)]

        for l in range(n):
            decided = []
            for i in range(code.k):
                w_i = weights[i]
                total = 0.0
                for j, d in enumerate(offsets[i]):
                    t = l + d
                    if t < n:
                        total += -w_i[j][l] if syndrome[t] else w_i[j][l]
                extrinsic[i][l] = total
                if total + own[i][l] < 0.0:
                    decided.append(i)
            # feedback after all k decisions at time l
            for i in decided:
                errors[i, l] = 1
                for d in offsets[i]:
                    if l + d < n:
                        syndrome[l + d] ^= 1

        return DecodeOutput(
            decisions=hard_info ^ errors,
            extrinsic=np.asarray(extrinsic, dtype=float),
            errors=errors,
            residual_syndromes=np.asarray(syndrome, dtype=np.uint8)
        )


def decode_block(code: CsocCode, channel: LlrBlock, apriori: Optional[ArrayLike] = None,
                 mode: Union[BoxplusMode, str] = BoxplusMode.APPROX,
                 cap: float = DEFAULT_LLR_CAP) -> DecodeOutput:
    """One threshold-decoding pass over a block."""
    return ThresholdDecoder(code, mode=mode, cap=cap).decode(channel, apriori)
