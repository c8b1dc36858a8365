"""
Decoders
========

threshold: APP threshold decoding of one component block.
window:    sliding-window turbo decoding of SC-PCC frames (import
           core.decoders.window directly; it depends on core.scpcc).
"""

from .threshold import (
    BoxplusMode,
    DEFAULT_LLR_CAP,
    boxplus,
    boxplus_reduce,
    reliability,
    LlrBlock,
    DecodeOutput,
    ThresholdDecoder,
    decode_block
)

__all__ = [
    'BoxplusMode',
    'DEFAULT_LLR_CAP',
    'boxplus',
    'boxplus_reduce',
    'reliability',
    'LlrBlock',
    'DecodeOutput',
    'ThresholdDecoder',
    'decode_block'
]
