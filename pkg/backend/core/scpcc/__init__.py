"""
Spatially Coupled PCC
=====================

Coupling geometry, codec parameters and the frame encoder.
"""

from .coupling import (
    CouplingPath,
    Interleaver,
    CouplingMap,
    build_interleaver,
    build_coupling_map,
    gather_block,
    scatter_block
)
from .params import ScPccParams, Termination, Schedule, default_params
from .codec import (
    CodedFrame,
    LlrFrame,
    RateConvention,
    demultiplex,
    multiplex,
    component_input,
    encode_frame,
    code_rate,
    transmitted_bits,
    frame_rate
)

__all__ = [
    'CouplingPath',
    'Interleaver',
    'CouplingMap',
    'build_interleaver',
    'build_coupling_map',
    'gather_block',
    'scatter_block',
    'ScPccParams',
    'Termination',
    'Schedule',
    'default_params',
    'CodedFrame',
    'LlrFrame',
    'RateConvention',
    'demultiplex',
    'multiplex',
    'component_input',
    'encode_frame',
    'code_rate',
    'transmitted_bits',
    'frame_rate'
]
