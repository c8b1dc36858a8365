from .awgn import (
    SnrPoint,
    modulate,
    transmit,
    to_llr,
    hard_decision,
    frame_rng,
    transmit_frame,
    noiseless_llr
)

__all__ = [
    'SnrPoint',
    'modulate',
    'transmit',
    'to_llr',
    'hard_decision',
    'frame_rng',
    'transmit_frame',
    'noiseless_llr'
]
