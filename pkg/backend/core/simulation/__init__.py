"""
BER Simulation
==============

Monte Carlo sweeps with per-frame seeding, batch-boundary stopping, CSV
persistence and resume, plus the reference experiment presets.
"""

from .harness import (
    SimConfig,
    BerStats,
    FrameSimulator,
    SweepRunner,
    uncoded_ber,
    run_sweep,
    resume
)
from .presets import PresetEntry, PRESETS, PRESET_ALIASES, preset_names, resolve_preset

__all__ = [
    'SimConfig',
    'BerStats',
    'FrameSimulator',
    'SweepRunner',
    'uncoded_ber',
    'run_sweep',
    'resume',
    'PresetEntry',
    'PRESETS',
    'PRESET_ALIASES',
    'preset_names',
    'resolve_preset'
]
