"""
Experiment presets.

Each preset is a list of named ScPccParams for one reference comparison. SNR
grids and stopping limits are left to the caller.

rate-half     rate-1/2 PCC (T=1200, 3000; 24 iterations) against SC-PCC
              (m_sc=1, T=400, 1000, 1200; w=3, I_V=1, I_H=4), all on the (3,2,13) code
window-sweep  SC-PCC T=9990, m_sc=1, I_V=1, I_H=4 for every window size 2..12
high-rate     k=8, J=4 code read from a file: PCC with 16 iterations and
              SC-PCC m_sc=1,2 with w=4, I_V=4, I_H=2 at T=1000 (1008 for m_sc=2)

fig4, fig5 and fig6 are aliases of the three, in that order.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from ..codes.code_registry import DEFAULT_CODE, get_code, load_code_file
from ..codes.csoc import CsocCode, validate_self_orthogonality
from ..errors import PresetError
from ..scpcc.params import Schedule, ScPccParams, Termination


@dataclass(frozen=True)
class PresetEntry:
    label: str
    params: ScPccParams


def _rate_half(code: Optional[CsocCode], seed: int) -> List[PresetEntry]:
    code = code or get_code(DEFAULT_CODE)
    entries = []
    for T in (1200, 3000):
        entries.append(PresetEntry(f"pcc-{T}", ScPccParams(
            code=code, block_size=T, interleaver_seed=seed,
            vertical_iterations=24, schedule=Schedule.BLOCK
        )))
    for T in (400, 1000, 1200):
        entries.append(PresetEntry(f"scpcc-{T}", ScPccParams(
            code=code, block_size=T, coupling_memory=1, frame_length=10,
            interleaver_seed=seed, window_size=3, vertical_iterations=1,
            horizontal_iterations=4
        )))
    return entries


def _window_sweep(code: Optional[CsocCode], seed: int) -> List[PresetEntry]:
    code = code or get_code(DEFAULT_CODE)
    return [
        PresetEntry(f"scpcc-9990-w{w}", ScPccParams(
            code=code, block_size=9990, coupling_memory=1, frame_length=10,
            interleaver_seed=seed, window_size=w, vertical_iterations=1,
            horizontal_iterations=4
        ))
        for w in range(2, 13)
    ]


def _high_rate(code: Optional[CsocCode], seed: int) -> List[PresetEntry]:
    if code is None:
        raise PresetError(
            "preset high-rate (fig6) needs a k=8, J=4 code file (--code); "
            "generate one with: python cli.py search-code --k 8 --J 4 --max-m 160 --out code8.json"
        )
    if code.k != 8 or code.J != 4:
        raise PresetError(f"preset high-rate needs k=8, J=4, the code given has k={code.k}, J={code.J}")
    report = validate_self_orthogonality(code)
    if not report.valid:
        raise PresetError(f"preset high-rate code is {report.message}")

    entries = [PresetEntry("pcc-1000", ScPccParams(
        code=code, block_size=1000, interleaver_seed=seed,
        vertical_iterations=16, schedule=Schedule.BLOCK
    ))]
    for m_sc in (1, 2):
        # T=1000 is not a multiple of 3; the m_sc=2 run uses the nearest valid size
        T = 1000 if 1000 % (m_sc + 1) == 0 else 1008
        entries.append(PresetEntry(f"scpcc-{T}-msc{m_sc}", ScPccParams(
            code=code, block_size=T, coupling_memory=m_sc, frame_length=10,
            interleaver_seed=seed, window_size=4, vertical_iterations=4,
            horizontal_iterations=2, termination=Termination.TERMINATE_BLOCKS
        )))
    return entries


PRESETS: Dict[str, Callable[[Optional[CsocCode], int], List[PresetEntry]]] = {
    'rate-half': _rate_half,
    'window-sweep': _window_sweep,
    'high-rate': _high_rate
}

# alternative names accepted by resolve_preset
PRESET_ALIASES: Dict[str, str] = {
    'fig4': 'rate-half',
    'fig5': 'window-sweep',
    'fig6': 'high-rate'
}


def preset_names() -> List[str]:
    return sorted(PRESETS) + sorted(PRESET_ALIASES)


def resolve_preset(name: str, code_path: Optional[str] = None, seed: int = 0) -> List[PresetEntry]:
    """Build the parameter sets of a preset; `code_path` overrides the default code."""
    canonical = PRESET_ALIASES.get(name, name)
    if canonical not in PRESETS:
        raise PresetError(f"unknown preset {name!r}; choose from {preset_names()}")
    code = load_code_file(code_path).code if code_path else None
    return PRESETS[canonical](code, seed)
