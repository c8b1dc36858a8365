"""
Sliding-Window Turbo Threshold Decoding
=======================================

The decoder walks a window of w coupled times over the frame. At target
time t the window covers t .. t+w-1 (clipped to the frame). One vertical
iteration at time tau runs both component decoders once, serially:

    decoder 1 on the plain coupled block, a priori from E2, writes E1
    decoder 2 on the permuted coupled block, a priori from E1, writes E2

A horizontal iteration sweeps the window forward and back with I_V vertical
iterations per block. After I_H horizontal iterations the source bits whose
last sub-block sits in the target block are decided and the window advances.

E1 and E2 hold one error-domain extrinsic per source bit. Writes replace the
previous value; reads use the coupling map of the reading decoder. The a priori
a decoder sees is the other store scaled by extrinsic_scale and clipped to
+-extrinsic_limit.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from ..errors import ParameterError
from ..scpcc.codec import LlrFrame, component_input, multiplex
from ..scpcc.coupling import CouplingMap, CouplingPath, gather_block, scatter_block
from ..scpcc.params import Schedule, ScPccParams
from .threshold import LlrBlock, ThresholdDecoder

logger = logging.getLogger(__name__)


class TraceEntry(NamedTuple):
    target: int
    tau: int
    path: CouplingPath


@dataclass
class ExtrinsicStore:
    """E1 (written by the plain-path decoder) and E2 (permuted path), shape (L, T) each."""
    plain: NDArray[np.float64]
    permuted: NDArray[np.float64]
    cap: float

    @classmethod
    def zeros(cls, L: int, T: int, cap: float) -> "ExtrinsicStore":
        return cls(plain=np.zeros((L, T)), permuted=np.zeros((L, T)), cap=cap)

    def written_by(self, path: CouplingPath) -> NDArray[np.float64]:
        return self.plain if CouplingPath(path) is CouplingPath.PLAIN else self.permuted

    def read_for(self, coupling: CouplingMap, path: CouplingPath, tau: int) -> NDArray[np.float64]:
        """A priori for the decoder on `path`: the other decoder's store, in this path's order."""
        other = self.permuted if CouplingPath(path) is CouplingPath.PLAIN else self.plain
        return gather_block(coupling, other, path, tau, fill=0.0)

    def write(self, coupling: CouplingMap, path: CouplingPath, tau: int, values: NDArray) -> None:
        scatter_block(coupling, self.written_by(path), path, tau,
                      np.clip(values, -self.cap, self.cap))

    def total(self) -> NDArray[np.float64]:
        return self.plain + self.permuted


@dataclass
class DecodeReport:
    """Counters and flip statistics of one frame decode."""
    schedule: str
    window_positions: int = 0
    scheduled_vertical: int = 0
    executed_vertical: int = 0
    component_calls: int = 0
    flips_per_time: List[int] = field(default_factory=list)
    decision_flips: int = 0
    elapsed_ms: float = 0.0
    trace: Optional[List[TraceEntry]] = None

    @property
    def vertical_per_position(self) -> float:
        if not self.window_positions:
            return 0.0
        return self.scheduled_vertical / self.window_positions

    def to_dict(self) -> Dict:
        data = {
            'schedule': self.schedule,
            'window_positions': self.window_positions,
            'scheduled_vertical': self.scheduled_vertical,
            'executed_vertical': self.executed_vertical,
            'vertical_per_position': self.vertical_per_position,
            'component_calls': self.component_calls,
            'flips_per_time': list(self.flips_per_time),
            'decision_flips': self.decision_flips,
            'elapsed_ms': round(self.elapsed_ms, 3)
        }
        if self.trace is not None:
            data['trace'] = [[e.target, e.tau, e.path.value] for e in self.trace]
        return data

    def to_text(self) -> str:
        lines = [
            f"schedule: {self.schedule}",
            f"window positions: {self.window_positions}",
            f"vertical iterations: {self.scheduled_vertical} scheduled, {self.executed_vertical} executed",
            f"component decoder calls: {self.component_calls}",
            f"flips per coupled time: {' '.join(str(f) for f in self.flips_per_time)}",
            f"decisions differing from channel: {self.decision_flips}"
        ]
        if self.trace is not None:
            lines.append("trace (target tau path):")
            lines.extend(f"  {e.target} {e.tau} {e.path.value}" for e in self.trace)
        return "\n".join(lines)


@dataclass
class WindowState:
    """Everything that changes while one frame is decoded."""
    received: LlrFrame
    store: ExtrinsicStore
    report: DecodeReport
    target: int = 0
    decisions: Optional[NDArray[np.uint8]] = None
    decided: Optional[NDArray[np.bool_]] = None


class WindowDecoder:
    """Frame decoder for one ScPccParams; reusable across frames."""

    def __init__(self, params: ScPccParams, coupling: Optional[CouplingMap] = None,
                 trace: bool = False):
        self.params = params
        self.coupling = coupling or params.coupling_map()
        self.component = ThresholdDecoder(params.code, mode=params.boxplus_mode, cap=params.llr_cap)
        self.trace = trace
        self._decision_time = self.coupling.decision_time()
        self._channel_inputs: Dict[Tuple[int, CouplingPath], NDArray] = {}

    @property
    def span(self) -> int:
        """Blocks covered by one window position."""
        if self.params.schedule is Schedule.BLOCK:
            return 1
        return self.params.window_size

    def window(self, state: WindowState) -> range:
        """Coupled times of the current window, clipped to the frame."""
        end = min(state.target + self.span, self.params.coupled_blocks)
        return range(state.target, end)

    def start(self, received: LlrFrame) -> WindowState:
        params = self.params
        received.check_shape(params)
        self._channel_inputs = {}
        for tau in range(params.coupled_blocks):
            for path in CouplingPath:
                systematic = gather_block(self.coupling, received.systematic, path, tau, fill=np.inf)
                self._channel_inputs[tau, path] = component_input(params, systematic, tail_fill=np.inf)

        report = DecodeReport(
            schedule=params.schedule.value,
            flips_per_time=[0] * params.coupled_blocks,
            trace=[] if self.trace else None
        )
        return WindowState(
            received=received,
            store=ExtrinsicStore.zeros(params.frame_length, params.block_size, params.llr_cap),
            report=report,
            decisions=np.zeros((params.frame_length, params.block_size), dtype=np.uint8),
            decided=np.zeros((params.frame_length, params.block_size), dtype=bool)
        )

    def _run_component(self, state: WindowState, path: CouplingPath, tau: int) -> int:
        params = self.params
        parity = state.received.parity1 if path is CouplingPath.PLAIN else state.received.parity2
        apriori = np.clip(params.extrinsic_scale * state.store.read_for(self.coupling, path, tau),
                          -params.extrinsic_limit, params.extrinsic_limit)
        output = self.component.decode(
            LlrBlock(self._channel_inputs[tau, path], parity[tau]),
            component_input(params, apriori, tail_fill=0.0)
        )
        extrinsic = multiplex(output.extrinsic[:, :params.stream_length])
        state.store.write(self.coupling, path, tau, extrinsic)

        state.report.component_calls += 1
        if state.report.trace is not None:
            state.report.trace.append(TraceEntry(state.target, tau, path))
        return output.flips

    def vertical_iteration(self, state: WindowState, tau: int) -> WindowState:
        """One turbo cycle at coupled time tau: decoder 1, then decoder 2."""
        if tau not in self.window(state):
            raise ParameterError(
                f"coupled time {tau} is outside the window {list(self.window(state))} "
                f"at target {state.target}"
            )
        flips = self._run_component(state, CouplingPath.PLAIN, tau)
        flips += self._run_component(state, CouplingPath.PERMUTED, tau)
        state.report.executed_vertical += 1
        state.report.flips_per_time[tau] += flips
        return state

    def _visit(self, state: WindowState, tau: int) -> None:
        # clipped blocks are virtual and known: counted, no work
        for _ in range(self.params.vertical_iterations):
            state.report.scheduled_vertical += 1
            if tau < self.params.coupled_blocks:
                self.vertical_iteration(state, tau)

    def horizontal_iteration(self, state: WindowState) -> WindowState:
        """Forward sweep t .. t+w-1, then backward sweep t+w-1 .. t."""
        taus = range(state.target, state.target + self.params.window_size)
        for tau in taus:
            self._visit(state, tau)
        for tau in reversed(taus):
            self._visit(state, tau)
        return state

    def decide_target(self, state: WindowState) -> int:
        """Decide the source bits whose last sub-block is the target block; returns their count."""
        mask = self._decision_time == state.target
        channel = np.clip(state.received.systematic, -self.params.llr_cap, self.params.llr_cap)
        sign = np.where(channel < 0, -1.0, 1.0)
        statistic = channel + sign * state.store.total()
        state.decisions[mask] = (statistic[mask] < 0).astype(np.uint8)
        state.decided[mask] = True
        state.report.decision_flips += int(np.count_nonzero(
            state.decisions[mask] != (channel[mask] < 0)
        ))
        return int(mask.sum())

    def decode(self, received: LlrFrame) -> Tuple[NDArray[np.uint8], DecodeReport]:
        params = self.params
        started = time.perf_counter()
        state = self.start(received)

        for target in range(params.coupled_blocks):
            state.target = target
            state.report.window_positions += 1
            if params.schedule is Schedule.BLOCK:
                self._visit(state, target)
            else:
                for _ in range(params.horizontal_iterations):
                    self.horizontal_iteration(state)
            decided = self.decide_target(state)
            logger.debug(f"target {target}: {decided} bits decided")

        assert state.decided.all(), "every source bit must be decided exactly at its decision time"
        state.report.elapsed_ms = (time.perf_counter() - started) * 1000.0
        return state.decisions, state.report


def decode_frame(params: ScPccParams, received: LlrFrame,
                 trace: bool = False) -> Tuple[NDArray[np.uint8], DecodeReport]:
    """Decode one received frame with a fresh decoder."""
    return WindowDecoder(params, trace=trace).decode(received)
