"""
SC-PCC codec configuration.

ScPccParams is the single description of a code + decoder setup. It is
JSON-loadable; the component code is given inline as a code description or
by registry name.
"""

import hashlib
import json
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

from ..codes.code_registry import DEFAULT_CODE, get_code, load_code_file
from ..codes.csoc import CsocCode
from ..decoders.threshold import DEFAULT_EXTRINSIC_LIMIT, DEFAULT_LLR_CAP, BoxplusMode
from ..errors import ParameterError
from .coupling import CouplingMap, Interleaver, build_coupling_map, build_interleaver


class Termination(str, Enum):
    TERMINATE_BLOCKS = "terminate-blocks"
    UNTERMINATED = "unterminated"


class Schedule(str, Enum):
    WINDOW = "window"  # sliding window, vertical + horizontal iterations
    BLOCK = "block"    # uncoupled PCC: I_V turbo iterations per block


class ScPccParams(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, extra="forbid")

    code: CsocCode
    block_size: int = Field(..., ge=1, description="T, information bits per source block")
    coupling_memory: int = Field(0, ge=0, description="m_sc")
    frame_length: int = Field(1, ge=1, description="L, source blocks per frame")
    interleaver_seed: Optional[int] = Field(0, description="None selects the identity interleaver")
    window_size: int = Field(1, ge=1, description="w")
    vertical_iterations: int = Field(1, ge=1, description="I_V")
    horizontal_iterations: int = Field(1, ge=1, description="I_H")
    boxplus_mode: BoxplusMode = BoxplusMode.APPROX
    extrinsic_scale: float = Field(1.0, ge=0.0)
    extrinsic_limit: float = Field(DEFAULT_EXTRINSIC_LIMIT, gt=0.0,
                                   description="magnitude bound on the exchanged a priori")
    termination: Termination = Termination.TERMINATE_BLOCKS
    schedule: Schedule = Schedule.WINDOW
    llr_cap: float = Field(DEFAULT_LLR_CAP, gt=0.0)

    @field_validator("code", mode="before")
    @classmethod
    def _parse_code(cls, value: Any) -> CsocCode:
        if isinstance(value, CsocCode):
            return value
        if isinstance(value, str):
            if value.endswith(".json"):
                return load_code_file(value).code
            try:
                return get_code(value)
            except KeyError as exc:
                raise ValueError(str(exc)) from exc
        if isinstance(value, dict):
            return CsocCode.from_dict(value)
        raise ValueError(f"cannot interpret component code {value!r}")

    @field_serializer("code")
    def _dump_code(self, code: CsocCode) -> Dict:
        return code.to_dict()

    @model_validator(mode="after")
    def _check_geometry(self) -> "ScPccParams":
        T, m_sc, k = self.block_size, self.coupling_memory, self.code.k
        if T % (m_sc + 1):
            raise ParameterError(f"block size T={T} must be a multiple of m_sc+1={m_sc + 1}")
        if T % k:
            raise ParameterError(f"block size T={T} must be a multiple of k={k}")
        if self.schedule is Schedule.WINDOW and self.window_size < m_sc + 1:
            raise ParameterError(f"window size w={self.window_size} must be >= m_sc+1={m_sc + 1}")
        if self.schedule is Schedule.BLOCK and m_sc != 0:
            raise ParameterError("the block (PCC) schedule requires m_sc = 0")
        return self

    @property
    def k(self) -> int:
        return self.code.k

    @property
    def coupled_blocks(self) -> int:
        return self.frame_length + self.coupling_memory

    @property
    def stream_length(self) -> int:
        """Information bits per stream of one coupled block, T/k."""
        return self.block_size // self.code.k

    @property
    def tail_length(self) -> int:
        """Termination zeros per stream, m+1, or 0 when unterminated."""
        if self.termination is Termination.TERMINATE_BLOCKS:
            return self.code.m + 1
        return 0

    @property
    def encoded_length(self) -> int:
        """Per-stream component block length, (T+nu)/k or T/k."""
        return self.stream_length + self.tail_length

    @property
    def vertical_per_position(self) -> int:
        """Vertical iterations scheduled per target block (I_w for the window schedule)."""
        if self.schedule is Schedule.BLOCK:
            return self.vertical_iterations
        return 2 * self.window_size * self.vertical_iterations * self.horizontal_iterations

    def interleaver(self) -> Interleaver:
        return build_interleaver(
            self.block_size,
            seed=self.interleaver_seed,
            identity=self.interleaver_seed is None
        )

    def coupling_map(self, interleaver: Optional[Interleaver] = None) -> CouplingMap:
        return build_coupling_map(
            self.block_size, self.coupling_memory, self.frame_length,
            interleaver or self.interleaver()
        )

    def canonical_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ScPccParams":
        return cls.model_validate(json.loads(Path(path).read_text(encoding="utf-8")))


def default_params(**overrides: Any) -> ScPccParams:
    """Rate-1/2 setup on the shipped (3,2,13) code; keyword overrides win."""
    values: Dict[str, Any] = {'code': DEFAULT_CODE, 'block_size': 400}
    values.update(overrides)
    return ScPccParams(**values)
