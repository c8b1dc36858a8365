from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, Field, ValidationError
from typing import Any, Dict
import logging

from core.errors import ScPccError
from core.simulation.harness import SimConfig, run_sweep, uncoded_ber
from .analysis import parse_params

router = APIRouter()
logger = logging.getLogger(__name__)

# keeps a request inside one HTTP round trip
MAX_FRAMES_PER_REQUEST = 200


class SimulationPointRequest(BaseModel):
    params: Dict[str, Any]
    ebno_db: float
    frames: int = Field(20, ge=1, le=MAX_FRAMES_PER_REQUEST)
    min_bit_errors: int = Field(100, ge=1)
    seed: int = Field(0, ge=0)
    uncoded: bool = False


@router.post("/point")
async def simulate_point(request: SimulationPointRequest):
    """Bounded single-point BER run (no files written)"""
    params = parse_params(request.params)
    try:
        config = SimConfig(
            params=params,
            ebno_db_list=[request.ebno_db],
            max_frames=request.frames,
            min_bit_errors=request.min_bit_errors,
            master_seed=request.seed,
            uncoded=request.uncoded,
            threads=1
        )
        stats = run_sweep(config)[0]
    except (ValidationError, ScPccError) as e:
        raise HTTPException(status_code=400, detail=str(e))

    result = {
        'config_hash': config.config_hash(),
        **stats.to_row(),
        'standard_error': stats.standard_error
    }
    if request.uncoded:
        result['theory_ber'] = uncoded_ber(request.ebno_db)
    return result
