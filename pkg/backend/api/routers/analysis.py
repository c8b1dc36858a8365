from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, Field, ValidationError
from typing import Any, Dict, Optional
import logging

from core.analysis.complexity import AnalysisMode, computation, pcc_reference
from core.errors import ScPccError
from core.scpcc.codec import RateConvention, code_rate
from core.scpcc.params import ScPccParams
from output_formats.report_formatter import format_analysis_table

router = APIRouter()
logger = logging.getLogger(__name__)


class AnalysisRequest(BaseModel):
    params: Dict[str, Any] = Field(..., description="ScPccParams fields; 'code' may be a registry name")
    mode: AnalysisMode = AnalysisMode.EXACT
    compare_pcc: bool = False


def parse_params(data: Dict[str, Any]) -> ScPccParams:
    try:
        return ScPccParams.model_validate(data)
    except (ValidationError, ScPccError) as e:
        raise HTTPException(status_code=400, detail=str(e))


@router.post("")
async def analyze(request: AnalysisRequest):
    """Latency, memory and operation counts of a configuration"""
    params = parse_params(request.params)
    try:
        report = computation(params, request.mode)
        reference: Optional[Any] = computation(pcc_reference(params), request.mode) if request.compare_pcc else None
    except ScPccError as e:
        raise HTTPException(status_code=400, detail=str(e))

    response = {
        'config_hash': params.config_hash(),
        'rate': {
            'formula': float(code_rate(params, RateConvention.FORMULA)),
            'transmitted': float(code_rate(params, RateConvention.TRANSMITTED))
        },
        'report': report.to_dict(),
        'table': format_analysis_table(report, reference, config_hash=params.config_hash())
    }
    if reference is not None:
        response['reference'] = reference.to_dict()
    return response
