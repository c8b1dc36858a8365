from fastapi import APIRouter, File, HTTPException, UploadFile
from pydantic import BaseModel, Field
from typing import Any, Dict, List, Optional
import json
import logging

from core.codes.code_registry import CodeSpecification, code_registry
from core.codes.code_search import search_csoc
from core.codes.csoc import CsocCode, build_check_sets, validate_self_orthogonality
from core.errors import ScPccError

router = APIRouter()
logger = logging.getLogger(__name__)

MAX_SEARCH_NODES = 500_000


class CodeValidationRequest(BaseModel):
    generators: List[Any] = Field(..., description="bit strings ('1001100000001') or tap lists")
    m: Optional[int] = None


class CodeValidationResponse(BaseModel):
    valid: bool
    k: int
    m: int
    J: int
    generators: List[str]
    message: str
    difference: Optional[int] = None
    check_sets: Optional[List[List[Dict[str, Any]]]] = None


class CodeSearchRequest(BaseModel):
    k: int = Field(..., ge=1, le=16)
    J: int = Field(..., ge=1, le=8)
    max_m: int = Field(..., ge=0, le=400)
    seed: int = 0
    restarts: int = Field(8, ge=0, le=32)


def _describe(code: CsocCode) -> CodeValidationResponse:
    report = validate_self_orthogonality(code)
    check_sets = None
    if report.valid:
        check_sets = [
            [
                {'offset': check.offset, 'participants': [list(p) for p in check.participants]}
                for check in build_check_sets(code).for_stream(i)
            ]
            for i in range(code.k)
        ]
    return CodeValidationResponse(
        valid=report.valid,
        k=code.k,
        m=code.m,
        J=code.J,
        generators=code.to_bit_strings(),
        message=report.message,
        difference=report.violation.difference if report.violation else None,
        check_sets=check_sets
    )


@router.get("")
async def list_codes():
    """Codes shipped with the toolkit"""
    return {
        name: {**spec.to_dict(), 'generators': spec.code.to_bit_strings()}
        for name, spec in code_registry.get_all().items()
    }


@router.post("/validate", response_model=CodeValidationResponse)
async def validate_code(request: CodeValidationRequest):
    try:
        code = CsocCode.from_dict({'generators': request.generators, 'm': request.m})
    except (ScPccError, TypeError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    return _describe(code)


@router.post("/validate-file", response_model=CodeValidationResponse)
async def validate_code_file(file: UploadFile = File(...)):
    """Validate an uploaded code description (JSON)"""
    content = await file.read()
    try:
        data = json.loads(content.decode("utf-8"))
        spec = CodeSpecification.from_dict(data, source=file.filename or "")
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise HTTPException(status_code=400, detail=f"not a JSON code description: {e}")
    except ScPccError as e:
        raise HTTPException(status_code=400, detail=str(e))
    logger.info(f"Validated uploaded code {spec.name}")
    return _describe(spec.code)


@router.post("/search")
async def search_code(request: CodeSearchRequest):
    code = search_csoc(request.k, request.J, request.max_m, seed=request.seed,
                       restarts=request.restarts, max_nodes=MAX_SEARCH_NODES)
    if code is None:
        raise HTTPException(
            status_code=404,
            detail=f"no code with k={request.k}, J={request.J}, m <= {request.max_m} found"
        )
    return {**code.to_dict(), 'bit_strings': code.to_bit_strings()}
