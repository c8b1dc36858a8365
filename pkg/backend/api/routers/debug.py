from fastapi import APIRouter, Query
from typing import Optional

import utils.enhanced_logger as enhanced

router = APIRouter()


@router.get("/logs")
async def get_recent_logs(
    log_type: Optional[str] = Query(None, description="Filter by log type: error, processing_step, simulation_point"),
    limit: int = Query(100, ge=1, le=1000, description="Number of recent entries to return")
):
    """Recent structured log entries and an error summary"""
    return {
        "recent_logs": enhanced.enhanced_logger.get_recent_logs(log_type=log_type, limit=limit),
        "error_summary": enhanced.enhanced_logger.get_error_summary()
    }
