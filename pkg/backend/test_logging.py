#!/usr/bin/env python3
"""
Tests for the structured logger
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import utils.enhanced_logger as enhanced
from utils.enhanced_logger import configure_logging, log_error, log_processing_step, log_simulation_point


def test_log_files_and_recent_entries(tmp_path):
    logger = configure_logging(str(tmp_path / "logs"))
    assert enhanced.enhanced_logger is logger

    log_processing_step("encode", "success", duration_ms=1.5, details={'frames': 2})
    log_simulation_point(ebno_db=1.0, frames=10, bit_errors=3, ber=3e-3, fer=0.2, elapsed_s=0.1)
    try:
        raise ValueError("block size 41 is odd")
    except ValueError as exc:
        error_id = log_error(exc, "test", block_size=41)

    assert error_id.startswith("ERR_")
    assert (tmp_path / "logs" / "app.log").exists()
    assert "block size 41" in (tmp_path / "logs" / "error.log").read_text()

    points = logger.get_recent_logs(log_type="simulation_point")
    assert points[-1]["bit_errors"] == 3
    summary = logger.get_error_summary()
    assert summary["total_errors"] == 1
    assert summary["error_types"] == {"ValueError": 1}
    assert summary["recent_errors"][0]["additional_info"] == {"block_size": 41}

    configure_logging(None)
