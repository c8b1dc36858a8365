#!/usr/bin/env python3
"""
API Integration Test Suite
==========================

Exercises the HTTP surface with FastAPI's TestClient:
1. Health endpoints
2. Code registry, validation, upload and search
3. Analysis and bounded BER point runs
4. Debug log access
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import json

import pytest
from fastapi.testclient import TestClient

from main import app

client = TestClient(app)

SMALL_PARAMS = {
    'code': "csoc_3_2_13",
    'block_size': 40,
    'coupling_memory': 1,
    'frame_length': 2,
    'window_size': 2
}


def test_health():
    assert client.get("/health").json() == {"status": "healthy"}
    assert client.get("/").status_code == 200


def test_list_codes():
    response = client.get("/api/codes")
    assert response.status_code == 200
    codes = response.json()
    assert codes["csoc_3_2_13"]["generators"] == ["1001100000001", "10100001000001"]


def test_validate_shipped_code():
    response = client.post("/api/codes/validate", json={'generators': ["1001100000001", "10100001000001"]})
    assert response.status_code == 200
    data = response.json()
    assert data["valid"] is True
    assert (data["k"], data["m"], data["J"]) == (2, 13, 4)
    assert [check["offset"] for check in data["check_sets"][0]] == [0, 3, 4, 12]


def test_validate_reports_repeated_difference():
    response = client.post("/api/codes/validate", json={'generators': [[0, 1, 3, 4]]})
    assert response.status_code == 200
    data = response.json()
    assert data["valid"] is False
    assert data["difference"] in (1, 3)
    assert data["check_sets"] is None


def test_validate_rejects_malformed_code():
    response = client.post("/api/codes/validate", json={'generators': [[0, 3, 3]]})
    assert response.status_code == 400
    response = client.post("/api/codes/validate", json={'generators': ["10x1"]})
    assert response.status_code == 400


def test_validate_uploaded_file():
    content = json.dumps({'name': "ruler", 'generators': [[0, 1, 4, 6]]}).encode()
    response = client.post("/api/codes/validate-file",
                           files={'file': ("ruler.json", content, "application/json")})
    assert response.status_code == 200
    assert response.json()["valid"] is True

    response = client.post("/api/codes/validate-file",
                           files={'file': ("broken.json", b"{nope", "application/json")})
    assert response.status_code == 400


def test_search():
    response = client.post("/api/codes/search", json={'k': 1, 'J': 4, 'max_m': 6})
    assert response.status_code == 200
    assert response.json()["generators"] == [[0, 1, 4, 6]]

    response = client.post("/api/codes/search", json={'k': 2, 'J': 3, 'max_m': 5})
    assert response.status_code == 404


def test_analysis():
    params = {**SMALL_PARAMS, 'block_size': 400, 'window_size': 3}
    response = client.post("/api/analysis", json={'params': params, 'compare_pcc': True})
    assert response.status_code == 200
    data = response.json()
    assert data["report"]["latency"]["latency_symbols"] == 1200
    assert data["report"]["per_decoder"] == 30 * 400
    assert data["reference"]["latency"]["latency_symbols"] == 400
    assert data["rate"]["formula"] == pytest.approx(400 / 828)
    assert "1,200" in data["table"]
    assert f"Config hash: {data['config_hash']}" in data["table"]


def test_analysis_rejects_bad_parameters():
    params = {**SMALL_PARAMS, 'block_size': 41}
    assert client.post("/api/analysis", json={'params': params}).status_code == 400
    params = {**SMALL_PARAMS, 'code': {'generators': [[0, 1, 3]]}, 'block_size': 10, 'coupling_memory': 0}
    response = client.post("/api/analysis", json={'params': params, 'mode': "empirical"})
    assert response.status_code == 400


def test_simulation_point():
    response = client.post("/api/simulations/point",
                           json={'params': SMALL_PARAMS, 'ebno_db': 15.0, 'frames': 3})
    assert response.status_code == 200
    data = response.json()
    assert data["frames"] == 3
    assert data["bit_errors"] == 0
    assert len(data["config_hash"]) == 64


def test_uncoded_simulation_point_reports_theory():
    response = client.post("/api/simulations/point", json={
        'params': {**SMALL_PARAMS, 'block_size': 200}, 'ebno_db': 2.0, 'frames': 5, 'uncoded': True
    })
    assert response.status_code == 200
    assert response.json()["theory_ber"] == pytest.approx(0.0375, abs=1e-3)


def test_simulation_point_frame_limit():
    response = client.post("/api/simulations/point",
                           json={'params': SMALL_PARAMS, 'ebno_db': 3.0, 'frames': 201})
    assert response.status_code == 422


def test_debug_logs():
    client.post("/api/simulations/point", json={'params': SMALL_PARAMS, 'ebno_db': 15.0, 'frames': 1})
    response = client.get("/api/debug/logs", params={'log_type': "simulation_point", 'limit': 5})
    assert response.status_code == 200
    data = response.json()
    assert data["recent_logs"]
    assert "error_summary" in data
