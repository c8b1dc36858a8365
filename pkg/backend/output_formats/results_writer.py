"""
BER results persistence: a CSV per sweep plus a JSON config echo next to it.

CSV columns: ebno_db,frames,bits,bit_errors,frame_errors,ber,fer,seed,elapsed_s
Values are formatted as text before pandas writes them, so equal statistics
always give byte-equal files.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

logger = logging.getLogger(__name__)

RESULT_COLUMNS = [
    'ebno_db', 'frames', 'bits', 'bit_errors', 'frame_errors', 'ber', 'fer', 'seed', 'elapsed_s'
]
ECHO_SUFFIX = ".config.json"
EBNO_DECIMALS = 4


def echo_path(results_path: Union[str, Path]) -> Path:
    results_path = Path(results_path)
    return results_path.with_name(results_path.stem + ECHO_SUFFIX)


def ebno_key(ebno_db: float) -> float:
    """An E_b/N_0 point as it reads back from a results file."""
    return round(float(ebno_db), EBNO_DECIMALS)


def format_rows(rows: List[Dict[str, Any]], record_timing: bool = False) -> pd.DataFrame:
    """Render result rows (dicts keyed by RESULT_COLUMNS) into a text-valued frame."""
    formatted = []
    for row in rows:
        formatted.append({
            'ebno_db': f"{row['ebno_db']:.{EBNO_DECIMALS}f}",
            'frames': str(int(row['frames'])),
            'bits': str(int(row['bits'])),
            'bit_errors': str(int(row['bit_errors'])),
            'frame_errors': str(int(row['frame_errors'])),
            'ber': f"{row['ber']:.6e}",
            'fer': f"{row['fer']:.6e}",
            'seed': str(int(row['seed'])),
            'elapsed_s': f"{row['elapsed_s']:.3f}" if record_timing else "0.000"
        })
    return pd.DataFrame(formatted, columns=RESULT_COLUMNS)


def write_results(path: Union[str, Path], rows: List[Dict[str, Any]],
                  record_timing: bool = False) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    format_rows(rows, record_timing).to_csv(tmp, index=False, lineterminator="\n")
    tmp.replace(path)
    logger.debug(f"Flushed {len(rows)} result rows to {path}")
    return path


def read_results(path: Union[str, Path]) -> List[Dict[str, Any]]:
    """Parse a results CSV back into typed rows."""
    frame = pd.read_csv(path)
    missing = set(RESULT_COLUMNS) - set(frame.columns)
    if missing:
        raise ValueError(f"{path}: results file lacks columns {sorted(missing)}")
    rows = []
    for record in frame.to_dict(orient="records"):
        rows.append({
            'ebno_db': float(record['ebno_db']),
            'frames': int(record['frames']),
            'bits': int(record['bits']),
            'bit_errors': int(record['bit_errors']),
            'frame_errors': int(record['frame_errors']),
            'ber': float(record['ber']),
            'fer': float(record['fer']),
            'seed': int(record['seed']),
            'elapsed_s': float(record['elapsed_s'])
        })
    return rows


def write_config_echo(results_path: Union[str, Path], config_hash: str,
                      config: Dict[str, Any]) -> Path:
    path = echo_path(results_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {'config_hash': config_hash, 'config': config}
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def read_config_echo(results_path: Union[str, Path]) -> Optional[Dict[str, Any]]:
    path = echo_path(results_path)
    if not path.exists():
        return None
    return json.loads(path.read_text(encoding="utf-8"))
