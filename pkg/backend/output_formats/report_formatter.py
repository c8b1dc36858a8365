import json
from typing import Dict, Optional

from core.analysis.complexity import ComplexityReport


def _number(value) -> str:
    if isinstance(value, float) and not value.is_integer():
        return f"{value:,.2f}"
    return f"{int(value):,}"


def build_analysis_rows(report: ComplexityReport) -> Dict[str, str]:
    """Label -> value rows of one configuration"""
    T = report.block_size
    return {
        "Mode": report.mode,
        "Block size T": _number(T),
        "Parallelism (k)": _number(report.parallelism),
        "Latency (symbols)": _number(report.latency.latency_symbols),
        "Minimum latency (symbols)": _number(report.latency.minimum_symbols),
        "Recommended window": _number(report.latency.recommended_window),
        "Encoder memory": _number(report.memory.encoder),
        "Decoder memory": _number(report.memory.decoder),
        "Nonzero terms": _number(report.nonzero_terms),
        "Multiplications": f"{_number(report.mul)} ({_number(report.mul / T)} T)",
        "Additions": f"{_number(report.add)} ({_number(report.add / T)} T)",
        "Box-plus": f"{_number(report.boxplus)} ({_number(report.boxplus / T)} T)",
        "Per component decoder": f"{_number(report.per_decoder)} ({_number(report.per_bit)} T)",
        "Vertical iterations / position": _number(report.iterations_per_position),
        "Total per window position": _number(report.per_position)
    }


def format_analysis_table(report: ComplexityReport,
                          reference: Optional[ComplexityReport] = None,
                          config_hash: Optional[str] = None) -> str:
    """
    Human-readable analysis table. With `reference` (usually the PCC with the
    same code and T) a second column is printed next to the first. A given
    `config_hash` is printed above the table.
    """
    rows = build_analysis_rows(report)
    ref_rows = build_analysis_rows(reference) if reference is not None else None
    label_width = max(len(label) for label in rows)
    value_width = max(len(value) for value in rows.values())

    header = f"{'Quantity':<{label_width}}  {'Configuration':>{value_width}}"
    if ref_rows is not None:
        header += f"  {'Reference':>12}"
    lines = [header, "-" * len(header)]
    if config_hash is not None:
        lines.insert(0, f"Config hash: {config_hash}")
    for label, value in rows.items():
        line = f"{label:<{label_width}}  {value:>{value_width}}"
        if ref_rows is not None:
            line += f"  {ref_rows[label]:>12}"
        lines.append(line)
    return "\n".join(lines)


def format_analysis_json(report: ComplexityReport,
                         reference: Optional[ComplexityReport] = None,
                         config_hash: Optional[str] = None) -> str:
    payload = {'configuration': report.to_dict()}
    if config_hash is not None:
        payload['config_hash'] = config_hash
    if reference is not None:
        payload['reference'] = reference.to_dict()
    return json.dumps(payload, indent=2, sort_keys=True)
