from .complexity import (
    AnalysisMode,
    LatencyReport,
    MemoryReport,
    ComplexityReport,
    latency,
    memory,
    nonzero_terms,
    computation,
    pcc_reference
)

__all__ = [
    'AnalysisMode',
    'LatencyReport',
    'MemoryReport',
    'ComplexityReport',
    'latency',
    'memory',
    'nonzero_terms',
    'computation',
    'pcc_reference'
]
