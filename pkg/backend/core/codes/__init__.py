"""
Component Code Package
======================

CSOC definition, validation, encoding, syndrome formation, code search and
the registry of shipped codes.
"""

from .csoc import (
    CsocCode,
    CheckSet,
    OrthogonalCheck,
    Participant,
    OrthogonalityReport,
    OrthogonalityViolation,
    parse_generator_bits,
    validate_self_orthogonality,
    find_repeated_participant,
    build_check_sets,
    encode_block,
    form_syndromes
)
from .code_search import search_csoc
from .code_registry import (
    CodeSpecification,
    CodeRegistry,
    code_registry,
    get_code,
    load_code_file,
    save_code_file
)

__all__ = [
    'CsocCode',
    'CheckSet',
    'OrthogonalCheck',
    'Participant',
    'OrthogonalityReport',
    'OrthogonalityViolation',
    'parse_generator_bits',
    'validate_self_orthogonality',
    'find_repeated_participant',
    'build_check_sets',
    'encode_block',
    'form_syndromes',
    'search_csoc',
    'CodeSpecification',
    'CodeRegistry',
    'code_registry',
    'get_code',
    'load_code_file',
    'save_code_file'
]
