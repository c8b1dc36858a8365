"""
Error Hierarchy
===============

All domain errors derive from ScPccError. Bad-input conditions also derive
from ValueError so callers that only know about ValueError still catch them.
"""


class ScPccError(Exception):
    """Base class for all coding-toolkit errors."""


class CodeStructureError(ScPccError, ValueError):
    """A generator tap set is malformed (unsorted, out of range, non-uniform J)."""


class NotSelfOrthogonalError(ScPccError, ValueError):
    """A structurally valid code fails the self-orthogonality test."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class DimensionMismatchError(ScPccError, ValueError):
    """Array lengths or shapes disagree with each other or with the parameters."""


class CouplingConfigError(ScPccError, ValueError):
    """Coupling geometry is inconsistent (divisibility, ranges)."""


class ParameterError(ScPccError, ValueError):
    """Codec or decoder parameters violate an invariant."""


class AnalysisModeError(ScPccError, ValueError):
    """The requested analysis mode is undefined for these parameters."""


class ConfigHashMismatchError(ScPccError):
    """Stored results were produced by a different configuration."""


class PresetError(ScPccError):
    """A preset cannot be resolved with the inputs given."""


class FrameFormatError(ScPccError, ValueError):
    """A serialized frame file is corrupt or belongs to other parameters."""
