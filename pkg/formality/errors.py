"""
Formality Toolkit Errors

Exception hierarchy shared by all modules. The command line maps
InputError to exit status 2 and VerdictError to exit status 1.
"""

from typing import Any, Optional


class FormalityError(Exception):
    """Base class for toolkit errors."""


class InputError(FormalityError, ValueError):
    """Malformed input or violated precondition."""


class SchemaError(InputError):
    """Document that does not parse; `pointer` is a JSON pointer into it."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


class VerdictError(FormalityError):
    """A mathematical verdict is negative and the operation cannot proceed."""

    def __init__(self, message: str, locus: Optional[Any] = None):
        super().__init__(message)
        self.locus = locus


class NotTateError(VerdictError):
    """Eigenvalues outside the powers of q (defect = missing dimension)."""

    def __init__(self, message: str, defect: int, locus: Optional[Any] = None):
        super().__init__(message, locus)
        self.defect = defect


class UnsupportedEigenvalueError(VerdictError):
    """Eigenvalue that is not an integer power of q (general Weil numbers)."""


class PurityError(VerdictError):
    """Homology is not concentrated on the weight diagonal."""


class NotConnectedError(VerdictError):
    """Cohomology fails the connectivity required by an operation."""
