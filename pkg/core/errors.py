from typing import Any, Dict, Optional


class BeurlingError(Exception):
    """Base class for every error raised by the library."""


class DomainError(BeurlingError, ValueError):
    """A mathematical precondition of an operation does not hold."""


class PreconditionError(BeurlingError):
    """An operational precondition (search parameters, hypotheses) does not hold."""


class NotFoundError(BeurlingError):
    """A bounded search finished without a result."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class CertificationError(BeurlingError):
    """A certificate identity failed; the construction or the arithmetic is wrong."""

    def __init__(self, message: str, trace: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.trace = trace or {}


class ResidualCollisionError(CertificationError):
    """A violation found in the region covered only by the residual measure bound."""


class GenSpecSyntaxError(DomainError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position
