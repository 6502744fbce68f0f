"""
Exception hierarchy shared by the library, the CLI and the HTTP API.

Each error knows its machine-readable code and the process exit status the
CLI should use for it.
"""
from typing import Any, Dict, Optional


class SheafCalcError(Exception):
    """Base class for all errors raised by sheafcalc."""

    code = "error"
    exit_code = 1
    http_status = 400

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.context = dict(context or {})

    def to_dict(self) -> Dict[str, Any]:
        """Error object as printed by the CLI and returned by the API."""
        return {"code": self.code, "message": self.message, "context": self.context}


class ValidationError(SheafCalcError):
    code = "invalid-argument"


class NotInvertibleError(SheafCalcError):
    code = "not-invertible"


class NoStableObjectError(SheafCalcError):
    """Rank and degree are not coprime, so no stable (simple) object exists."""

    code = "no-stable-object"


class UnsupportedReductionError(SheafCalcError):
    code = "unsupported-reduction"


class DecomposablePushforwardError(SheafCalcError):
    """The direct image splits; ``decomposition`` holds its summands."""

    code = "decomposable-pushforward"

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None, decomposition: Any = None):
        super().__init__(message, context)
        self.decomposition = decomposition


class InconclusiveError(SheafCalcError):
    """A randomized search ran out of attempts without a definite answer."""

    code = "inconclusive"
    exit_code = 2
    http_status = 409
