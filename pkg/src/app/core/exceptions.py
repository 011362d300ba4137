from typing import Any, Dict, Optional


class SsokError(Exception):
    """Base error carrying a machine readable code and details."""

    code = "SSOK_ERROR"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """Render the error the way the command line reports it."""
        return {
            "status": "error",
            "error": {
                "code": self.code,
                "message": self.message,
                "details": self.details or None,
            },
        }


class InvalidSimplicialDataError(SsokError):
    code = "INVALID_SIMPLICIAL_DATA"


class NotMonomorphismError(SsokError):
    code = "NOT_MONOMORPHISM"


class BudgetExceededError(SsokError):
    """Raised when a bounded search runs out of budget before deciding."""

    code = "BUDGET_EXCEEDED"

    def __init__(self, message: str, budget: int, used: int, details: Optional[Dict[str, Any]] = None):
        merged = {"budget": budget, "used": used}
        merged.update(details or {})
        super().__init__(message, merged)
        self.budget = budget
        self.used = used


class CertificateError(SsokError):
    code = "CERTIFICATE_ERROR"

    def __init__(self, message: str, step: Optional[int] = None, axiom: Optional[str] = None):
        super().__init__(message, {"step": step, "axiom": axiom})
        self.step = step
        self.axiom = axiom


class InsufficientDimensionError(SsokError):
    code = "INSUFFICIENT_DIMENSION"


class OperadAxiomError(SsokError):
    code = "OPERAD_AXIOM"


class ArityBoundError(SsokError):
    code = "ARITY_BOUND"


class NotActiveError(SsokError):
    code = "NOT_ACTIVE"


class NotAtomicError(SsokError):
    code = "NOT_ATOMIC"


class NotGroupError(SsokError):
    code = "NOT_GROUP"


class SchemaValidationError(SsokError):
    code = "SCHEMA_VALIDATION"
