from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel


class ErrorReport(BaseModel):
    """Machine-readable form of a failure, printed by the CLI on stderr"""
    error: str
    message: str
    details: Optional[Dict[str, Any]] = None


class GSVError(Exception):
    """Base class of every signalled failure in the solver stack"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_report(self) -> ErrorReport:
        return ErrorReport(
            error=type(self).__name__,
            message=self.message,
            details=self.details or None,
        )


class InputError(GSVError, ValueError):
    """User data outside the admissible set (states, config keys, grids)"""


class HyperbolicityError(InputError):
    """Slip parameter outside the hyperbolic range zeta <= 1/2"""


class DomainError(GSVError, ValueError):
    """Argument outside the domain of a curve or inversion"""


class VacuumError(DomainError):
    """The requested wave would need (or approach) the vacuum state h = 0"""


class NumericalError(GSVError, ArithmeticError):
    """Iteration failed to converge or a positivity identity broke down"""


class StabilityError(GSVError):
    """A finite-volume cell left the admissible set after an update"""

    def __init__(self, message: str, cell: int, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, {"cell": cell, **(details or {})})
        self.cell = cell


class SimulationAborted(GSVError):
    """A run stopped early; carries the snapshots emitted before the failure"""

    def __init__(self, message: str, snapshots: List[Tuple[float, Any]], cause: GSVError):
        details = {"cause": cause.to_report().model_dump(), "n_snapshots": len(snapshots)}
        super().__init__(message, details)
        self.snapshots = snapshots
        self.cause = cause
