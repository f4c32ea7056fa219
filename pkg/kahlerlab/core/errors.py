"""
Domain exceptions for KahlerLab.

Every failure raised by the computational core derives from KahlerLabError so
the command layer can map it to an exit code with a single except clause.
"""

from typing import Any, List, Optional


class KahlerLabError(Exception):
    """Base class for all KahlerLab errors."""


class ConfigError(KahlerLabError):
    """Invalid run configuration, suite manifest or command-line value."""


class ShapeError(KahlerLabError):
    """Operands live in different jet spaces or have incompatible tensor shapes."""


class DegreeError(KahlerLabError):
    """A jet does not carry enough orders for the requested derivative."""


class SingularInputError(KahlerLabError):
    """Division, logarithm or inverse of something with a vanishing constant term."""


class NotAMetricError(KahlerLabError):
    """A metric candidate is not positive definite."""

    def __init__(self, message: str, node: Optional[int] = None):
        super().__init__(message)
        self.node = node


class InfeasibleError(KahlerLabError):
    """The order-by-order constraint system has no solution at some order."""

    def __init__(self, message: str, order: int):
        super().__init__(f"{message} (order {order})")
        self.order = order


class ObstructionError(KahlerLabError):
    """A formal solution cannot be continued past some order."""

    def __init__(self, message: str, order: int, component: Any = None):
        super().__init__(f"{message} (order {order})")
        self.order = order
        self.component = component


class GaugeError(KahlerLabError):
    """Linear deformation data is not harmonic."""


class DGLAValidationError(KahlerLabError):
    """A DGLA instance violates one of its axioms."""

    def __init__(self, message: str, witnesses: Optional[List[Any]] = None):
        super().__init__(message)
        self.witnesses = list(witnesses or [])


class ConditioningError(KahlerLabError):
    """A Gram matrix is too ill-conditioned for a reliable eigensolve."""


class ZeroFieldError(KahlerLabError):
    """A vector field expected to be nonzero vanishes on the grid."""


class SolverError(KahlerLabError):
    """A linear solve or eigensolve failed."""
