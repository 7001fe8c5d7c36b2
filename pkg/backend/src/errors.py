"""Error hierarchy for CloudChem.

Every error carries the ``code``/``message``/``details`` envelope used in
reports and on standard error, plus the process exit code the CLI maps it to.
"""

from typing import Any, Dict, List, Optional


class CloudChemError(Exception):
    """Base class for all toolkit errors."""

    code: str = "CLOUDCHEM_ERROR"
    exit_code: int = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """Return the error envelope."""
        return {"code": self.code, "message": self.message, "details": self.details}


class InputFormatError(CloudChemError):
    """Malformed input file content."""

    code = "INPUT_FORMAT_ERROR"

    def __init__(self, message: str, line: Optional[int] = None, **details: Any):
        if line is not None:
            details["line"] = line
            message = f"line {line}: {message}"
        super().__init__(message, details)
        self.line = line


class UnsupportedGeometryError(CloudChemError):
    """Integral requested for primitives the closed forms do not cover."""

    code = "UNSUPPORTED_GEOMETRY"


class LinearDependenceError(CloudChemError):
    """Basis overlap matrix is not safely positive definite."""

    code = "LINEAR_DEPENDENCE"

    def __init__(self, smallest_eigenvalue: float):
        super().__init__(
            f"basis is linearly dependent (smallest overlap eigenvalue {smallest_eigenvalue:.3e})",
            {"smallest_eigenvalue": smallest_eigenvalue},
        )
        self.smallest_eigenvalue = smallest_eigenvalue


class OrbitalValidationError(CloudChemError):
    """Orbitals violate normalization or same-spin orthogonality."""

    code = "ORBITAL_VALIDATION_ERROR"


class SingularPotentialError(CloudChemError):
    """Potential evaluated on top of a point nucleus."""

    code = "SINGULAR_POTENTIAL"

    def __init__(self, nucleus_index: int):
        super().__init__(
            f"potential is singular at nucleus {nucleus_index}",
            {"nucleus_index": nucleus_index},
        )
        self.nucleus_index = nucleus_index


class ExportError(CloudChemError):
    """Grid export could not be written."""

    code = "EXPORT_ERROR"


class ScfConvergenceError(CloudChemError):
    """SCF did not converge within the iteration limit."""

    code = "SCF_NOT_CONVERGED"
    exit_code = 2

    def __init__(self, message: str, trace: List[Any], result: Any = None):
        super().__init__(message, {"iterations": len(trace)})
        self.trace = trace
        self.result = result


class QuadratureError(CloudChemError):
    """Quadrature error estimate above tolerance."""

    code = "QUADRATURE_FAILURE"
    exit_code = 3

    def __init__(self, message: str, estimate: float, tolerance: float):
        super().__init__(message, {"estimate": estimate, "tolerance": tolerance})
        self.estimate = estimate
        self.tolerance = tolerance
