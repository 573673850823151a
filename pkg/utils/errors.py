"""Exception hierarchy for the transition-element kernel"""

from typing import Optional, Tuple


class XnyfemError(Exception):
    """Base class for every error raised by the kernel"""


class BasisError(XnyfemError, ValueError):
    """Invalid argument to a basis or quadrature routine"""


class NumericalError(XnyfemError):
    """An iterative numerical procedure failed to converge"""


class ShapeError(XnyfemError, ValueError):
    """Inconsistent edge specification or shape index out of range"""


class MeshError(XnyfemError):
    """Problem with mesh input or mesh topology"""


class MeshParseError(MeshError):
    """Mesh file could not be parsed"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OrientationError(MeshError):
    """A quad is not counter-clockwise"""

    def __init__(self, quad_index: int, detail: str = ""):
        self.quad_index = quad_index
        super().__init__(f"quad {quad_index} is not positively oriented {detail}".strip())


class DuplicateVertexError(MeshError):
    """Two vertices coincide"""


class MeshConsistencyError(MeshError):
    """Edges of neighbouring elements do not match"""


class GeometryError(XnyfemError):
    """Non-positive Jacobian inside an element"""

    def __init__(self, element: int, point: Tuple[float, float], det: float):
        self.element = element
        self.point = point
        self.det = det
        super().__init__(
            f"element {element}: Jacobian determinant {det:.3e} at (xi, eta) = "
            f"({point[0]:.6f}, {point[1]:.6f})"
        )


class ConstraintError(XnyfemError):
    """Conflicting Dirichlet constraints"""


class SolverError(XnyfemError):
    """Linear solve failed"""


class DomainError(XnyfemError, ValueError):
    """Point outside the domain of an analytic field"""


class ClosureError(XnyfemError):
    """Singular closure system of an admissible polynomial field"""


class NormError(XnyfemError):
    """Error norm undefined for the given reference"""


class EnergyError(XnyfemError):
    """Energy error radicand is negative beyond tolerance"""


class StudyError(XnyfemError):
    """Not enough usable data to evaluate a study"""


class ConfigError(XnyfemError):
    """Invalid study configuration"""
