"""Boundary condition descriptions attached to built-in geometries"""

from dataclasses import dataclass, field
from typing import List, Tuple

LINE_TOL = 1e-9


@dataclass(frozen=True)
class BoundaryLine:
    """Straight boundary piece: axis 'x' selects x == value, 'y' selects y == value,
    restricted to lo <= other coordinate <= hi"""
    axis: str
    value: float
    lo: float = float('-inf')
    hi: float = float('inf')

    def matches(self, x: float, y: float, tol: float = LINE_TOL) -> bool:
        on, along = (x, y) if self.axis == 'x' else (y, x)
        return abs(on - self.value) <= tol and self.lo - tol <= along <= self.hi + tol


@dataclass(frozen=True)
class Support:
    """Components (0 = u_x, 1 = u_y) fixed along a line"""
    line: BoundaryLine
    components: Tuple[int, ...] = (0, 1)


@dataclass(frozen=True)
class PointSupport:
    point: Tuple[float, float]
    components: Tuple[int, ...] = (0, 1)


@dataclass(frozen=True)
class TractionLoad:
    """Constant traction vector applied along a line"""
    line: BoundaryLine
    traction: Tuple[float, float]


@dataclass
class BoundarySpec:
    """Supports and loads of a geometry

    Supports prescribe zero displacement unless a study imposes an exact
    field on them. focus lists singular points for point-focused refinement.
    """
    supports: List[Support] = field(default_factory=list)
    point_supports: List[PointSupport] = field(default_factory=list)
    tractions: List[TractionLoad] = field(default_factory=list)
    focus: List[Tuple[float, float]] = field(default_factory=list)
    description: str = ''
