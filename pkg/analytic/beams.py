"""Closed-form beam bending fields on x in [0, L], y in [0, c]

Quadratic variant (constant bending moment):
    sxx = 240 y / c - 120,  syy = txy = 0
Cubic variant (linear bending moment):
    sxx = 240 x y / (c L) - 120 x / L - 240 y / c + 120,  syy = 0,
    txy = ((138 + 60 nu) / (1 + nu)) (y - y^2 / c) / L
The cubic shear stress balances sxx only for nu = 0.3.

Displacements are the plane-stress integrals of the stresses with rigid
motion fixed by u(0, 0) = 0; plane strain uses E / (1 - nu^2) and
nu / (1 - nu) in their place.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Tuple

import numpy as np

from models.material import Material, StressState


class BeamVariant(str, Enum):
    QUADRATIC = "quadratic"
    CUBIC = "cubic"


@dataclass(frozen=True)
class BeamField:
    variant: BeamVariant = BeamVariant.QUADRATIC
    L: float = 10.0
    c: float = 2.0
    material: Material = field(default_factory=Material)

    def __post_init__(self):
        object.__setattr__(self, 'variant', BeamVariant(self.variant))

    def _effective(self) -> Tuple[float, float]:
        E, nu = self.material.E, self.material.nu
        if self.material.state == StressState.PLANE_STRAIN:
            return E / (1.0 - nu * nu), nu / (1.0 - nu)
        return E, nu

    def _shear_factor(self) -> float:
        nu = self.material.nu
        return (138.0 + 60.0 * nu) / (1.0 + nu)

    def stress(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        x, y = pts[:, 0], pts[:, 1]
        L, c = self.L, self.c
        zero = np.zeros_like(x)
        if self.variant == BeamVariant.QUADRATIC:
            return np.column_stack([240.0 * y / c - 120.0, zero, zero])
        sxx = 240.0 * x * y / (c * L) - 120.0 * x / L - 240.0 * y / c + 120.0
        txy = self._shear_factor() * (y - y * y / c) / L
        return np.column_stack([sxx, zero, txy])

    def displacement(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        x, y = pts[:, 0], pts[:, 1]
        L, c = self.L, self.c
        E, nu = self._effective()
        if self.variant == BeamVariant.QUADRATIC:
            ux = 240.0 * x * y / c - 120.0 * x
            uy = -120.0 * x * x / c - nu * (120.0 * y * y / c - 120.0 * y)
            return np.column_stack([ux, uy]) / E
        q = 2.0 * (1.0 + nu) * self._shear_factor() - 120.0 * nu
        ux = (120.0 * (1.0 - 2.0 * y / c) * (x - x * x / (2.0 * L))
              + q / L * (y * y / 2.0 - y ** 3 / (3.0 * c)))
        uy = (-120.0 * nu * (1.0 - x / L) * (y - y * y / c)
              + 240.0 / c * (x * x / 2.0 - x ** 3 / (6.0 * L)))
        return np.column_stack([ux, uy]) / E

    def traction(self, points, normal) -> np.ndarray:
        """Stress vector sigma . n on a boundary with outward normal n"""
        s = self.stress(points)
        n = np.asarray(normal, dtype=float)
        return np.column_stack([s[:, 0] * n[0] + s[:, 2] * n[1],
                                s[:, 2] * n[0] + s[:, 1] * n[1]])


def beam_field(bf: BeamField, x, y) -> Tuple[np.ndarray, np.ndarray]:
    """Displacements (n, 2) and stresses (n, 3) of a beam field"""
    pts = np.column_stack([np.atleast_1d(np.asarray(x, dtype=float)).ravel(),
                           np.atleast_1d(np.asarray(y, dtype=float)).ravel()])
    return bf.displacement(pts), bf.stress(pts)
