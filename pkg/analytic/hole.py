"""Displacements of an infinite plate with a circular hole under remote tension"""

from dataclasses import dataclass, field

import numpy as np

from models.material import Material
from utils.errors import DomainError

RIM_TOL = 1e-12


@dataclass(frozen=True)
class HoleProblem:
    """Hole of radius a at the origin, remote stress sigma0 along x"""
    sigma0: float = 100e6
    a: float = 1.0
    material: Material = field(default_factory=Material)

    def __post_init__(self):
        if not self.a > 0.0:
            raise DomainError(f"hole radius must be positive, got {self.a}")

    def displacement(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        x, y = pts[:, 0], pts[:, 1]
        r = np.hypot(x, y)
        if np.any(r < self.a - RIM_TOL):
            k = int(np.argmin(r))
            raise DomainError(f"point ({x[k]}, {y[k]}) lies inside the hole (r = {r[k]})")
        theta = np.arctan2(y, x)
        a = self.a
        kappa = self.material.kolosov
        scale = self.sigma0 * a / (8.0 * self.material.shear_modulus)
        ux = scale * ((r / a) * (kappa + 1.0) * np.cos(theta)
                      + (2.0 * a / r) * ((1.0 + kappa) * np.cos(theta) + np.cos(3.0 * theta))
                      - (2.0 * a ** 3 / r ** 3) * np.cos(3.0 * theta))
        uy = scale * ((r / a) * (kappa - 3.0) * np.sin(theta)
                      + (2.0 * a / r) * ((1.0 - kappa) * np.sin(theta) + np.sin(3.0 * theta))
                      - (2.0 * a ** 3 / r ** 3) * np.sin(3.0 * theta))
        return np.column_stack([ux, uy])

    def stress(self, points) -> np.ndarray:
        """Kirsch stresses (n, 3) as (sigma_xx, sigma_yy, tau_xy)"""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        r = np.hypot(pts[:, 0], pts[:, 1])
        theta = np.arctan2(pts[:, 1], pts[:, 0])
        q2 = (self.a / r) ** 2
        q4 = q2 ** 2
        half = 0.5 * self.sigma0
        c2, s2 = np.cos(2.0 * theta), np.sin(2.0 * theta)
        s_rr = half * (1.0 - q2) + half * (1.0 - 4.0 * q2 + 3.0 * q4) * c2
        s_tt = half * (1.0 + q2) - half * (1.0 + 3.0 * q4) * c2
        s_rt = -half * (1.0 + 2.0 * q2 - 3.0 * q4) * s2
        c, s = np.cos(theta), np.sin(theta)
        sxx = s_rr * c ** 2 + s_tt * s ** 2 - 2.0 * s_rt * s * c
        syy = s_rr * s ** 2 + s_tt * c ** 2 + 2.0 * s_rt * s * c
        sxy = (s_rr - s_tt) * s * c + s_rt * (c ** 2 - s ** 2)
        return np.column_stack([sxx, syy, sxy])


def hole_displacement(prob: HoleProblem, x, y) -> np.ndarray:
    """Displacement at one point (2,) or at arrays of points (n, 2)"""
    scalar = np.ndim(x) == 0 and np.ndim(y) == 0
    pts = np.column_stack([np.atleast_1d(np.asarray(x, dtype=float)).ravel(),
                           np.atleast_1d(np.asarray(y, dtype=float)).ravel()])
    u = prob.displacement(pts)
    return u[0] if scalar else u
