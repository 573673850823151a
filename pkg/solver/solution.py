"""Evaluation of an assembled displacement field"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from meshing.dofmap import DofMap
from meshing.mapping import inverse_map, jacobian, map_points
from models.material import Material
from models.mesh import Mesh
from solver.elasticity import element_stress


@dataclass
class Solution:
    """Global displacement vector with its mesh and DOF map"""
    mesh: Mesh
    dofmap: DofMap
    u: np.ndarray

    def local(self, e: int) -> np.ndarray:
        return self.dofmap.element_values(e, self.u)

    def displacement(self, e: int, xi, eta) -> np.ndarray:
        """Displacements (n, 2) at reference points of element e"""
        N, _, _ = self.dofmap.shape_sets[e].tabulate(xi, eta)
        u_e = self.local(e)
        return np.column_stack([N @ u_e[0::2], N @ u_e[1::2]])

    def displacement_at(self, e: int, point) -> np.ndarray:
        """Displacement at a physical point inside element e"""
        xi, eta = inverse_map(self.mesh.element_coords(e), point)
        return self.displacement(e, [xi], [eta])[0]

    def stress(self, e: int, material: Material, points=None) -> np.ndarray:
        return element_stress(self.local(e), self.dofmap.shape_sets[e],
                              self.mesh.element_coords(e), material, points, element=e)

    def points(self, e: int, xi, eta) -> np.ndarray:
        return map_points(self.mesh.element_coords(e), xi, eta)

    def quadrature(self, e: int, extra: int = 3) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Composite rule of order max_order + extra over the element's subdomain grid

        Returns:
            (physical points (n, 2), weights * detJ, displacements (n, 2))
        """
        shape_set = self.dofmap.shape_sets[e]
        rule, N, _, _ = shape_set.quadrature_table(shape_set.max_order + extra)
        coords = self.mesh.element_coords(e)
        _, det = jacobian(coords, rule.xi, rule.eta)
        u_e = self.local(e)
        values = np.column_stack([N @ u_e[0::2], N @ u_e[1::2]])
        return map_points(coords, rule.xi, rule.eta), rule.weights * det, values

    def sample(self, grid: int) -> np.ndarray:
        """Displacements on a grid x grid equidistant reference grid of every element

        Returns:
            Rows (element, x, y, u_x, u_y)
        """
        t = np.linspace(-1.0, 1.0, grid)
        xi, eta = (a.ravel() for a in np.meshgrid(t, t))
        rows = []
        for e in range(self.mesh.n_quads):
            pts = self.points(e, xi, eta)
            u = self.displacement(e, xi, eta)
            rows.append(np.column_stack([np.full(len(xi), e), pts, u]))
        return np.vstack(rows)
