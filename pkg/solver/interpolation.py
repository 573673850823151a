"""Projection-based interpolation of a displacement field into the FE space"""

from typing import Optional

import numpy as np

from meshing.coupling import EdgeCoupling, discover_couplings
from meshing.dofmap import DofMap
from meshing.mapping import jacobian, map_points
from models.mesh import Mesh
from solver.boundary import DisplacementField, impose_field_on_boundary
from utils.errors import SolverError


def interpolate_field(mesh: Mesh, dofmap: DofMap, field: DisplacementField,
                      couplings: Optional[EdgeCoupling] = None) -> np.ndarray:
    """Global coefficient vector reproducing the field

    Vertex and edge coefficients come from the edge-wise interpolation used
    for boundary data; bubble coefficients from an element-wise L2 projection
    of what is left. Fields inside the FE space are reproduced exactly.
    """
    couplings = couplings or discover_couplings(mesh)
    u = np.zeros(dofmap.n_dof)
    for dof, value in impose_field_on_boundary(mesh, dofmap, field, couplings.atomic_edges()):
        u[dof] = value
    for e in range(mesh.n_quads):
        shape_set = dofmap.shape_sets[e]
        cols = shape_set.interior_slice
        if cols.stop == cols.start:
            continue
        rule, N, _, _ = shape_set.quadrature_table(shape_set.max_order + 2)
        coords = mesh.element_coords(e)
        _, det = jacobian(coords, rule.xi, rule.eta)
        omega = rule.weights * det
        target = np.asarray(field(map_points(coords, rule.xi, rule.eta)), dtype=float)
        local = dofmap.element_values(e, u)
        known = np.column_stack([N @ local[0::2], N @ local[1::2]])
        bubbles = N[:, cols]
        mass = bubbles.T @ (omega[:, None] * bubbles)
        try:
            coeffs = np.linalg.solve(mass, bubbles.T @ (omega[:, None] * (target - known)))
        except np.linalg.LinAlgError as err:
            raise SolverError(f"interior projection on element {e} failed: {err}") from err
        for k, s in enumerate(dofmap.interior_dofs[e]):
            u[2 * s] = coeffs[k, 0]
            u[2 * s + 1] = coeffs[k, 1]
    return u
