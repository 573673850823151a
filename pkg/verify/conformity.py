"""Continuity of the assembled displacement interpolant across element edges"""

from typing import Optional

import numpy as np

from meshing.coupling import EdgeCoupling, discover_couplings
from meshing.dofmap import DofMap
from models.mesh import Mesh
from solver.solution import Solution


def interface_jump(mesh: Mesh, dofmap: DofMap, u: Optional[np.ndarray] = None,
                   n_points: int = 20, seed: int = 0,
                   couplings: Optional[EdgeCoupling] = None) -> float:
    """Largest displacement jump at random points of interior atomic edges

    Each sample point is evaluated from both elements bordering its edge.
    A random coefficient vector is used when u is not given.
    """
    couplings = couplings or discover_couplings(mesh)
    rng = np.random.default_rng(seed)
    if u is None:
        u = rng.standard_normal(dofmap.n_dof)
    interior = [key for key in couplings.atomic_edges() if len(couplings.owners[key]) == 2]
    if not interior:
        return 0.0
    solution = Solution(mesh, dofmap, u)
    jump = 0.0
    for k in rng.integers(0, len(interior), n_points):
        key = interior[k]
        t = rng.uniform(0.02, 0.98)
        point = (1.0 - t) * mesh.vertices[key[0]] + t * mesh.vertices[key[1]]
        (e1, _, _), (e2, _, _) = couplings.owners[key]
        diff = solution.displacement_at(e1, point) - solution.displacement_at(e2, point)
        jump = max(jump, float(np.max(np.abs(diff))))
    return jump
