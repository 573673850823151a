"""Global numbering of scalar shape functions and displacement DOFs

Scalar entities are numbered vertices first, then atomic edges (sorted by
vertex-id pair, p-1 functions each), then element interiors. Displacement DOF
of scalar function s and component c is 2*s + c.

Atomic edges are parametrised in canonical direction (ascending vertex id).
An element traversing one backwards sees Lagrange interior functions in
reverse order and hierarchic mode i multiplied by (-1)^i.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from basis.polybasis import Basis1D, BasisFamily, make_basis
from elements.blending import EdgeSpec, TransitionShapeSet, build_transition
from meshing.coupling import AtomicKey, EdgeCoupling, atomic_key, discover_couplings
from models.mesh import Mesh, Region
from utils.errors import MeshConsistencyError

logger = logging.getLogger(__name__)


@dataclass
class DofMap:
    """Per-element shape sets, global scalar ids and orientation signs"""
    shape_sets: List[TransitionShapeSet]
    scalar_dofs: List[np.ndarray]
    signs: List[np.ndarray]
    n_scalar: int
    vertex_dof: Dict[int, int] = field(default_factory=dict)
    edge_dofs: Dict[AtomicKey, np.ndarray] = field(default_factory=dict)
    edge_basis: Dict[AtomicKey, Basis1D] = field(default_factory=dict)
    interior_dofs: List[np.ndarray] = field(default_factory=list)
    element_basis: List[Basis1D] = field(default_factory=list)

    @property
    def n_dof(self) -> int:
        return 2 * self.n_scalar

    @property
    def n_elements(self) -> int:
        return len(self.shape_sets)

    def element_dofs(self, e: int) -> np.ndarray:
        """Interleaved displacement DOFs (2s, 2s+1) of element e"""
        s = self.scalar_dofs[e]
        return np.column_stack([2 * s, 2 * s + 1]).ravel()

    def element_signs(self, e: int) -> np.ndarray:
        return np.repeat(self.signs[e], 2)

    def element_values(self, e: int, u: np.ndarray) -> np.ndarray:
        """Local coefficient vector (interleaved) of element e"""
        return u[self.element_dofs(e)] * self.element_signs(e)


def _edge_bases(mesh: Mesh, couplings: EdgeCoupling, bases: Dict[Region, Basis1D]
                ) -> Dict[AtomicKey, Basis1D]:
    result = {}
    for key in couplings.atomic_edges():
        full = [o for o in couplings.owners[key]
                if couplings.layout(o[0], o[1]).n_segments == 1]
        if not full:
            raise MeshConsistencyError(f"atomic edge {key} is not a full edge of any element")
        y_side = [o for o in full if mesh.region[o[0]] == Region.Y]
        owner = (y_side or full)[0]
        result[key] = bases[mesh.region[owner[0]]]
    return result


def _segment_map(basis: Basis1D, forward: bool) -> Tuple[np.ndarray, np.ndarray]:
    """Index permutation and signs from local edge order to canonical order"""
    n = basis.order - 1
    index = np.arange(n)
    sign = np.ones(n)
    if not forward:
        if basis.family.is_lagrange:
            index = index[::-1].copy()
        else:
            # mode i = j + 2 has parity (-1)^i
            sign = np.where(index % 2 == 0, 1.0, -1.0)
    return index, sign


def build_dof_map(mesh: Mesh, couplings: Optional[EdgeCoupling], p_x: int, p_y: int,
                  x_family: BasisFamily = BasisFamily.lagrange(),
                  y_family: BasisFamily = BasisFamily.lagrange()) -> DofMap:
    """Assign global DOFs to every shape function of the mesh

    x-region elements use order p_x of x_family, y-region elements order p_y
    of y_family. An atomic edge takes the basis of an element having it as a
    full edge, the y-side winning.

    Raises:
        MeshConsistencyError: if some atomic edge has no full-edge owner
    """
    if couplings is None:
        couplings = discover_couplings(mesh)
    bases = {Region.X: make_basis(x_family, p_x), Region.Y: make_basis(y_family, p_y)}
    edge_basis = _edge_bases(mesh, couplings, bases)

    used = sorted({int(v) for v in mesh.quads.ravel()})
    vertex_dof = {v: i for i, v in enumerate(used)}
    next_id = len(used)
    edge_dofs = {}
    for key in couplings.atomic_edges():
        n = edge_basis[key].order - 1
        edge_dofs[key] = np.arange(next_id, next_id + n, dtype=np.int64)
        next_id += n

    shape_sets, scalar_dofs, signs, interior_dofs, element_basis = [], [], [], [], []
    for e, quad in enumerate(mesh.quads):
        interior = bases[mesh.region[e]]
        specs = []
        ids = [vertex_dof[int(v)] for v in quad]
        sgn = [1.0] * 4
        for lay in couplings.layouts[e]:
            segs = lay.segments()
            spec_bases = [edge_basis[atomic_key(a, b)] for a, b in segs]
            specs.append(EdgeSpec.from_breaks(lay.breaks, spec_bases))
            for s, (a, b) in enumerate(segs):
                basis = spec_bases[s]
                index, sign = _segment_map(basis, a < b)
                ids.extend(edge_dofs[atomic_key(a, b)][index].tolist())
                sgn.extend(sign.tolist())
                if s < len(segs) - 1:
                    ids.append(vertex_dof[b])
                    sgn.append(1.0)
        shape_set = build_transition(specs, interior)
        n_int = shape_set.n_interior
        bubbles = np.arange(next_id, next_id + n_int, dtype=np.int64)
        next_id += n_int
        ids.extend(bubbles.tolist())
        sgn.extend([1.0] * n_int)
        if len(ids) != shape_set.n_functions:
            raise MeshConsistencyError(
                f"element {e}: {len(ids)} global ids for {shape_set.n_functions} functions"
            )
        shape_sets.append(shape_set)
        scalar_dofs.append(np.asarray(ids, dtype=np.int64))
        signs.append(np.asarray(sgn))
        interior_dofs.append(bubbles)
        element_basis.append(interior)

    dofmap = DofMap(shape_sets, scalar_dofs, signs, next_id, vertex_dof, edge_dofs,
                    edge_basis, interior_dofs, element_basis)
    logger.info("DOF map: %d elements, %d scalar functions, %d DOFs",
                mesh.n_quads, dofmap.n_scalar, dofmap.n_dof)
    return dofmap
