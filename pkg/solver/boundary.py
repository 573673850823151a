"""Boundary selection, prescribed displacements and traction loads

Boundary work happens on atomic edges in canonical direction (ascending
vertex id), where the global edge functions are the 1D basis of the edge.
"""

import logging
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from basis.quadrature import gauss_rule
from meshing.coupling import AtomicKey, EdgeCoupling, discover_couplings
from meshing.dofmap import DofMap
from models.boundary import BoundaryLine, BoundarySpec, PointSupport
from models.mesh import Mesh
from utils.errors import ConfigError, SolverError

logger = logging.getLogger(__name__)

# field(points (n, 2)) -> displacements (n, 2)
DisplacementField = Callable[[np.ndarray], np.ndarray]
# traction(points (n, 2), outward normal (2,)) -> tractions (n, 2)
TractionField = Callable[[np.ndarray, np.ndarray], np.ndarray]

EXTRA_POINTS = 4


def select_edges(mesh: Mesh, couplings: EdgeCoupling,
                 line: Optional[BoundaryLine] = None) -> List[AtomicKey]:
    """Boundary atomic edges, optionally restricted to a line"""
    edges = couplings.boundary_edges()
    if line is None:
        return edges
    tol = 1e-9 * max(mesh.bbox_size, 1.0)
    return [(a, b) for a, b in edges
            if line.matches(*mesh.vertices[a], tol=tol) and line.matches(*mesh.vertices[b], tol=tol)]


def select_vertex(mesh: Mesh, point) -> int:
    """Vertex closest to the point; it must coincide within 1e-9 * bbox"""
    dist = np.hypot(*(mesh.vertices - np.asarray(point, dtype=float)).T)
    v = int(np.argmin(dist))
    if dist[v] > 1e-9 * max(mesh.bbox_size, 1.0):
        raise ConfigError(f"no mesh vertex at {tuple(point)}")
    return v


def outward_normal(mesh: Mesh, couplings: EdgeCoupling, key: AtomicKey) -> np.ndarray:
    a, b = key
    d = mesh.vertices[b] - mesh.vertices[a]
    normal = np.array([d[1], -d[0]]) / np.hypot(*d)
    owner = couplings.owners[key][0][0]
    centre = mesh.element_coords(owner).mean(axis=0)
    if np.dot(normal, 0.5 * (mesh.vertices[a] + mesh.vertices[b]) - centre) < 0.0:
        normal = -normal
    return normal


def _edge_rule(order: int):
    return gauss_rule(order + EXTRA_POINTS)


def _edge_points(mesh: Mesh, key: AtomicKey, t: np.ndarray) -> np.ndarray:
    p0, p1 = mesh.vertices[key[0]], mesh.vertices[key[1]]
    return p0[None, :] + (0.5 * (t + 1.0))[:, None] * (p1 - p0)[None, :]


def _edge_values(mesh: Mesh, dofmap: DofMap, field: DisplacementField,
                 key: AtomicKey) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vertex values at both ends and interior coefficients (p-1, 2) of one edge"""
    basis = dofmap.edge_basis[key]
    ends = np.asarray(field(mesh.vertices[list(key)]), dtype=float)
    n = basis.order - 1
    if n == 0:
        return ends[0], ends[1], np.zeros((0, 2))
    if basis.family.is_lagrange:
        nodes = np.asarray(basis.nodes[1:-1])
        return ends[0], ends[1], np.asarray(field(_edge_points(mesh, key, nodes)), dtype=float)
    rule = _edge_rule(basis.order)
    values, _ = basis.tabulate(rule.points)
    target = np.asarray(field(_edge_points(mesh, key, rule.points)), dtype=float)
    lift = np.outer(values[:, 0], ends[0]) + np.outer(values[:, -1], ends[1])
    modes = values[:, 1:-1]
    mass = modes.T @ (rule.weights[:, None] * modes)
    rhs = modes.T @ (rule.weights[:, None] * (target - lift))
    try:
        coeffs = np.linalg.solve(mass, rhs)
    except np.linalg.LinAlgError as e:
        raise SolverError(f"edge projection on {key} failed: {e}") from e
    return ends[0], ends[1], coeffs


def impose_field_on_boundary(mesh: Mesh, dofmap: DofMap, field: DisplacementField,
                             edges: Optional[Iterable[AtomicKey]] = None,
                             components: Sequence[int] = (0, 1),
                             couplings: Optional[EdgeCoupling] = None) -> List[Tuple[int, float]]:
    """Constraints reproducing a displacement field on boundary edges

    Lagrange edge DOFs are set by nodal interpolation; hierarchic edge modes
    by L2 projection of the field minus the linear vertex lift.

    Args:
        field: Function of physical points (n, 2) returning displacements (n, 2)
        edges: Atomic edges to constrain (default: the whole boundary)
        components: Displacement components to constrain

    Returns:
        List of (dof, value)
    """
    if edges is None:
        couplings = couplings or discover_couplings(mesh)
        edges = couplings.boundary_edges()
    values: Dict[int, float] = {}
    for key in edges:
        key = (min(key), max(key))
        u_a, u_b, interior = _edge_values(mesh, dofmap, field, key)
        for c in components:
            values[2 * dofmap.vertex_dof[key[0]] + c] = float(u_a[c])
            values[2 * dofmap.vertex_dof[key[1]] + c] = float(u_b[c])
            for s, value in zip(dofmap.edge_dofs[key], interior[:, c]):
                values[2 * int(s) + c] = float(value)
    return sorted(values.items())


def zero_constraints(mesh: Mesh, dofmap: DofMap, edges: Iterable[AtomicKey],
                     components: Sequence[int]) -> List[Tuple[int, float]]:
    """Homogeneous constraints on every function living on the edges"""
    result = {}
    for key in edges:
        key = (min(key), max(key))
        scalars = [dofmap.vertex_dof[key[0]], dofmap.vertex_dof[key[1]]]
        scalars.extend(int(s) for s in dofmap.edge_dofs[key])
        for s in scalars:
            for c in components:
                result[2 * s + c] = 0.0
    return sorted(result.items())


def point_constraints(mesh: Mesh, dofmap: DofMap, support: PointSupport,
                      field: Optional[DisplacementField] = None) -> List[Tuple[int, float]]:
    v = select_vertex(mesh, support.point)
    value = np.zeros(2) if field is None else np.asarray(field(mesh.vertices[[v]]))[0]
    return [(2 * dofmap.vertex_dof[v] + c, float(value[c])) for c in support.components]


def traction_load(mesh: Mesh, dofmap: DofMap, edges: Iterable[AtomicKey],
                  traction, couplings: Optional[EdgeCoupling] = None) -> np.ndarray:
    """Consistent nodal loads of a traction on boundary atomic edges

    Args:
        traction: Constant 2-vector, or function (points (n, 2), outward
            normal) -> (n, 2)

    Returns:
        Load vector of length dofmap.n_dof
    """
    couplings = couplings or discover_couplings(mesh)
    if not callable(traction):
        constant = np.asarray(traction, dtype=float)
        traction = lambda pts, normal: np.tile(constant, (len(pts), 1))
    f = np.zeros(dofmap.n_dof)
    for key in edges:
        key = (min(key), max(key))
        basis = dofmap.edge_basis[key]
        rule = _edge_rule(basis.order)
        values, _ = basis.tabulate(rule.points)
        pts = _edge_points(mesh, key, rule.points)
        t = np.asarray(traction(pts, outward_normal(mesh, couplings, key)), dtype=float)
        half = 0.5 * float(np.hypot(*(mesh.vertices[key[1]] - mesh.vertices[key[0]])))
        loads = values.T @ (rule.weights[:, None] * t) * half
        scalars = [dofmap.vertex_dof[key[0]]] + [int(s) for s in dofmap.edge_dofs[key]] \
            + [dofmap.vertex_dof[key[1]]]
        for s, load in zip(scalars, loads):
            f[2 * s] += load[0]
            f[2 * s + 1] += load[1]
    return f


def boundary_spec_system(mesh: Mesh, dofmap: DofMap, spec: BoundarySpec,
                         couplings: Optional[EdgeCoupling] = None
                         ) -> Tuple[List[Tuple[int, float]], np.ndarray]:
    """Zero supports and constant tractions of a built-in geometry

    Returns:
        (constraints, load vector)
    """
    couplings = couplings or discover_couplings(mesh)
    constraints: List[Tuple[int, float]] = []
    for support in spec.supports:
        edges = select_edges(mesh, couplings, support.line)
        if not edges:
            raise ConfigError(f"support line {support.line} selects no boundary edge")
        constraints.extend(zero_constraints(mesh, dofmap, edges, support.components))
    for support in spec.point_supports:
        constraints.extend(point_constraints(mesh, dofmap, support))
    f = np.zeros(dofmap.n_dof)
    for load in spec.tractions:
        edges = select_edges(mesh, couplings, load.line)
        if not edges:
            raise ConfigError(f"traction line {load.line} selects no boundary edge")
        f += traction_load(mesh, dofmap, edges, load.traction, couplings)
    logger.debug("boundary: %d constraints, |f| = %.3e", len(constraints), np.linalg.norm(f))
    return constraints, f
