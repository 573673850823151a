"""Edge-coupling discovery and element classification

Every element edge is walked from its start corner to its end corner (the
EDGE_NAMES convention of elements.blending) and every mesh vertex lying on it
is recorded. Consecutive vertices of such a chain bound an atomic edge; two
elements are neighbours when they share an atomic edge.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Set, Tuple

import numpy as np
from scipy.spatial import cKDTree

from models.mesh import ElementClass, Mesh, Region
from utils.errors import MeshConsistencyError

logger = logging.getLogger(__name__)

ON_EDGE_TOL = 1e-10
NEAR_MISS = 1e-6

# start and end corner of E1..E4
EDGE_CORNERS = ((0, 1), (1, 2), (3, 2), (0, 3))

AtomicKey = Tuple[int, int]


def atomic_key(a: int, b: int) -> AtomicKey:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class EdgeLayout:
    """Vertices found on one element edge, in edge direction

    breaks are the parametric positions of the chain vertices in [-1, 1].
    """
    element: int
    edge: int
    vertices: Tuple[int, ...]
    breaks: Tuple[float, ...]

    @property
    def n_segments(self) -> int:
        return len(self.vertices) - 1

    @property
    def is_split(self) -> bool:
        return self.n_segments > 1

    def segments(self) -> List[Tuple[int, int]]:
        """(start, end) vertex pairs in edge direction"""
        return list(zip(self.vertices[:-1], self.vertices[1:]))


@dataclass
class EdgeCoupling:
    """Coupling table of a mesh

    layouts[e][k] describes edge k of element e; owners maps every atomic
    edge to the (element, edge, segment) triples bordering it.
    """
    layouts: List[Tuple[EdgeLayout, ...]] = field(default_factory=list)
    owners: Dict[AtomicKey, List[Tuple[int, int, int]]] = field(default_factory=dict)

    def layout(self, element: int, edge: int) -> EdgeLayout:
        return self.layouts[element][edge]

    def atomic_edges(self) -> List[AtomicKey]:
        return sorted(self.owners)

    def boundary_edges(self) -> List[AtomicKey]:
        return [key for key in self.atomic_edges() if len(self.owners[key]) == 1]

    def is_boundary(self, key: AtomicKey) -> bool:
        return len(self.owners[atomic_key(*key)]) == 1

    def has_hanging(self, element: int) -> bool:
        return any(lay.is_split for lay in self.layouts[element])

    def neighbours(self, element: int) -> Set[int]:
        result = set()
        for lay in self.layouts[element]:
            for a, b in lay.segments():
                result.update(o[0] for o in self.owners[atomic_key(a, b)])
        result.discard(element)
        return result

    def coupled_edges(self) -> List[Tuple[int, int]]:
        """(element, edge) pairs carrying more than one segment"""
        return [(lay.element, lay.edge) for per in self.layouts for lay in per if lay.is_split]


def _edge_chain(vertices: np.ndarray, tree: cKDTree, start: int, end: int,
                tol: float) -> Tuple[Tuple[int, ...], Tuple[float, ...]]:
    p0, p1 = vertices[start], vertices[end]
    direction = p1 - p0
    length = float(np.hypot(*direction))
    mid = 0.5 * (p0 + p1)
    found = []
    for v in tree.query_ball_point(mid, 0.5 * length + tol):
        if v == start or v == end:
            continue
        d = vertices[v] - p0
        t = float(np.dot(d, direction)) / (length * length)
        if t * length <= tol or (1.0 - t) * length <= tol:
            continue
        dist = abs(direction[0] * d[1] - direction[1] * d[0]) / length
        if dist <= tol:
            found.append((t, v))
        elif dist <= NEAR_MISS * length:
            raise MeshConsistencyError(
                f"vertex {v} lies {dist:.3e} off edge ({start}, {end}): T-junction mismatch"
            )
    found.sort()
    chain = (start,) + tuple(v for _, v in found) + (end,)
    breaks = (-1.0,) + tuple(2.0 * t - 1.0 for t, _ in found) + (1.0,)
    return chain, breaks


def discover_couplings(mesh: Mesh) -> EdgeCoupling:
    """Find the segment layout of every element edge

    Raises:
        MeshConsistencyError: on T-junction mismatches or atomic edges bordered
            by more than two elements
    """
    tol = ON_EDGE_TOL * mesh.bbox_size
    tree = cKDTree(mesh.vertices)
    table = EdgeCoupling()
    for e, quad in enumerate(mesh.quads):
        per_element = []
        for k, (c0, c1) in enumerate(EDGE_CORNERS):
            chain, breaks = _edge_chain(mesh.vertices, tree, int(quad[c0]), int(quad[c1]), tol)
            layout = EdgeLayout(e, k, chain, breaks)
            per_element.append(layout)
            for s, (a, b) in enumerate(layout.segments()):
                table.owners.setdefault(atomic_key(a, b), []).append((e, k, s))
        table.layouts.append(tuple(per_element))

    for key, owners in table.owners.items():
        if len(owners) > 2:
            raise MeshConsistencyError(f"atomic edge {key} is bordered by {len(owners)} elements")
    logger.debug("found %d atomic edges, %d split element edges",
                 len(table.owners), len(table.coupled_edges()))
    return table


def classify_elements(mesh: Mesh, couplings: EdgeCoupling) -> List[ElementClass]:
    """Element classes from region tags and coupling layout

    x-elements touching the y-region or carrying hanging vertices become XNY;
    y-elements carrying hanging vertices become YNY.
    """
    classes = []
    for e, region in enumerate(mesh.region):
        hanging = couplings.has_hanging(e)
        if region == Region.X:
            touches_y = any(mesh.region[n] == Region.Y for n in couplings.neighbours(e))
            classes.append(ElementClass.XNY if (hanging or touches_y) else ElementClass.X)
        else:
            classes.append(ElementClass.YNY if hanging else ElementClass.Y)
    return classes


def classify(mesh: Mesh) -> Mesh:
    """Set mesh.element_class in place and return the mesh"""
    mesh.element_class = classify_elements(mesh, discover_couplings(mesh))
    return mesh
