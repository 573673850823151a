"""Uniform and hierarchical y-region refinement"""

import logging
from typing import List, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from meshing.coupling import classify, discover_couplings
from meshing.mapping import contains, map_points
from models.mesh import Mesh, RefineParams, Region
from utils.errors import MeshError

logger = logging.getLogger(__name__)

MERGE_TOL = 1e-10


def subdivide_quad(coords: np.ndarray, n: int):
    """Bilinear subdivision of a quad into n x n children

    Returns:
        (points of shape ((n+1)^2, 2), child quads as local point indices),
        children ordered row by row from the E1 side
    """
    ticks = np.linspace(-1.0, 1.0, n + 1)
    xi, eta = np.meshgrid(ticks, ticks, indexing='xy')
    points = map_points(coords, xi.ravel(), eta.ravel())
    children = []
    for j in range(n):
        for i in range(n):
            a = j * (n + 1) + i
            children.append((a, a + 1, a + n + 2, a + n + 1))
    return points, children


def merge_vertices(vertices: np.ndarray, quads: np.ndarray, tol: float):
    """Merge coincident vertices, keeping first-occurrence order

    Returns:
        (vertices, quads) with duplicates removed and ids remapped
    """
    n = len(vertices)
    pairs = cKDTree(vertices).query_pairs(tol, output_type='ndarray')
    if not len(pairs):
        return vertices, quads
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    _, labels = connected_components(graph, directed=False)
    new_id = {}
    remap = np.empty(n, dtype=np.int64)
    keep = []
    for v in range(n):
        label = labels[v]
        if label not in new_id:
            new_id[label] = len(keep)
            keep.append(v)
        remap[v] = new_id[label]
    return vertices[keep], remap[quads]


def _split(mesh: Mesh, targets: Sequence[int], n: int) -> Mesh:
    targets = set(targets)
    vertices: List[np.ndarray] = [mesh.vertices]
    n_vertices = mesh.n_vertices
    quads, region, level = [], [], []
    for e, quad in enumerate(mesh.quads):
        if e not in targets:
            quads.append(tuple(quad))
            region.append(mesh.region[e])
            level.append(mesh.level[e])
            continue
        points, children = subdivide_quad(mesh.element_coords(e), n)
        vertices.append(points)
        for child in children:
            quads.append(tuple(n_vertices + c for c in child))
            region.append(mesh.region[e])
            level.append(mesh.level[e] + 1)
        n_vertices += len(points)
    all_vertices = np.vstack(vertices)
    merged, new_quads = merge_vertices(all_vertices, np.array(quads, dtype=np.int64),
                                       MERGE_TOL * mesh.bbox_size)
    return Mesh(merged, new_quads, region, level=level)


def uniform_refine(mesh: Mesh) -> Mesh:
    """Split every quad into four through edge midpoints and centroid"""
    refined = _split(mesh, range(mesh.n_quads), 2)
    refined.level = [int(v) for v in np.repeat(mesh.level, 4)]
    logger.debug("uniform refinement: %d -> %d quads", mesh.n_quads, refined.n_quads)
    return classify(refined)


def _band_targets(mesh: Mesh) -> List[int]:
    couplings = discover_couplings(mesh)
    band = [e for e in mesh.region_elements(Region.Y)
            if any(mesh.region[nb] == Region.X for nb in couplings.neighbours(e))]
    if not band:
        return []
    finest = max(mesh.level[e] for e in band)
    return [e for e in band if mesh.level[e] == finest]


def _focus_targets(mesh: Mesh, focus) -> List[int]:
    tol = MERGE_TOL * mesh.bbox_size
    y_elements = mesh.region_elements(Region.Y)
    targets = set()
    for point in focus:
        hits = []
        for e in y_elements:
            coords = mesh.element_coords(e)
            lo, hi = coords.min(axis=0) - tol, coords.max(axis=0) + tol
            if np.all(point >= lo) and np.all(point <= hi) and contains(coords, point):
                hits.append(e)
        if hits:
            finest = max(mesh.level[e] for e in hits)
            targets.update(e for e in hits if mesh.level[e] == finest)
    return sorted(targets)


def refine_y_region(mesh: Mesh, params: RefineParams) -> Mesh:
    """Apply n_s passes of n_y x n_y splitting to the y-region

    Without focus points each pass splits the finest y-elements sharing an
    edge with the x-region. With focus points it splits the finest
    y-elements containing one of them.

    Raises:
        MeshError: if the first pass finds nothing to split
    """
    current = mesh
    for step in range(params.n_s):
        if params.focus:
            targets = _focus_targets(current, np.asarray(params.focus, dtype=float))
        else:
            targets = _band_targets(current)
        if not targets:
            if step == 0:
                raise MeshError("no y-element qualifies for refinement")
            break
        current = _split(current, targets, params.n_y)
        logger.debug("refinement pass %d split %d elements", step + 1, len(targets))
    classify(current)
    logger.info("refined y-region (n_y=%d, n_s=%d): %s", params.n_y, params.n_s, current.census())
    return current
