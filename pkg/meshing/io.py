"""Mesh file reading, writing and validation

File format (JSON):
    {"vertices": [[x, y], ...], "quads": [[v0, v1, v2, v3], ...],
     "region": ["x" | "y", ...]}
"""

import json
import logging
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from basis.quadrature import gauss_rule
from meshing.coupling import classify
from meshing.mapping import jacobian
from models.mesh import Mesh, Region
from utils.errors import DuplicateVertexError, MeshParseError, OrientationError

logger = logging.getLogger(__name__)

DUPLICATE_TOL = 1e-10


def _line_of(text: str, pos: int) -> int:
    return text.count('\n', 0, pos) + 1


def _item_line(text: str, key: str, index: int) -> Optional[int]:
    """Line of the index-th entry of a top-level array"""
    start = text.find(f'"{key}"')
    if start < 0:
        return None
    pos = text.find('[', start)
    if pos < 0:
        return _line_of(text, start)
    depth, count, in_string = 0, -1, False
    for i in range(pos, len(text)):
        ch = text[i]
        if in_string:
            in_string = ch != '"'
            continue
        if ch == '"':
            in_string = True
            if depth == 1:
                count += 1
                if count == index:
                    return _line_of(text, i)
        elif ch == '[':
            depth += 1
            if depth == 2:
                count += 1
                if count == index:
                    return _line_of(text, i)
        elif ch == ']':
            depth -= 1
            if depth == 0:
                break
        elif depth == 1 and ch not in ' \t\r\n,':
            if text[i - 1] in ' \t\r\n,[':
                count += 1
                if count == index:
                    return _line_of(text, i)
    return _line_of(text, start)


def check_orientation(mesh: Mesh):
    """Raise OrientationError for the first quad with a non-positive Jacobian
    at its 2 x 2 Gauss points"""
    rule = gauss_rule(2)
    xi, eta = np.meshgrid(rule.points, rule.points, indexing='ij')
    for e in range(mesh.n_quads):
        _, det = jacobian(mesh.element_coords(e), xi.ravel(), eta.ravel())
        if np.any(det <= 0.0):
            raise OrientationError(e, f"(min det {det.min():.3e})")


def check_duplicates(mesh: Mesh):
    tol = DUPLICATE_TOL * mesh.bbox_size
    pairs = cKDTree(mesh.vertices).query_pairs(tol)
    if pairs:
        a, b = min(pairs)
        raise DuplicateVertexError(f"vertices {a} and {b} coincide within {tol:.3e}")


def validate_mesh(mesh: Mesh) -> Mesh:
    """Orientation and duplicate checks, then classification"""
    check_duplicates(mesh)
    check_orientation(mesh)
    return classify(mesh)


def load_mesh(text: str) -> Mesh:
    """Parse and validate mesh file content

    Raises:
        MeshParseError: malformed content (with line number where known)
        OrientationError: clockwise or degenerate quad
        DuplicateVertexError: coincident vertices
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MeshParseError(e.msg, e.lineno) from e
    if not isinstance(data, dict):
        raise MeshParseError("mesh file must contain a JSON object", 1)
    for key in ('vertices', 'quads', 'region'):
        if key not in data:
            raise MeshParseError(f"missing key '{key}'")
        if not isinstance(data[key], list):
            raise MeshParseError(f"'{key}' must be a list", _item_line(text, key, 0))

    vertices = []
    for i, item in enumerate(data['vertices']):
        if (not isinstance(item, list) or len(item) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in item)):
            raise MeshParseError(f"vertex {i} must be [x, y]", _item_line(text, 'vertices', i))
        vertices.append([float(v) for v in item])

    n_vertices = len(vertices)
    quads = []
    for i, item in enumerate(data['quads']):
        if (not isinstance(item, list) or len(item) != 4
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in item)):
            raise MeshParseError(f"quad {i} must list four vertex ids", _item_line(text, 'quads', i))
        if len(set(item)) != 4 or not all(0 <= v < n_vertices for v in item):
            raise MeshParseError(f"quad {i} has invalid vertex ids {item}",
                                 _item_line(text, 'quads', i))
        quads.append(item)

    regions = data['region']
    if len(regions) != len(quads):
        raise MeshParseError(f"{len(regions)} region tags for {len(quads)} quads",
                             _item_line(text, 'region', 0))
    for i, tag in enumerate(regions):
        if tag not in (Region.X.value, Region.Y.value):
            raise MeshParseError(f"region tag {i} must be 'x' or 'y', got {tag!r}",
                                 _item_line(text, 'region', i))

    mesh = Mesh(np.array(vertices, dtype=float).reshape(-1, 2),
                np.array(quads, dtype=np.int64).reshape(-1, 4), regions)
    validate_mesh(mesh)
    logger.info("loaded mesh: %d vertices, %d quads", mesh.n_vertices, mesh.n_quads)
    return mesh


def save_mesh(mesh: Mesh) -> str:
    """Mesh file content, one vertex or quad per line

    Floats use the shortest representation that round-trips exactly.
    """
    data = mesh.to_dict()
    vertex_lines = ',\n'.join('    ' + json.dumps(v) for v in data['vertices'])
    quad_lines = ',\n'.join('    ' + json.dumps(q) for q in data['quads'])
    return (
        '{\n'
        f'  "vertices": [\n{vertex_lines}\n  ],\n'
        f'  "quads": [\n{quad_lines}\n  ],\n'
        f'  "region": {json.dumps(data["region"])}\n'
        '}\n'
    )
