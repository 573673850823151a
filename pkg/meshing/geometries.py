"""Built-in base meshes with their supports and loads"""

from typing import Callable, Dict, List, Tuple

import numpy as np

from meshing.io import validate_mesh
from models.boundary import BoundaryLine, BoundarySpec, PointSupport, Support, TractionLoad
from models.mesh import Mesh
from utils.errors import ConfigError

BEAM_LENGTH = 10.0
BEAM_DEPTH = 2.0
L_DOMAIN_SIZE = 20.0
CANTILEVER_SEED = 1729
CANTILEVER_JITTER = 0.1


def _grid(nx: int, ny: int, hx: float, hy: float, skip=lambda i, j: False):
    """Structured grid of rectangles, cells (i, j) with skip(i, j) left out"""
    vertices = [(i * hx, j * hy) for j in range(ny + 1) for i in range(nx + 1)]
    quads, cells = [], []
    for j in range(ny):
        for i in range(nx):
            if skip(i, j):
                continue
            a = j * (nx + 1) + i
            quads.append((a, a + 1, a + nx + 2, a + nx + 1))
            cells.append((i, j))
    used = sorted({v for q in quads for v in q})
    renumber = {v: k for k, v in enumerate(used)}
    return (np.array([vertices[v] for v in used], dtype=float),
            np.array([[renumber[v] for v in q] for q in quads], dtype=np.int64),
            cells)


def two_quad(a: float = 1.0, **_) -> Tuple[Mesh, BoundarySpec]:
    vertices, quads, _ = _grid(2, 1, 1.0, 1.0)
    return Mesh(vertices, quads, ['x', 'y']), BoundarySpec(description="unit squares, x | y")


def bathe_patch(**_) -> Tuple[Mesh, BoundarySpec]:
    vertices = [(0, 0), (10, 0), (2, 2), (8, 3), (4, 7), (8, 7), (0, 10), (10, 10)]
    # 1-based in the usual table: (1,2,4,3) (2,8,6,4) (5,6,8,7) (1,3,5,7) (3,4,6,5)
    quads = [(0, 1, 3, 2), (1, 7, 5, 3), (4, 5, 7, 6), (0, 2, 4, 6), (2, 3, 5, 4)]
    mesh = Mesh(np.array(vertices, dtype=float), np.array(quads), ['x', 'x', 'x', 'x', 'y'])
    return mesh, BoundarySpec(description="distorted five-element patch, centre y")


def beam(**_) -> Tuple[Mesh, BoundarySpec]:
    L, c = BEAM_LENGTH, BEAM_DEPTH
    vertices = [(0, 0), (4, 0), (L, 0), (L, c), (6, c), (0, c)]
    quads = [(0, 1, 4, 5), (1, 2, 3, 4)]
    mesh = Mesh(np.array(vertices, dtype=float), np.array(quads), ['x', 'y'])
    return mesh, BoundarySpec(description=f"beam {L} x {c} split by a skew line")


def highorder_patch(**_) -> Tuple[Mesh, BoundarySpec]:
    vertices, quads, _ = _grid(2, 1, 1.0, 1.0)
    return (Mesh(vertices, quads, ['x', 'y']),
            BoundarySpec(description="[0,2] x [0,1] split at x = 1"))


def hole_quadrant(a: float = 1.0, **_) -> Tuple[Mesh, BoundarySpec]:
    """x in [a, 5a], y in [0, 2a], two square elements"""
    vertices, quads, _ = _grid(2, 1, 2.0 * a, 2.0 * a)
    vertices[:, 0] += a
    return (Mesh(vertices, quads, ['x', 'y']),
            BoundarySpec(description=f"2a x 4a strip next to a hole of radius {a}"))


def cantilever(load: float = 1.0, **_) -> Tuple[Mesh, BoundarySpec]:
    """10 x 2 grid with seeded interior-vertex perturbation"""
    nx, ny = 10, 2
    vertices, quads, cells = _grid(nx, ny, 1.0, 1.0)
    rng = np.random.default_rng(CANTILEVER_SEED)
    interior = [(j * (nx + 1) + i) for j in range(1, ny) for i in range(1, nx)]
    vertices[interior] += rng.uniform(-CANTILEVER_JITTER, CANTILEVER_JITTER, (len(interior), 2))
    region = ['y' if i == 0 else 'x' for i, _ in cells]
    spec = BoundarySpec(
        supports=[Support(BoundaryLine('x', 0.0))],
        tractions=[TractionLoad(BoundaryLine('x', float(nx)), (0.0, -load))],
        focus=[(0.0, 0.0), (0.0, float(ny))],
        description="distorted cantilever clamped at x = 0, end shear"
    )
    return Mesh(vertices, quads, region), spec


def l_domain(load: float = 1.0, **_) -> Tuple[Mesh, BoundarySpec]:
    """[0, c]^2 without its upper-right quarter, 12 squares"""
    c = L_DOMAIN_SIZE
    h = c / 4.0
    vertices, quads, cells = _grid(4, 4, h, h, skip=lambda i, j: i >= 2 and j >= 2)
    corner = {(1, 1), (2, 1), (1, 2)}
    region = ['y' if cell in corner else 'x' for cell in cells]
    half = c / 2.0
    spec = BoundarySpec(
        supports=[Support(BoundaryLine('x', 0.0), (0,)), Support(BoundaryLine('y', 0.0), (1,))],
        tractions=[
            TractionLoad(BoundaryLine('y', c, 0.0, half), (0.0, load)),
            TractionLoad(BoundaryLine('x', c, 0.0, half), (load, 0.0)),
        ],
        focus=[(half, half)],
        description="L-shaped domain under biaxial tension"
    )
    return Mesh(vertices, quads, region), spec


BUILTINS: Dict[str, Callable[..., Tuple[Mesh, BoundarySpec]]] = {
    'two-quad': two_quad,
    'bathe-patch': bathe_patch,
    'beam': beam,
    'highorder-patch': highorder_patch,
    'hole-quadrant': hole_quadrant,
    'cantilever': cantilever,
    'l-domain': l_domain,
}


def builtin_names() -> List[str]:
    return sorted(BUILTINS)


def builtin_geometry(name: str, a: float = 1.0, load: float = 1.0) -> Tuple[Mesh, BoundarySpec]:
    """Base mesh and boundary description of a built-in geometry

    Args:
        name: Geometry id (see builtin_names())
        a: Hole radius for 'hole-quadrant'
        load: Traction magnitude for the singular benchmarks

    Raises:
        ConfigError: unknown id
    """
    if name not in BUILTINS:
        raise ConfigError(f"unknown geometry '{name}', expected one of {builtin_names()}")
    mesh, spec = BUILTINS[name](a=a, load=load)
    return validate_mesh(mesh), spec
