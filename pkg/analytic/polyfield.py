"""Admissible polynomial displacement fields

u_x = sum a_i m_i(x, y), u_y = sum b_i m_i(x, y) over the monomials of total
degree <= p, numbered row by row through Pascal's triangle (1-based):
x^i y^j has index k(k+1)/2 + j + 1 with k = i + j.

Coefficients of pure powers (1, x^k, y^k) are set to their own index. The
mixed coefficients of each degree row follow from the equilibrium equations
without body load; rows decouple because second derivatives lower every
monomial by exactly two degrees.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from models.material import Material, StressState
from solver.elasticity import material_matrix
from utils.errors import ClosureError, ConfigError

logger = logging.getLogger(__name__)

MAX_FIELD_ORDER = 8
SINGULAR_COND = 1e12


def pascal_index(i: int, j: int) -> int:
    """1-based Pascal-triangle index of x^i y^j"""
    k = i + j
    return k * (k + 1) // 2 + j + 1


def monomials(p: int) -> List[Tuple[int, int]]:
    """Exponent pairs (i, j) in Pascal order up to total degree p"""
    return [(k - j, j) for k in range(p + 1) for j in range(k + 1)]


def n_terms(p: int) -> int:
    return (p + 1) * (p + 2) // 2


def _grid(p: int, coeffs: np.ndarray) -> np.ndarray:
    grid = np.zeros((p + 1, p + 1))
    for (i, j), value in zip(monomials(p), coeffs):
        grid[i, j] = value
    return grid


def _derivative(grid: np.ndarray, axis: int) -> np.ndarray:
    out = P.polyder(grid, axis=axis)
    pad = [(0, 0), (0, 0)]
    pad[axis] = (0, 1)
    return np.pad(out, pad)


def _strain_grids(cx: np.ndarray, cy: np.ndarray):
    return (_derivative(cx, 0), _derivative(cy, 1),
            _derivative(cx, 1) + _derivative(cy, 0))


def _equilibrium_grids(cx: np.ndarray, cy: np.ndarray, D: np.ndarray):
    strains = _strain_grids(cx, cy)
    sx, sy, txy = (sum(D[r, c] * strains[c] for c in range(3)) for r in range(3))
    return (_derivative(sx, 0) + _derivative(txy, 1),
            _derivative(txy, 0) + _derivative(sy, 1))


def _unit_D(nu: float, state: StressState) -> np.ndarray:
    return material_matrix(Material(1.0, nu, state))


@lru_cache(maxsize=None)
def _closure_row(degree: int, nu: float, state: StressState) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    k = degree
    if k < 2:
        return (), ()
    D = _unit_D(nu, state)
    size = k + 1
    mixed = [(k - j, j) for j in range(1, k)]
    equations = [(k - 2 - j, j) for j in range(k - 1)]

    def residual(cx, cy):
        r1, r2 = _equilibrium_grids(cx, cy, D)
        return np.array([r1[i, j] for i, j in equations] + [r2[i, j] for i, j in equations])

    known_x = np.zeros((size, size))
    known_x[k, 0] = pascal_index(k, 0)
    known_x[0, k] = pascal_index(0, k)
    known_y = known_x.copy()
    r0 = residual(known_x, known_y)

    columns = []
    zero = np.zeros((size, size))
    for comp in (0, 1):
        for i, j in mixed:
            unit = np.zeros((size, size))
            unit[i, j] = 1.0
            columns.append(residual(unit, zero) if comp == 0 else residual(zero, unit))
    A = np.column_stack(columns)
    if np.linalg.cond(A) > SINGULAR_COND:
        raise ClosureError(f"closure system of degree {k} is singular for nu = {nu}")
    z = np.linalg.solve(A, -r0)
    return tuple(z[:k - 1]), tuple(z[k - 1:])


def closure_row(degree: int, nu: float,
                state: StressState = StressState.PLANE_STRESS) -> Tuple[np.ndarray, np.ndarray]:
    """Mixed coefficients of one degree row

    Returns:
        (a, b) for x^(k-j) y^j, j = 1..k-1

    Raises:
        ClosureError: singular row (the cubic row at nu = 0)
    """
    a, b = _closure_row(int(degree), float(nu), StressState(state))
    return np.array(a), np.array(b)


@dataclass(frozen=True, eq=False)
class PolynomialField2D:
    """Polynomial displacement field with Pascal-ordered coefficients"""
    order: int
    a: np.ndarray
    b: np.ndarray
    nu: float = 0.3
    state: StressState = StressState.PLANE_STRESS

    def __post_init__(self):
        expected = n_terms(self.order)
        if len(self.a) != expected or len(self.b) != expected:
            raise ConfigError(f"order {self.order} needs {expected} coefficients per component")

    def coefficient(self, comp: int, index: int) -> float:
        """Coefficient a_index (comp 0) or b_index (comp 1), 1-based"""
        return float((self.a if comp == 0 else self.b)[index - 1])

    def grids(self) -> Tuple[np.ndarray, np.ndarray]:
        return _grid(self.order, self.a), _grid(self.order, self.b)

    def displacement(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        cx, cy = self.grids()
        return np.column_stack([P.polyval2d(pts[:, 0], pts[:, 1], cx),
                                P.polyval2d(pts[:, 0], pts[:, 1], cy)])

    def strain(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        grids = _strain_grids(*self.grids())
        return np.column_stack([P.polyval2d(pts[:, 0], pts[:, 1], g) for g in grids])

    def stress(self, points, material: Material = None) -> np.ndarray:
        material = material or Material(1.0, self.nu, self.state)
        return self.strain(points) @ material_matrix(material).T

    def with_coefficient(self, comp: int, index: int, value: float) -> 'PolynomialField2D':
        a, b = self.a.copy(), self.b.copy()
        (a if comp == 0 else b)[index - 1] = value
        return PolynomialField2D(self.order, a, b, self.nu, self.state)


def admissible_poly_field(p: int, nu: float,
                          state: StressState = StressState.PLANE_STRESS) -> PolynomialField2D:
    """Polynomial field of order p satisfying equilibrium without body load

    Raises:
        ConfigError: p outside 1..8
        ClosureError: a singular degree row (p >= 3 at nu = 0)
    """
    if not 1 <= int(p) <= MAX_FIELD_ORDER:
        raise ConfigError(f"field order must be in [1, {MAX_FIELD_ORDER}], got {p}")
    p = int(p)
    a = np.zeros(n_terms(p))
    b = np.zeros(n_terms(p))
    for k in range(p + 1):
        for i, j in ((k, 0), (0, k)):
            idx = pascal_index(i, j)
            a[idx - 1] = b[idx - 1] = idx
        ra, rb = closure_row(k, nu, state)
        for j in range(1, k):
            idx = pascal_index(k - j, j)
            a[idx - 1] = ra[j - 1]
            b[idx - 1] = rb[j - 1]
    logger.debug("admissible field of order %d for nu=%g", p, nu)
    return PolynomialField2D(p, a, b, float(nu), StressState(state))


def poly_field_eval(field: PolynomialField2D, material: Material, x, y):
    """Displacement, strain and stress of a polynomial field

    Returns:
        (u (n, 2), strain (n, 3), stress (n, 3))
    """
    pts = np.column_stack([np.atleast_1d(np.asarray(x, dtype=float)).ravel(),
                           np.atleast_1d(np.asarray(y, dtype=float)).ravel()])
    eps = field.strain(pts)
    return field.displacement(pts), eps, eps @ material_matrix(material).T
