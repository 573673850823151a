"""One-dimensional shape-function families

Spectral (Lagrange) bases on Gauss-Lobatto-Legendre or Gauss-Lobatto-Chebyshev
nodes and hierarchic bases built from integrated Legendre polynomials.

Index convention for every basis of order p: column 0 (index 1) is the left
vertex function, column p (index p+1) the right vertex function, and columns
1..p-1 (indices 2..p) are interior nodes or modes.
"""

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from utils.errors import BasisError, NumericalError

MIN_ORDER = 1
MAX_ORDER = 12
DOMAIN_TOL = 1e-12
NEWTON_MAX_ITER = 100


class NodeDistribution(str, Enum):
    """Lobatto-type node families for spectral elements"""
    GLL = "GLL"
    GLC = "GLC"


class FamilyKind(str, Enum):
    """Shape-function family"""
    LAGRANGE = "Lagrange"
    HIERARCHIC = "Legendre"


@dataclass(frozen=True)
class BasisFamily:
    """Family of 1D shape functions (nodal spectral or hierarchic)"""
    kind: FamilyKind
    distribution: Optional[NodeDistribution] = None

    def __post_init__(self):
        if self.kind == FamilyKind.LAGRANGE and self.distribution is None:
            object.__setattr__(self, 'distribution', NodeDistribution.GLL)
        if self.kind == FamilyKind.HIERARCHIC:
            object.__setattr__(self, 'distribution', None)

    @classmethod
    def lagrange(cls, distribution: NodeDistribution = NodeDistribution.GLL) -> 'BasisFamily':
        return cls(FamilyKind.LAGRANGE, NodeDistribution(distribution))

    @classmethod
    def hierarchic(cls) -> 'BasisFamily':
        return cls(FamilyKind.HIERARCHIC)

    @classmethod
    def from_code(cls, code: str, distribution: NodeDistribution = NodeDistribution.GLL) -> 'BasisFamily':
        """Create a family from its two-letter code ('La' or 'Le')"""
        if code == 'La':
            return cls.lagrange(distribution)
        if code == 'Le':
            return cls.hierarchic()
        raise BasisError(f"unknown family code '{code}'")

    @property
    def is_lagrange(self) -> bool:
        return self.kind == FamilyKind.LAGRANGE

    @property
    def code(self) -> str:
        return 'La' if self.is_lagrange else 'Le'

    def to_dict(self) -> dict:
        return {
            'kind': self.kind.value,
            'distribution': self.distribution.value if self.distribution else None
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'BasisFamily':
        kind = FamilyKind(data['kind'])
        distribution = data.get('distribution')
        if kind == FamilyKind.LAGRANGE:
            return cls.lagrange(NodeDistribution(distribution or 'GLL'))
        return cls.hierarchic()


def _as_points(x) -> Tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    return np.atleast_1d(arr).ravel(), scalar


def _check_domain(x: np.ndarray):
    if x.size and np.max(np.abs(x)) > 1.0 + DOMAIN_TOL:
        raise BasisError(f"evaluation point outside [-1, 1]: {np.max(np.abs(x))!r}")


def legendre_table(n: int, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Values and derivatives of L_0..L_n at the points x

    Bonnet recursion for the values; the derivative uses
    L'_{k+1} = L'_{k-1} + (2k+1) L_k, which stays accurate at the endpoints.

    Returns:
        (values, derivatives), each of shape (n+1, len(x))
    """
    x = np.asarray(x, dtype=float)
    values = np.zeros((n + 1,) + x.shape)
    derivs = np.zeros((n + 1,) + x.shape)
    values[0] = 1.0
    if n >= 1:
        values[1] = x
        derivs[1] = 1.0
    for k in range(1, n):
        values[k + 1] = ((2 * k + 1) * x * values[k] - k * values[k - 1]) / (k + 1)
        derivs[k + 1] = derivs[k - 1] + (2 * k + 1) * values[k]
    return values, derivs


def legendre_eval(n: int, x):
    """Legendre polynomial L_n and its derivative

    Args:
        n: Degree (>= 0)
        x: Point or array of points in [-1, 1]

    Returns:
        (value, derivative) as floats for scalar input, arrays otherwise
    """
    if n < 0:
        raise BasisError(f"Legendre degree must be non-negative, got {n}")
    pts, scalar = _as_points(x)
    _check_domain(pts)
    values, derivs = legendre_table(n, pts)
    if scalar:
        return float(values[n][0]), float(derivs[n][0])
    return values[n], derivs[n]


def _check_order(p: int):
    if not isinstance(p, (int, np.integer)) or p < MIN_ORDER or p > MAX_ORDER:
        raise BasisError(f"polynomial order must be in [{MIN_ORDER}, {MAX_ORDER}], got {p!r}")


def _symmetrize(nodes: np.ndarray) -> np.ndarray:
    n = len(nodes)
    for i in range(n // 2):
        half = 0.5 * (nodes[n - 1 - i] - nodes[i])
        nodes[i] = -half
        nodes[n - 1 - i] = half
    if n % 2 == 1:
        nodes[n // 2] = 0.0
    nodes[0] = -1.0
    nodes[-1] = 1.0
    return nodes


@lru_cache(maxsize=None)
def _glc_nodes(p: int) -> Tuple[float, ...]:
    nodes = -np.cos(np.arange(p + 1) * math.pi / p)
    return tuple(_symmetrize(nodes))


def glc_points(p: int) -> np.ndarray:
    """Gauss-Lobatto-Chebyshev points -cos(i*pi/p), i = 0..p"""
    _check_order(p)
    return np.array(_glc_nodes(p))


@lru_cache(maxsize=None)
def _gll_nodes(p: int) -> Tuple[float, ...]:
    nodes = np.array(_glc_nodes(p))
    lp1 = p * (p + 1)
    for k in range(1, (p + 1) // 2):
        x = nodes[k]
        for _ in range(NEWTON_MAX_ITER):
            vals, ders = legendre_table(p, np.array([x]))
            f = ders[p][0]
            if abs(f) < 1e-14:
                break
            # second derivative from the Legendre equation
            df = (2.0 * x * f - lp1 * vals[p][0]) / (1.0 - x * x)
            step = f / df
            x -= step
            if abs(step) < 1e-16:
                break
        else:
            raise NumericalError(f"GLL Newton iteration did not converge for p={p}, root {k}")
        _, ders = legendre_table(p, np.array([x]))
        if abs(ders[p][0]) > 1e-10:
            raise NumericalError(f"GLL root {k} for p={p} has residual {ders[p][0]:.3e}")
        nodes[k] = x
        nodes[p - k] = -x
    return tuple(_symmetrize(nodes))


def gll_points(p: int) -> np.ndarray:
    """Gauss-Lobatto-Legendre points: +-1 and the roots of L'_p"""
    _check_order(p)
    return np.array(_gll_nodes(p))


@dataclass(frozen=True)
class Basis1D:
    """A 1D shape-function basis of order p on [-1, 1]"""
    family: BasisFamily
    order: int
    nodes: Tuple[float, ...]

    def __post_init__(self):
        _check_order(self.order)
        nodes = np.asarray(self.nodes)
        if self.family.is_lagrange:
            if len(nodes) != self.order + 1:
                raise BasisError("spectral basis needs p+1 nodes")
            if nodes[0] != -1.0 or nodes[-1] != 1.0 or np.any(np.diff(nodes) <= 0.0):
                raise BasisError("spectral nodes must increase strictly from -1 to 1")
        elif tuple(self.nodes) != (-1.0, 1.0):
            raise BasisError("hierarchic basis carries only the endpoints as nodes")

    @property
    def n_functions(self) -> int:
        return self.order + 1

    @property
    def code(self) -> str:
        return self.family.code

    def tabulate(self, x) -> Tuple[np.ndarray, np.ndarray]:
        """Evaluate every function at the points x

        Returns:
            (values, derivatives), each of shape (len(x), p+1)
        """
        pts = np.atleast_1d(np.asarray(x, dtype=float)).ravel()
        if self.family.is_lagrange:
            return _lagrange_tabulate(np.asarray(self.nodes), pts)
        return _hierarchic_tabulate(self.order, pts)

    def eval(self, i: int, x):
        """Value and derivative of function i (1-based) at x"""
        if not 1 <= i <= self.order + 1:
            raise BasisError(f"basis index {i} outside 1..{self.order + 1}")
        pts, scalar = _as_points(x)
        _check_domain(pts)
        values, derivs = self.tabulate(pts)
        if scalar:
            return float(values[0, i - 1]), float(derivs[0, i - 1])
        return values[:, i - 1], derivs[:, i - 1]


def _lagrange_tabulate(nodes: np.ndarray, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    m = len(nodes)
    diff = x[:, None] - nodes[None, :]
    values = np.empty((len(x), m))
    derivs = np.zeros((len(x), m))
    for i in range(m):
        others = [j for j in range(m) if j != i]
        denom = np.prod(nodes[i] - nodes[others])
        values[:, i] = np.prod(diff[:, others], axis=1) / denom
        for k in others:
            rest = [j for j in others if j != k]
            if rest:
                derivs[:, i] += np.prod(diff[:, rest], axis=1)
            else:
                derivs[:, i] += 1.0
        derivs[:, i] /= denom
    return values, derivs


def _hierarchic_tabulate(p: int, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    leg, dleg = legendre_table(p, x)
    values = np.empty((len(x), p + 1))
    derivs = np.empty((len(x), p + 1))
    values[:, 0] = 0.5 * (1.0 - x)
    derivs[:, 0] = -0.5
    values[:, p] = 0.5 * (1.0 + x)
    derivs[:, p] = 0.5
    for i in range(2, p + 1):
        values[:, i - 1] = (leg[i] - leg[i - 2]) / math.sqrt(2.0 * (2 * i - 1))
        derivs[:, i - 1] = math.sqrt((2 * i - 1) / 2.0) * leg[i - 1]
    return values, derivs


def lagrange_eval(basis: Basis1D, i: int, xi):
    """Lagrange interpolant i (1-based) of a spectral basis and its derivative"""
    if not basis.family.is_lagrange:
        raise BasisError("lagrange_eval needs a spectral basis")
    return basis.eval(i, xi)


def hierarchic_eval(basis: Basis1D, i: int, xi):
    """Hierarchic function i (1-based) and its derivative

    Index 1 and p+1 are the linear vertex functions; index i in 2..p is the
    integrated Legendre mode sqrt((2i-1)/2) * int_{-1}^{xi} L_{i-1}.
    """
    if basis.family.is_lagrange:
        raise BasisError("hierarchic_eval needs a hierarchic basis")
    return basis.eval(i, xi)


@lru_cache(maxsize=None)
def make_basis(family: BasisFamily, p: int) -> Basis1D:
    """Build a validated basis of the given family and order"""
    _check_order(p)
    if family.is_lagrange:
        if family.distribution == NodeDistribution.GLC:
            nodes = _glc_nodes(p)
        else:
            nodes = _gll_nodes(p)
        return Basis1D(family, int(p), tuple(float(v) for v in nodes))
    return Basis1D(family, int(p), (-1.0, 1.0))
