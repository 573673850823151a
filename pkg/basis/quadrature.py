"""Gauss-Legendre rules and subdomain-composite rules on the reference square"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np
from numpy.polynomial import legendre

from utils.errors import BasisError

MAX_POINTS = 32
BREAK_GAP = 1e-12


@dataclass(frozen=True, eq=False)
class QuadRule:
    """1D rule on [-1, 1]"""
    points: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return len(self.points)

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.points)))


@lru_cache(maxsize=None)
def _gauss(n: int) -> Tuple[np.ndarray, np.ndarray]:
    points, weights = legendre.leggauss(n)
    points.setflags(write=False)
    weights.setflags(write=False)
    return points, weights


def gauss_rule(n: int) -> QuadRule:
    """n-point Gauss-Legendre rule, exact up to degree 2n-1

    Args:
        n: Number of points, 1..32
    """
    if not isinstance(n, (int, np.integer)) or n < 1 or n > MAX_POINTS:
        raise BasisError(f"Gauss rule size must be in [1, {MAX_POINTS}], got {n!r}")
    points, weights = _gauss(int(n))
    return QuadRule(points, weights)


def _check_breaks(breaks: Sequence[float], name: str) -> Tuple[float, ...]:
    values = tuple(float(b) for b in breaks)
    if len(values) < 2 or values[0] != -1.0 or values[-1] != 1.0:
        raise BasisError(f"{name} must start at -1 and end at 1")
    if any(b - a <= BREAK_GAP for a, b in zip(values, values[1:])):
        raise BasisError(f"{name} must be strictly increasing")
    return values


@dataclass(frozen=True)
class SubdomainGrid:
    """Break lines splitting the reference square into integration cells"""
    xi_breaks: Tuple[float, ...] = (-1.0, 1.0)
    eta_breaks: Tuple[float, ...] = (-1.0, 1.0)

    def __post_init__(self):
        object.__setattr__(self, 'xi_breaks', _check_breaks(self.xi_breaks, 'xi_breaks'))
        object.__setattr__(self, 'eta_breaks', _check_breaks(self.eta_breaks, 'eta_breaks'))

    @property
    def n_cells(self) -> int:
        return (len(self.xi_breaks) - 1) * (len(self.eta_breaks) - 1)


@dataclass(frozen=True, eq=False)
class MappedRule2D:
    """Points (xi, eta) and weights over the reference square"""
    xi: np.ndarray
    eta: np.ndarray
    weights: np.ndarray

    @property
    def size(self) -> int:
        return len(self.weights)

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.xi, self.eta)))


def composite_rule_1d(breaks: Sequence[float], n: int) -> QuadRule:
    """Gauss rule repeated on every interval of the break list"""
    rule = gauss_rule(n)
    breaks = np.asarray(breaks, dtype=float)
    lo, hi = breaks[:-1], breaks[1:]
    half = 0.5 * (hi - lo)
    points = (0.5 * (hi + lo))[:, None] + half[:, None] * rule.points[None, :]
    weights = half[:, None] * rule.weights[None, :]
    return QuadRule(points.ravel(), weights.ravel())


def composite_rule_2d(grid: SubdomainGrid, n_per_dir: int) -> MappedRule2D:
    """Tensor Gauss rule mapped into every cell of the grid"""
    rx = composite_rule_1d(grid.xi_breaks, n_per_dir)
    ry = composite_rule_1d(grid.eta_breaks, n_per_dir)
    xi, eta = np.meshgrid(rx.points, ry.points, indexing='ij')
    weights = np.outer(rx.weights, ry.weights)
    return MappedRule2D(xi.ravel(), eta.ravel(), weights.ravel())


def tensor_rule_2d(n_per_dir: int) -> MappedRule2D:
    return composite_rule_2d(SubdomainGrid(), n_per_dir)
