"""Transfinite (Boolean-sum) construction of transition shape functions

An element edge carries an EdgeSpec: a chain of segments, each with its own
1D basis, glued at junction values. Corner functions are the Boolean sum of
the two incident edge traces blended linearly into the element; edge functions
are a linear blend times the trace; interior functions are tensor products of
the element's own basis.

Edges and their parameter direction on the reference square:
    E1: eta = -1, xi ascending  (corner 1 -> corner 2)
    E2: xi = +1,  eta ascending (corner 2 -> corner 3)
    E3: eta = +1, xi ascending  (corner 4 -> corner 3)
    E4: xi = -1,  eta ascending (corner 1 -> corner 4)

Edges whose trace space is the element's own single-segment basis are not
coupled: their functions are taken from the tensor-product base element.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from basis.polybasis import Basis1D
from basis.quadrature import MappedRule2D, SubdomainGrid, composite_rule_2d
from utils.errors import ShapeError

logger = logging.getLogger(__name__)

JOIN_TOL = 1e-12
EDGE_NAMES = ('E1', 'E2', 'E3', 'E4')

# (xi side, eta side) of each corner; 0 means the -1 side
CORNER_SIDES = ((0, 0), (1, 0), (1, 1), (0, 1))
# horizontal edges vary along xi, vertical along eta
EDGE_IS_HORIZONTAL = (True, False, True, False)
# fixed coordinate side of each edge (eta for E1/E3, xi for E2/E4)
EDGE_SIDE = (0, 1, 1, 0)


@dataclass(frozen=True)
class EdgeSegment:
    """Sub-interval [lo, hi] of an edge with its own 1D basis"""
    lo: float
    hi: float
    basis: Basis1D

    def __post_init__(self):
        if not (-1.0 - JOIN_TOL <= self.lo < self.hi <= 1.0 + JOIN_TOL):
            raise ShapeError(f"invalid segment [{self.lo}, {self.hi}]")

    def to_local(self, t: np.ndarray) -> np.ndarray:
        return (2.0 * t - self.lo - self.hi) / (self.hi - self.lo)

    @property
    def scale(self) -> float:
        """d(local)/dt"""
        return 2.0 / (self.hi - self.lo)


@dataclass(frozen=True)
class EdgeSpec:
    """Piecewise trace space of one element edge"""
    segments: Tuple[EdgeSegment, ...]

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, 'segments', segs)
        if not segs:
            raise ShapeError("edge needs at least one segment")
        if abs(segs[0].lo + 1.0) > JOIN_TOL or abs(segs[-1].hi - 1.0) > JOIN_TOL:
            raise ShapeError("segments must cover [-1, 1]")
        for left, right in zip(segs, segs[1:]):
            if abs(left.hi - right.lo) > JOIN_TOL:
                raise ShapeError(
                    f"gap or overlap between segments at {left.hi} and {right.lo}"
                )

    @classmethod
    def single(cls, basis: Basis1D) -> 'EdgeSpec':
        return cls((EdgeSegment(-1.0, 1.0, basis),))

    @classmethod
    def from_breaks(cls, breaks: Sequence[float], bases: Sequence[Basis1D]) -> 'EdgeSpec':
        if len(bases) != len(breaks) - 1:
            raise ShapeError("need one basis per segment")
        return cls(tuple(EdgeSegment(float(a), float(b), basis)
                         for a, b, basis in zip(breaks, breaks[1:], bases)))

    @classmethod
    def uniform(cls, basis: Basis1D, n: int) -> 'EdgeSpec':
        breaks = np.linspace(-1.0, 1.0, n + 1)
        return cls.from_breaks(breaks, [basis] * n)

    @property
    def n_segments(self) -> int:
        return len(self.segments)

    @property
    def n_functions(self) -> int:
        return sum(s.basis.order + 1 for s in self.segments) - (self.n_segments - 1)

    @property
    def breaks(self) -> Tuple[float, ...]:
        return (self.segments[0].lo,) + tuple(s.hi for s in self.segments)

    @property
    def max_order(self) -> int:
        return max(s.basis.order for s in self.segments)

    def is_plain(self, basis: Basis1D) -> bool:
        """True when the edge is one segment of exactly this basis"""
        return self.n_segments == 1 and self.segments[0].basis == basis

    def offsets(self) -> List[int]:
        """Trace index of the left vertex function of every segment"""
        result, start = [], 0
        for seg in self.segments:
            result.append(start)
            start += seg.basis.order
        return result

    def tabulate(self, t) -> Tuple[np.ndarray, np.ndarray]:
        """All trace functions and their t-derivatives at the points t

        Returns:
            (values, derivatives), each of shape (len(t), n_functions)
        """
        t = np.atleast_1d(np.asarray(t, dtype=float)).ravel()
        values = np.zeros((len(t), self.n_functions))
        derivs = np.zeros((len(t), self.n_functions))
        inner = np.asarray(self.breaks[1:-1])
        owner = np.searchsorted(inner, t, side='right')
        for k, (seg, start) in enumerate(zip(self.segments, self.offsets())):
            mask = owner == k
            if not np.any(mask):
                continue
            local_v, local_d = seg.basis.tabulate(seg.to_local(t[mask]))
            cols = slice(start, start + seg.basis.order + 1)
            values[mask, cols] = local_v
            derivs[mask, cols] = local_d * seg.scale
        return values, derivs


def edge_trace(spec: EdgeSpec, i: int, t: float) -> Tuple[float, float]:
    """Trace function i (1-based) of an edge and its derivative at t"""
    if not 1 <= i <= spec.n_functions:
        raise ShapeError(f"trace index {i} outside 1..{spec.n_functions}")
    if abs(t) > 1.0 + JOIN_TOL:
        raise ShapeError(f"edge parameter {t} outside [-1, 1]")
    values, derivs = spec.tabulate([t])
    return float(values[0, i - 1]), float(derivs[0, i - 1])


@dataclass(frozen=True)
class ShapeValue:
    value: float
    dxi: float
    deta: float


def _merge_breaks(a: Sequence[float], b: Sequence[float]) -> Tuple[float, ...]:
    merged: List[float] = []
    for value in sorted(set(a) | set(b)):
        if merged and value - merged[-1] <= JOIN_TOL:
            continue
        merged.append(value)
    merged[0], merged[-1] = -1.0, 1.0
    return tuple(merged)


def _blend(s: np.ndarray, side: int) -> Tuple[np.ndarray, float]:
    if side == 0:
        return 0.5 * (1.0 - s), -0.5
    return 0.5 * (1.0 + s), 0.5


@dataclass(frozen=True, eq=False)
class TransitionShapeSet:
    """Shape functions of one (possibly transitional) quadrilateral

    Local ordering: corners 1..4, interior trace functions of E1, E2, E3, E4
    (in edge direction), then interior bubbles with xi running fastest.
    """
    edges: Tuple[EdgeSpec, EdgeSpec, EdgeSpec, EdgeSpec]
    interior: Basis1D
    coupled: Tuple[bool, bool, bool, bool]
    _tables: Dict[int, tuple] = field(default_factory=dict, repr=False)

    @property
    def edge_counts(self) -> Tuple[int, ...]:
        return tuple(spec.n_functions - 2 for spec in self.edges)

    @property
    def n_interior(self) -> int:
        return (self.interior.order - 1) ** 2

    @property
    def n_functions(self) -> int:
        return 4 + sum(self.edge_counts) + self.n_interior

    @property
    def max_order(self) -> int:
        return max([self.interior.order] + [spec.max_order for spec in self.edges])

    def edge_slice(self, e: int) -> slice:
        start = 4 + sum(self.edge_counts[:e])
        return slice(start, start + self.edge_counts[e])

    @property
    def interior_slice(self) -> slice:
        start = 4 + sum(self.edge_counts)
        return slice(start, start + self.n_interior)

    def subdomain_grid(self) -> SubdomainGrid:
        xi_breaks = _merge_breaks(self.edges[0].breaks, self.edges[2].breaks)
        eta_breaks = _merge_breaks(self.edges[1].breaks, self.edges[3].breaks)
        return SubdomainGrid(xi_breaks, eta_breaks)

    def default_points_per_dir(self) -> int:
        return self.max_order + 1

    def quadrature_table(self, n_per_dir: Optional[int] = None):
        """Composite rule over the subdomain grid and shape tables at its points

        Returns:
            (rule, N, dN_dxi, dN_deta); cached per rule size
        """
        n = n_per_dir or self.default_points_per_dir()
        if n not in self._tables:
            rule = composite_rule_2d(self.subdomain_grid(), n)
            self._tables[n] = (rule,) + self.tabulate(rule.xi, rule.eta)
            logger.debug("tabulated %d functions at %d points", self.n_functions, rule.size)
        return self._tables[n]

    def tabulate(self, xi, eta) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Values and reference gradients of every function

        Returns:
            (N, dN_dxi, dN_deta), each of shape (n_points, n_functions)
        """
        xi = np.atleast_1d(np.asarray(xi, dtype=float)).ravel()
        eta = np.atleast_1d(np.asarray(eta, dtype=float)).ravel()
        n_pts = len(xi)
        p = self.interior.order
        bx, dbx = self.interior.tabulate(xi)
        by, dby = self.interior.tabulate(eta)

        traces = []
        for e in range(4):
            param = xi if EDGE_IS_HORIZONTAL[e] else eta
            if self.coupled[e]:
                traces.append(self.edges[e].tabulate(param))
            else:
                traces.append((bx, dbx) if EDGE_IS_HORIZONTAL[e] else (by, dby))

        values = np.empty((n_pts, self.n_functions))
        dxi = np.empty_like(values)
        deta = np.empty_like(values)

        for c, (sx, sy) in enumerate(CORNER_SIDES):
            h_edge = 0 if sy == 0 else 2
            v_edge = 3 if sx == 0 else 1
            if not self.coupled[h_edge] and not self.coupled[v_edge]:
                ix, iy = (0 if sx == 0 else p), (0 if sy == 0 else p)
                values[:, c] = bx[:, ix] * by[:, iy]
                dxi[:, c] = dbx[:, ix] * by[:, iy]
                deta[:, c] = bx[:, ix] * dby[:, iy]
                continue
            h_val, h_der = traces[h_edge]
            v_val, v_der = traces[v_edge]
            h, dh = h_val[:, 0 if sx == 0 else -1], h_der[:, 0 if sx == 0 else -1]
            v, dv = v_val[:, 0 if sy == 0 else -1], v_der[:, 0 if sy == 0 else -1]
            lx, dlx = _blend(xi, sx)
            ly, dly = _blend(eta, sy)
            values[:, c] = ly * h + lx * v - lx * ly
            dxi[:, c] = ly * dh + dlx * v - dlx * ly
            deta[:, c] = dly * h + lx * dv - lx * dly

        for e in range(4):
            cols = self.edge_slice(e)
            if cols.stop == cols.start:
                continue
            side = EDGE_SIDE[e]
            if self.coupled[e]:
                t_val, t_der = traces[e]
                inner_v, inner_d = t_val[:, 1:-1], t_der[:, 1:-1]
                if EDGE_IS_HORIZONTAL[e]:
                    blend, dblend = _blend(eta, side)
                    values[:, cols] = blend[:, None] * inner_v
                    dxi[:, cols] = blend[:, None] * inner_d
                    deta[:, cols] = dblend * inner_v
                else:
                    blend, dblend = _blend(xi, side)
                    values[:, cols] = blend[:, None] * inner_v
                    dxi[:, cols] = dblend * inner_v
                    deta[:, cols] = blend[:, None] * inner_d
            else:
                k = 0 if side == 0 else p
                if EDGE_IS_HORIZONTAL[e]:
                    values[:, cols] = bx[:, 1:p] * by[:, k:k + 1]
                    dxi[:, cols] = dbx[:, 1:p] * by[:, k:k + 1]
                    deta[:, cols] = bx[:, 1:p] * dby[:, k:k + 1]
                else:
                    values[:, cols] = bx[:, k:k + 1] * by[:, 1:p]
                    dxi[:, cols] = dbx[:, k:k + 1] * by[:, 1:p]
                    deta[:, cols] = bx[:, k:k + 1] * dby[:, 1:p]

        if self.n_interior:
            cols = self.interior_slice
            # eta index outer, xi index inner
            values[:, cols] = (by[:, 1:p, None] * bx[:, None, 1:p]).reshape(n_pts, -1)
            dxi[:, cols] = (by[:, 1:p, None] * dbx[:, None, 1:p]).reshape(n_pts, -1)
            deta[:, cols] = (dby[:, 1:p, None] * bx[:, None, 1:p]).reshape(n_pts, -1)

        return values, dxi, deta


@lru_cache(maxsize=512)
def _build(edge_specs: Tuple[EdgeSpec, ...], interior: Basis1D,
           coupled: Tuple[bool, ...]) -> TransitionShapeSet:
    return TransitionShapeSet(edge_specs, interior, coupled)


def build_transition(edge_specs: Sequence[EdgeSpec], interior: Basis1D,
                     coupled_edges: Optional[Sequence[bool]] = None) -> TransitionShapeSet:
    """Build the shape set of an element from its four edge trace spaces

    Args:
        edge_specs: Trace spaces of E1, E2, E3, E4
        interior: The element's own basis (bubbles and untouched entities)
        coupled_edges: Optional flags forcing edges to be blended. Edges whose
            trace space differs from a single segment of the interior basis
            are always blended.

    Returns:
        Cached TransitionShapeSet
    """
    specs = tuple(edge_specs)
    if len(specs) != 4:
        raise ShapeError("a quadrilateral needs exactly four edge specifications")
    for spec in specs:
        if not isinstance(spec, EdgeSpec):
            raise ShapeError("edge specifications must be EdgeSpec instances")
    coupled = [not spec.is_plain(interior) for spec in specs]
    if coupled_edges is not None:
        if len(coupled_edges) != 4:
            raise ShapeError("need four coupling flags")
        coupled = [c or bool(flag) for c, flag in zip(coupled, coupled_edges)]
    return _build(specs, interior, tuple(coupled))


def tensor_element(basis: Basis1D) -> TransitionShapeSet:
    """Plain tensor-product element of the given basis"""
    return build_transition([EdgeSpec.single(basis)] * 4, basis)


def eval_shape(shape_set: TransitionShapeSet, k: int, xi: float, eta: float) -> ShapeValue:
    """Value and reference gradient of function k (1-based) at one point"""
    if not 1 <= k <= shape_set.n_functions:
        raise ShapeError(f"shape index {k} outside 1..{shape_set.n_functions}")
    if abs(xi) > 1.0 + JOIN_TOL or abs(eta) > 1.0 + JOIN_TOL:
        raise ShapeError(f"point ({xi}, {eta}) outside the reference square")
    values, dxi, deta = shape_set.tabulate([xi], [eta])
    return ShapeValue(float(values[0, k - 1]), float(dxi[0, k - 1]), float(deta[0, k - 1]))
