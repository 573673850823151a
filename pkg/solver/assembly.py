"""Global assembly, Dirichlet elimination and the linear solve"""

import logging
from functools import partial
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from meshing.dofmap import DofMap
from models.material import Material
from models.mesh import Mesh
from models.study import SolverSettings
from solver.elasticity import ElementMatrices, element_stiffness
from utils.errors import ConstraintError, SolverError

logger = logging.getLogger(__name__)

CONSTRAINT_TOL = 1e-12
CACHE_DIGITS = 13
SINGULAR_PIVOT = 1e-13

ElementProvider = Callable[[int, np.ndarray], ElementMatrices]


@dataclass
class LinearSystem:
    """Global K (sparse, symmetric), load vector and prescribed DOF values"""
    K: sp.csr_matrix
    f: np.ndarray
    constraints: List[Tuple[int, float]] = field(default_factory=list)

    @property
    def size(self) -> int:
        return self.K.shape[0]

    def add_constraints(self, items: Iterable[Tuple[int, float]]):
        self.constraints.extend((int(d), float(v)) for d, v in items)


@dataclass
class ReducedSystem:
    """Free-DOF system left after eliminating the prescribed DOFs"""
    K: sp.csr_matrix
    f: np.ndarray
    free: np.ndarray
    fixed: np.ndarray
    values: np.ndarray
    n_full: int
    residual: np.ndarray

    @property
    def size(self) -> int:
        return len(self.free)

    def expand(self, u_free: np.ndarray) -> np.ndarray:
        """Full displacement vector with the prescribed values reinserted"""
        u = np.zeros(self.n_full)
        u[self.fixed] = self.values
        u[self.free] = u_free
        return u


@dataclass
class SolveReport:
    u: np.ndarray
    residual: float
    condition: float
    method: str


def _default_provider(mesh: Mesh, dofmap: DofMap, material: Material) -> ElementProvider:
    cache: Dict[tuple, ElementMatrices] = {}
    scale = max(mesh.bbox_size, 1e-300)

    def provide(e: int, coords: np.ndarray) -> ElementMatrices:
        shape_set = dofmap.shape_sets[e]
        key = (id(shape_set), tuple(np.round((coords - coords[0]) / scale, CACHE_DIGITS).ravel()))
        if key not in cache:
            cache[key] = element_stiffness(coords, shape_set, material, element=e)
        return cache[key]

    return provide


def assemble(mesh: Mesh, dofmap: DofMap, material: Material,
             provider: Optional[ElementProvider] = None) -> LinearSystem:
    """Scatter-add element matrices into the global system

    Orientation signs enter as diag(s) K_e diag(s). Body loads are zero.
    """
    provider = provider or _default_provider(mesh, dofmap, material)
    rows, cols, vals = [], [], []
    f = np.zeros(dofmap.n_dof)
    for e in range(mesh.n_quads):
        mats = provider(e, mesh.element_coords(e))
        dofs = dofmap.element_dofs(e)
        s = dofmap.element_signs(e)
        Ke = s[:, None] * mats.K * s[None, :]
        n = len(dofs)
        rows.append(np.repeat(dofs, n))
        cols.append(np.tile(dofs, n))
        vals.append(Ke.ravel())
        np.add.at(f, dofs, s * mats.f)
    K = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(dofmap.n_dof, dofmap.n_dof)).tocsr()
    K = 0.5 * (K + K.T)
    logger.info("assembled %d x %d system, %d non-zeros", K.shape[0], K.shape[1], K.nnz)
    return LinearSystem(K.tocsr(), f)


def _merge_constraints(constraints: List[Tuple[int, float]], n: int) -> Dict[int, float]:
    merged: Dict[int, float] = {}
    for dof, value in constraints:
        if not 0 <= dof < n:
            raise ConstraintError(f"constrained DOF {dof} outside 0..{n - 1}")
        if dof in merged:
            old = merged[dof]
            if abs(old - value) > CONSTRAINT_TOL * max(1.0, abs(old), abs(value)):
                raise ConstraintError(f"DOF {dof} prescribed to both {old!r} and {value!r}")
            continue
        merged[dof] = value
    return merged


def apply_dirichlet(system: LinearSystem) -> ReducedSystem:
    """Eliminate prescribed DOFs: K_ff u_f = f_f - K_fc u_c

    The full residual K u_pre - f (prescribed values, zeros elsewhere) is
    kept for residual-only checks.

    Raises:
        ConstraintError: conflicting duplicate constraints
    """
    n = system.size
    merged = _merge_constraints(system.constraints, n)
    fixed = np.array(sorted(merged), dtype=np.int64)
    values = np.array([merged[d] for d in fixed], dtype=float)
    free_mask = np.ones(n, dtype=bool)
    free_mask[fixed] = False
    free = np.flatnonzero(free_mask)
    u_pre = np.zeros(n)
    u_pre[fixed] = values
    K = system.K.tocsr()
    residual = K @ u_pre - system.f
    K_ff = K[free][:, free]
    rhs = system.f[free] - K[free][:, fixed] @ values
    logger.debug("eliminated %d prescribed DOFs, %d free", len(fixed), len(free))
    return ReducedSystem(K_ff.tocsr(), rhs, free, fixed, values, n, residual)


def _relative_residual(K, u: np.ndarray, f: np.ndarray) -> float:
    norm_f = np.linalg.norm(f)
    r = np.linalg.norm(K @ u - f)
    return float(r / norm_f) if norm_f > 0.0 else float(r)


def solve(K, f: np.ndarray, settings: Optional[SolverSettings] = None) -> SolveReport:
    """Solve a symmetric positive definite system

    Dense Cholesky below settings.dense_limit unknowns, sparse LU with
    diagonal pivoting above it. The condition estimate is the squared ratio
    of the extreme pivots of the factor.

    A solution whose relative residual misses settings.residual_tol gets one
    step of iterative refinement with the same factor.

    Raises:
        SolverError: matrix not positive definite or singular, solution not
            finite, or residual above settings.residual_tol after refinement
    """
    settings = settings or SolverSettings()
    n = K.shape[0]
    if n == 0:
        return SolveReport(np.zeros(0), 0.0, 1.0, 'empty')
    f = np.asarray(f, dtype=float)
    if n <= settings.dense_limit:
        dense = K.toarray() if sp.issparse(K) else np.asarray(K, dtype=float)
        try:
            factor = scipy.linalg.cho_factor(dense, lower=True, check_finite=False)
        except np.linalg.LinAlgError as e:
            raise SolverError(f"stiffness matrix is not positive definite: {e}") from e
        apply_inverse = partial(scipy.linalg.cho_solve, factor, check_finite=False)
        pivots = np.abs(np.diag(factor[0]))
        if pivots.min() ** 2 <= SINGULAR_PIVOT * pivots.max() ** 2:
            raise SolverError("stiffness matrix is singular (rigid modes not suppressed?)")
        condition = float((pivots.max() / pivots.min()) ** 2)
        method = 'dense-cholesky'
    else:
        try:
            lu = splu(sp.csc_matrix(K), permc_spec='MMD_AT_PLUS_A', diag_pivot_thresh=0.0,
                      options={'SymmetricMode': True})
        except RuntimeError as e:
            raise SolverError(f"sparse factorisation failed: {e}") from e
        pivots = lu.U.diagonal()
        if np.any(pivots <= 0.0):
            raise SolverError("stiffness matrix is not positive definite (non-positive pivot)")
        if pivots.min() <= SINGULAR_PIVOT * pivots.max():
            raise SolverError("stiffness matrix is singular (rigid modes not suppressed?)")
        apply_inverse = lu.solve
        condition = float(pivots.max() / pivots.min())
        method = 'sparse-lu'
    u = apply_inverse(f)
    if not np.all(np.isfinite(u)):
        raise SolverError("solution is not finite")
    residual = _relative_residual(K, u, f)
    if residual > settings.residual_tol:
        logger.debug("residual %.3e above target, refining", residual)
        u = u + apply_inverse(f - K @ u)
        residual = _relative_residual(K, u, f)
    if residual > settings.residual_tol:
        raise SolverError(f"relative residual {residual:.3e} above target {settings.residual_tol:.1e} "
                          f"(condition ~{condition:.2e})")
    logger.info("solved %d unknowns with %s, residual %.2e, condition ~%.2e",
                n, method, residual, condition)
    return SolveReport(u, residual, condition, method)


def solve_system(system: LinearSystem, settings: Optional[SolverSettings] = None
                 ) -> Tuple[np.ndarray, SolveReport]:
    """Eliminate constraints, solve, and return the full displacement vector"""
    reduced = apply_dirichlet(system)
    report = solve(reduced.K, reduced.f, settings)
    return reduced.expand(report.u), report


def strain_energy(K, u: np.ndarray) -> float:
    """Total strain energy 1/2 u^T K u"""
    return 0.5 * float(u @ (K @ u))
