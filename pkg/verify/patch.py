"""Patch tests in three variants

A: every DOF prescribed from the exact field, interior residual only.
B: exact displacements on the whole boundary, interior solved.
C: minimal supports and the printed tractions (beam fields only).
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from analytic.beams import BeamField, BeamVariant
from analytic.checks import divergence_residual
from analytic.hole import HoleProblem
from analytic.polyfield import admissible_poly_field
from meshing.coupling import discover_couplings
from meshing.dofmap import build_dof_map
from meshing.geometries import BEAM_DEPTH, BEAM_LENGTH, builtin_geometry
from meshing.refinement import refine_y_region, uniform_refine
from models.boundary import BoundaryLine, PointSupport
from models.mesh import Mesh
from models.study import PatchConfig, TestVersion
from solver.assembly import apply_dirichlet, assemble, solve, strain_energy
from solver.boundary import (
    impose_field_on_boundary, point_constraints, select_edges, traction_load, zero_constraints
)
from solver.elasticity import default_stress_points
from solver.interpolation import interpolate_field
from solver.solution import Solution
from verify.errors import l2_error, mean_relative_error
from utils.errors import ConfigError

logger = logging.getLogger(__name__)

ADMISSIBLE_TOL = 1e-6


@dataclass
class PatchReport:
    """Outcome of one patch test

    error is the mean relative stress error (B, C), the relative interior
    residual (A) or the relative L2 displacement error (displacement metric).
    """
    label: str
    version: TestVersion
    n_dof: int
    error: float
    components: np.ndarray = field(default_factory=lambda: np.zeros(3))
    displacement_error: Optional[float] = None
    energy: Optional[float] = None
    matrix: Optional[object] = None
    samples: Optional[np.ndarray] = None


@dataclass
class ExactField:
    displacement: Callable[[np.ndarray], np.ndarray]
    stress: Callable[[np.ndarray], np.ndarray]
    beam: Optional[BeamField] = None


def exact_field(cfg: PatchConfig) -> ExactField:
    """Exact solution named by a patch configuration"""
    material = cfg.material
    if cfg.exact == 'poly':
        poly = admissible_poly_field(cfg.field_order, material.nu, material.state)
        return ExactField(poly.displacement, lambda pts: poly.stress(pts, material))
    if cfg.exact == 'hole':
        hole = HoleProblem(cfg.sigma0, cfg.hole_radius, material)
        return ExactField(hole.displacement, hole.stress)
    variant = BeamVariant.QUADRATIC if cfg.exact == 'beam-quadratic' else BeamVariant.CUBIC
    beam = BeamField(variant, BEAM_LENGTH, BEAM_DEPTH, material)
    return ExactField(beam.displacement, beam.stress, beam)


def patch_mesh(cfg: PatchConfig) -> Mesh:
    """Base mesh, y-region refinement, then uniform refinements

    Uniform levels split every element of the transition mesh, so each level
    halves the whole y-region and keeps n_y y-elements per x-element edge.
    """
    if cfg.mesh is not None:
        mesh = cfg.mesh.copy()
    else:
        mesh = builtin_geometry(cfg.geometry, a=cfg.hole_radius)[0]
    mesh = refine_y_region(mesh, cfg.refine)
    for _ in range(cfg.uniform_levels):
        mesh = uniform_refine(mesh)
    return mesh


def _check_admissible(exact: ExactField, mesh: Mesh):
    samples = np.vstack([mesh.element_coords(e).mean(axis=0) for e in range(mesh.n_quads)])
    scale = float(np.max(np.abs(exact.stress(mesh.vertices)))) or 1.0
    residual = divergence_residual(exact.stress, samples, mesh.bbox_size)
    if residual > ADMISSIBLE_TOL * scale:
        raise ConfigError(f"exact field violates equilibrium: residual {residual:.3e}")


def _version_c(cfg: PatchConfig, mesh: Mesh, dofmap, exact: ExactField, couplings):
    beam = exact.beam
    constraints = []
    if beam.variant == BeamVariant.QUADRATIC:
        left = select_edges(mesh, couplings, BoundaryLine('x', 0.0))
        constraints += impose_field_on_boundary(mesh, dofmap, beam.displacement, left, (0,))
        constraints += point_constraints(mesh, dofmap, PointSupport((0.0, 0.0), (1,)),
                                         beam.displacement)
        loaded = select_edges(mesh, couplings, BoundaryLine('x', beam.L))
    else:
        constraints += point_constraints(mesh, dofmap, PointSupport((0.0, 0.0), (0, 1)),
                                         beam.displacement)
        constraints += point_constraints(mesh, dofmap, PointSupport((0.0, beam.c), (0,)),
                                         beam.displacement)
        loaded = couplings.boundary_edges()
    f = traction_load(mesh, dofmap, loaded, beam.traction, couplings)
    return constraints, f


def _stress_error(solution: Solution, cfg: PatchConfig, exact: ExactField) -> Tuple[float, np.ndarray]:
    computed, reference = [], []
    for e in range(solution.mesh.n_quads):
        computed.append(solution.stress(e, cfg.material))
        xi, eta = default_stress_points(solution.dofmap.shape_sets[e])
        reference.append(exact.stress(solution.points(e, xi, eta)))
    return mean_relative_error(np.vstack(computed), np.vstack(reference))


def run_patch_test(cfg: PatchConfig, metric: str = 'stress', keep_matrix: bool = False,
                   sample_grid: int = 0) -> PatchReport:
    """Run one patch test

    Args:
        cfg: Patch configuration
        metric: 'stress' (mean relative stress error) or 'displacement'
            (relative L2 displacement error) for Versions B and C
        keep_matrix: Attach the assembled global stiffness to the report
        sample_grid: Attach displacement samples on this many points per
            direction and element (0 disables)

    Raises:
        ConfigError: exact field not in equilibrium, Version C without beam field
    """
    mesh = patch_mesh(cfg)
    exact = exact_field(cfg)
    _check_admissible(exact, mesh)
    couplings = discover_couplings(mesh)
    dofmap = build_dof_map(mesh, couplings, cfg.p_x, cfg.p_y,
                           cfg.pairing.x_family(cfg.distribution),
                           cfg.pairing.y_family(cfg.distribution))
    system = assemble(mesh, dofmap, cfg.material)
    label = cfg.label()

    if cfg.version == TestVersion.A:
        u_pre = interpolate_field(mesh, dofmap, exact.displacement, couplings)
        system.add_constraints(enumerate(u_pre))
        reduced = apply_dirichlet(system)
        boundary = {dof for dof, _ in zero_constraints(mesh, dofmap, couplings.boundary_edges(), (0, 1))}
        inner = np.array([d for d in range(dofmap.n_dof) if d not in boundary], dtype=np.int64)
        norm_k = float(abs(system.K).sum(axis=1).max())
        scale = norm_k * float(np.max(np.abs(u_pre))) or 1.0
        error = float(np.max(np.abs(reduced.residual[inner]))) / scale if inner.size else 0.0
        logger.info("%s version A: relative residual %.3e", label, error)
        return PatchReport(label, cfg.version, dofmap.n_dof, error,
                           matrix=system.K if keep_matrix else None)

    if cfg.version == TestVersion.B:
        system.add_constraints(impose_field_on_boundary(mesh, dofmap, exact.displacement,
                                                        couplings=couplings))
    else:
        constraints, f = _version_c(cfg, mesh, dofmap, exact, couplings)
        system.add_constraints(constraints)
        system.f = system.f + f
    reduced = apply_dirichlet(system)
    report = solve(reduced.K, reduced.f, cfg.solver)
    u = reduced.expand(report.u)
    solution = Solution(mesh, dofmap, u)
    disp_error = l2_error(solution, exact.displacement)
    if metric == 'displacement':
        error, components = disp_error, np.zeros(3)
    else:
        error, components = _stress_error(solution, cfg, exact)
    logger.info("%s version %s: error %.3e", label, cfg.version.value, error)
    return PatchReport(label, cfg.version, dofmap.n_dof, error, components, disp_error,
                       energy=strain_energy(system.K, u),
                       matrix=system.K if keep_matrix else None,
                       samples=solution.sample(sample_grid) if sample_grid > 0 else None)
