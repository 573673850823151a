"""Study drivers: patch grids, convergence series, singular benchmarks, basis dumps

Every driver turns a resolved StudyConfig into a StudyOutcome. Independent
runs of a grid are dispatched to worker processes when cfg.jobs > 1; results
keep the order of the grid so output files are deterministic.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from multiprocessing import get_context
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from basis.polybasis import NodeDistribution
from meshing.coupling import discover_couplings
from meshing.dofmap import build_dof_map
from meshing.geometries import builtin_geometry
from meshing.refinement import refine_y_region, uniform_refine
from models.boundary import BoundarySpec
from models.mesh import ElementClass, Mesh, RefineParams
from models.study import (
    Pairing, PatchConfig, StudyConfig, StudyKind, StudyResult, StudyRow, TestVersion
)
from solver.assembly import assemble, solve_system, strain_energy
from solver.boundary import boundary_spec_system
from solver.solution import Solution
from verify.conformity import interface_jump
from verify.errors import relative_energy_error
from verify.patch import PatchReport, run_patch_test
from verify.rates import convergence_rate, theoretical_rate
from utils.errors import ConfigError

logger = logging.getLogger(__name__)

STRATA_ORDERS = ((2, 6), (4, 8))
NEXT_ORDER = {2: 4, 4: 6, 6: 8, 8: 2}
EXHAUSTIVE_REFINE = range(1, 5)
EXHAUSTIVE_ORDERS = range(2, 9)
DEFAULT_SHAPE_GRID = 21
COMBINATION_HEADER = ('pairing', 'distribution', 'n_y', 'n_s', 'p_x', 'p_y',
                      'n_dof', 'error', 'error_sxx', 'error_syy', 'error_sxy')
SHAPE_HEADER = ('xi', 'eta', 'function', 'N', 'dN_dxi', 'dN_deta')
FIELD_HEADER = ('element', 'x', 'y', 'u_x', 'u_y')

Table = Tuple[Sequence[str], Any]
Combination = Tuple[Pairing, NodeDistribution, RefineParams, int, int]


@dataclass
class StudyOutcome:
    """Everything a study run hands to the writers

    tables maps a file stem to (header, rows); matrices a file stem to a
    sparse global stiffness.
    """
    results: List[StudyResult] = field(default_factory=list)
    meta: Dict[str, Any] = field(default_factory=dict)
    tables: Dict[str, Table] = field(default_factory=dict)
    matrices: Dict[str, Any] = field(default_factory=dict)

    def rows(self) -> List[StudyRow]:
        return [row for result in self.results for row in result.rows]


@dataclass
class EnergyRun:
    """One solve of a singular benchmark"""
    n_dof: int
    energy: float
    matrix: Optional[Any] = None
    samples: Optional[np.ndarray] = None


def _pool_map(fn: Callable, items: List, jobs: int) -> List:
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    workers = min(jobs, len(items))
    logger.info("dispatching %d runs to %d worker processes", len(items), workers)
    chunk = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers, mp_context=get_context("spawn")) as pool:
        return list(pool.map(fn, items, chunksize=chunk))


def base_geometry(cfg: StudyConfig) -> Tuple[Mesh, BoundarySpec]:
    """Configured mesh file or built-in geometry"""
    if cfg.mesh is not None:
        spec = BoundarySpec()
        if cfg.geometry:
            spec = builtin_geometry(cfg.geometry, a=cfg.hole_radius, load=cfg.load)[1]
        return cfg.mesh.copy(), spec
    if not cfg.geometry:
        raise ConfigError("either geometry or mesh_file is required")
    return builtin_geometry(cfg.geometry, a=cfg.hole_radius, load=cfg.load)


# Patch grids

def stratified_sample(focus: Sequence = ()) -> List[Combination]:
    """64 combinations: two order pairs in each pairing x distribution x n_y x n_s stratum

    Even strata take p_x in {2, 6}, odd strata {4, 8}; p_y is the next order
    of the cycle 2 -> 4 -> 6 -> 8 -> 2.
    """
    combos = []
    strata = product(Pairing, NodeDistribution, (1, 2), (1, 2))
    for k, (pairing, distribution, n_y, n_s) in enumerate(strata):
        for p in STRATA_ORDERS[k % 2]:
            combos.append((pairing, distribution, RefineParams(n_y, n_s, list(focus)),
                           p, NEXT_ORDER[p]))
    return combos


def patch_grid(cfg: StudyConfig) -> List[PatchConfig]:
    """Patch configurations selected by the exhaustive flag and the grid mode"""
    focus = cfg.refine.focus
    if cfg.exhaustive:
        combos = [(pairing, distribution, RefineParams(n_y, n_s, focus), p_x, p_y)
                  for pairing, distribution, n_y, n_s, p_x, p_y in product(
                      Pairing, NodeDistribution, EXHAUSTIVE_REFINE, EXHAUSTIVE_REFINE,
                      EXHAUSTIVE_ORDERS, EXHAUSTIVE_ORDERS)]
    elif cfg.grid == 'stratified':
        combos = stratified_sample(focus)
    else:
        combos = [(pairing, distribution, cfg.refine, p_x, p_y)
                  for pairing, distribution in product(cfg.pairings, cfg.distributions)
                  for p_x, p_y in cfg.order_pairs()]
    return [patch_config(cfg, pairing, distribution, refine, p_x, p_y)
            for pairing, distribution, refine, p_x, p_y in combos]


def patch_config(cfg: StudyConfig, pairing: Pairing, distribution: NodeDistribution,
                 refine: RefineParams, p_x: int, p_y: int, uniform_levels: int = 0,
                 version: Optional[TestVersion] = None) -> PatchConfig:
    return PatchConfig(
        geometry=cfg.geometry,
        p_x=p_x,
        p_y=p_y,
        pairing=pairing,
        distribution=distribution,
        refine=refine,
        version=version or cfg.version,
        exact=cfg.exact,
        field_order=cfg.field_order,
        uniform_levels=uniform_levels,
        material=cfg.material,
        solver=cfg.solver,
        hole_radius=cfg.hole_radius,
        sigma0=cfg.sigma0,
        mesh=cfg.mesh
    )


def _patch_worker(task: Tuple[PatchConfig, str, bool, int]) -> PatchReport:
    cfg, metric, keep_matrix, sample_grid = task
    return run_patch_test(cfg, metric, keep_matrix, sample_grid)


def _attach_artifacts(outcome: StudyOutcome, name: str, report: PatchReport):
    if report.matrix is not None:
        outcome.matrices[f"K_{name}"] = report.matrix
    if report.samples is not None:
        outcome.tables[f"field_{name}"] = (FIELD_HEADER, report.samples)


def run_patch_study(cfg: StudyConfig) -> StudyOutcome:
    """patch-linear / -quadratic / -cubic / -highorder

    The high-order study reports the relative L2 displacement error, the
    others the mean relative stress error.
    """
    metric = 'displacement' if cfg.kind == StudyKind.PATCH_HIGHORDER else 'stress'
    configs = patch_grid(cfg)
    logger.info("%s: %d combinations", cfg.kind.value, len(configs))
    tasks = [(pc, metric, cfg.dump_matrix and k == 0, cfg.dump_shapes if k == 0 else 0)
             for k, pc in enumerate(configs)]
    reports = _pool_map(_patch_worker, tasks, cfg.jobs)

    outcome = StudyOutcome()
    result = StudyResult(label=cfg.kind.value)
    combinations = []
    for pc, report in zip(configs, reports):
        result.add_row(StudyRow(report.n_dof, report.error, pc.p_x, pc.p_y, pc.refine.n_s))
        combinations.append((pc.pairing.value, pc.distribution.value, pc.refine.n_y, pc.refine.n_s,
                             pc.p_x, pc.p_y, report.n_dof, report.error, *report.components))
    _attach_artifacts(outcome, configs[0].label(), reports[0])
    outcome.results.append(result)
    outcome.tables['combinations'] = (COMBINATION_HEADER, combinations)

    errors = np.array([r.error for r in reports])
    worst = int(np.argmax(errors))
    outcome.meta = {
        'metric': metric,
        'combinations': len(configs),
        'max_error': float(errors[worst]),
        'worst': configs[worst].label()
    }
    if metric == 'displacement':
        outcome.meta['monotone'] = bool(np.all(np.diff(errors) < 0.0))
    logger.info("%s: max error %.3e (%s)", cfg.kind.value, errors[worst], configs[worst].label())
    return outcome


# Convergence series

def run_convergence_study(cfg: StudyConfig) -> StudyOutcome:
    """conv-poly / conv-hole: h-series of uniform refinements per order pair

    Level k applies the configured y-region refinement to the base mesh and
    then splits every element k times. The error is the relative L2
    displacement error against the exact field imposed on the boundary.
    """
    series = [(pairing, distribution, p_x, p_y)
              for pairing, distribution in product(cfg.pairings, cfg.distributions)
              for p_x, p_y in cfg.order_pairs()]
    tasks = []
    for pairing, distribution, p_x, p_y in series:
        for level in range(cfg.levels):
            pc = patch_config(cfg, pairing, distribution, cfg.refine, p_x, p_y,
                              uniform_levels=level, version=TestVersion.B)
            last = level == cfg.levels - 1
            tasks.append((pc, 'displacement', cfg.dump_matrix and last,
                          cfg.dump_shapes if last else 0))
    logger.info("%s: %d series x %d levels", cfg.kind.value, len(series), cfg.levels)
    reports = _pool_map(_patch_worker, tasks, cfg.jobs)

    outcome = StudyOutcome()
    slopes = {}
    for k, (pairing, distribution, p_x, p_y) in enumerate(series):
        chunk = reports[k * cfg.levels:(k + 1) * cfg.levels]
        label = f"{pairing.value}-{distribution.value}-px{p_x}-py{p_y}"
        result = StudyResult(label=label)
        for level, report in enumerate(chunk):
            result.add_row(StudyRow(report.n_dof, report.error, p_x, p_y, level))
        if cfg.levels >= 2:
            convergence_rate(result)
        outcome.results.append(result)
        slopes[label] = {'slope': result.slope, 'rates': result.rates,
                         'theoretical': theoretical_rate(min(p_x, p_y))}
        _attach_artifacts(outcome, label, chunk[-1])
    outcome.meta = {'metric': 'displacement', 'series': slopes}
    return outcome


# Singular benchmarks

def solve_benchmark(mesh: Mesh, spec: BoundarySpec, p: int, pairing: Pairing,
                    distribution: NodeDistribution, cfg: StudyConfig,
                    keep_matrix: bool = False, sample_grid: int = 0) -> EnergyRun:
    """Solve a geometry under its own supports and loads, returning the strain energy"""
    couplings = discover_couplings(mesh)
    dofmap = build_dof_map(mesh, couplings, p, p, pairing.x_family(distribution),
                           pairing.y_family(distribution))
    system = assemble(mesh, dofmap, cfg.material)
    constraints, f = boundary_spec_system(mesh, dofmap, spec, couplings)
    system.add_constraints(constraints)
    system.f = system.f + f
    u, _ = solve_system(system, cfg.solver)
    samples = Solution(mesh, dofmap, u).sample(sample_grid) if sample_grid > 0 else None
    return EnergyRun(dofmap.n_dof, strain_energy(system.K, u),
                     system.K if keep_matrix else None, samples)


def _focus(cfg: StudyConfig, spec: BoundarySpec) -> List[Tuple[float, float]]:
    focus = cfg.refine.focus or spec.focus
    if not focus:
        raise ConfigError("singular studies need focus points (geometry or refine.focus)")
    return focus


def reference_energy(cfg: StudyConfig) -> EnergyRun:
    """Overkill solution: uniform refinements plus focused refinement at high order"""
    mesh, spec = base_geometry(cfg)
    for _ in range(cfg.reference.uniform):
        mesh = uniform_refine(mesh)
    mesh = refine_y_region(mesh, RefineParams(2, cfg.reference.n_s, _focus(cfg, spec)))
    run = solve_benchmark(mesh, spec, cfg.reference.p, Pairing.LALA, cfg.distributions[0], cfg)
    logger.info("reference: %d DOFs, strain energy %.12e", run.n_dof, run.energy)
    return run


def _singular_worker(task: Tuple[StudyConfig, int, float]) -> Tuple[StudyResult, StudyResult, Dict]:
    cfg, p, energy_ref = task
    base, spec = base_geometry(cfg)
    focus = _focus(cfg, spec)
    pairing, distribution = cfg.pairings[0], cfg.distributions[0]
    artifacts = {}

    local = StudyResult(label=f"local-p{p}")
    for n_s in range(1, cfg.refine.n_s + 1):
        mesh = refine_y_region(base, RefineParams(cfg.refine.n_y, n_s, focus))
        last = n_s == cfg.refine.n_s
        run = solve_benchmark(mesh, spec, p, pairing, distribution, cfg,
                              cfg.dump_matrix and last, cfg.dump_shapes if last else 0)
        local.add_row(StudyRow(run.n_dof, relative_energy_error(run.energy, energy_ref), p, p, n_s))
        if last:
            artifacts = {'matrix': run.matrix, 'samples': run.samples}

    uniform = StudyResult(label=f"sem-p{p}")
    mesh = base.copy()
    for level in range(cfg.reference.uniform + 1):
        if level:
            mesh = uniform_refine(mesh)
        run = solve_benchmark(mesh, spec, p, Pairing.LALA, distribution, cfg)
        uniform.add_row(StudyRow(run.n_dof, relative_energy_error(run.energy, energy_ref), p, p, level))
        if run.n_dof >= local.rows[-1].n_dof:
            break
    else:
        logger.warning("p=%d: uniform series stops below the local DOF count", p)
    return local, uniform, artifacts


def run_singular_study(cfg: StudyConfig) -> StudyOutcome:
    """singular-cantilever / singular-L

    For each p, a local series refines the y-elements at the focus points
    n_s = 1..refine.n_s times; a spectral series refines the whole mesh
    uniformly until it has at least as many DOFs as the finest local mesh.
    Both are measured by the relative energy error against the reference.
    """
    reference = reference_energy(cfg)
    orders = sorted(set(cfg.p_x))
    results = _pool_map(_singular_worker, [(cfg, p, reference.energy) for p in orders], cfg.jobs)

    outcome = StudyOutcome()
    ratios = {}
    for p, (local, uniform, artifacts) in zip(orders, results):
        outcome.results.extend([local, uniform])
        ratio = local.rows[-1].error / uniform.rows[-1].error if uniform.rows[-1].error > 0.0 else None
        ratios[f"p{p}"] = {
            'local': {'n_dof': local.rows[-1].n_dof, 'error': local.rows[-1].error},
            'uniform': {'n_dof': uniform.rows[-1].n_dof, 'error': uniform.rows[-1].error},
            'ratio': ratio
        }
        if artifacts.get('matrix') is not None:
            outcome.matrices[f"K_local-p{p}"] = artifacts['matrix']
        if artifacts.get('samples') is not None:
            outcome.tables[f"field_local-p{p}"] = (FIELD_HEADER, artifacts['samples'])
        logger.info("p=%d: local %.3e (%d DOFs) vs uniform %.3e (%d DOFs)", p,
                    local.rows[-1].error, local.rows[-1].n_dof,
                    uniform.rows[-1].error, uniform.rows[-1].n_dof)
    outcome.meta = {
        'metric': 'energy',
        'reference': {'n_dof': reference.n_dof, 'energy': reference.energy,
                      **cfg.reference.to_dict()},
        'comparison': ratios
    }
    return outcome


# Basis dump

def shape_table(shape_set, grid: int) -> np.ndarray:
    """Values and reference gradients of every shape function on a grid x grid lattice

    Returns:
        Rows (xi, eta, function index, N, dN_dxi, dN_deta), function-major
    """
    t = np.linspace(-1.0, 1.0, grid)
    xi, eta = (a.ravel() for a in np.meshgrid(t, t))
    N, dN_dxi, dN_deta = shape_set.tabulate(xi, eta)
    n_points, n_functions = N.shape
    return np.column_stack([
        np.tile(xi, n_functions), np.tile(eta, n_functions),
        np.repeat(np.arange(n_functions), n_points),
        N.T.ravel(), dN_dxi.T.ravel(), dN_deta.T.ravel()
    ])


def run_basis_dump(cfg: StudyConfig) -> StudyOutcome:
    """Shape functions of the first transition element and the interface jump

    Rows hold the global DOF count and the largest displacement jump across
    interior edges for a random coefficient vector.
    """
    base, _ = base_geometry(cfg)
    mesh = refine_y_region(base, cfg.refine)
    couplings = discover_couplings(mesh)
    transition = [e for e, c in enumerate(mesh.element_class) if c == ElementClass.XNY]
    element = transition[0] if transition else 0
    grid = cfg.dump_shapes or DEFAULT_SHAPE_GRID

    outcome = StudyOutcome()
    result = StudyResult(label=cfg.kind.value)
    functions = {}
    for pairing, distribution in product(cfg.pairings, cfg.distributions):
        for p_x, p_y in cfg.order_pairs():
            dofmap = build_dof_map(mesh, couplings, p_x, p_y, pairing.x_family(distribution),
                                   pairing.y_family(distribution))
            jump = interface_jump(mesh, dofmap, couplings=couplings)
            result.add_row(StudyRow(dofmap.n_dof, jump, p_x, p_y, cfg.refine.n_s))
            label = f"{pairing.value}-{distribution.value}-px{p_x}-py{p_y}"
            name = f"shapes_{label}"
            shape_set = dofmap.shape_sets[element]
            outcome.tables[name] = (SHAPE_HEADER, shape_table(shape_set, grid))
            functions[name] = shape_set.n_functions
            if cfg.dump_matrix:
                outcome.matrices[f"K_{label}"] = assemble(mesh, dofmap, cfg.material).K
    outcome.results.append(result)
    outcome.meta = {
        'element': element,
        'element_class': mesh.element_class[element].value,
        'census': mesh.census(),
        'n_functions': functions
    }
    return outcome


DRIVERS: Dict[StudyKind, Callable[[StudyConfig], StudyOutcome]] = {
    StudyKind.PATCH_LINEAR: run_patch_study,
    StudyKind.PATCH_QUADRATIC: run_patch_study,
    StudyKind.PATCH_CUBIC: run_patch_study,
    StudyKind.PATCH_HIGHORDER: run_patch_study,
    StudyKind.CONV_POLY: run_convergence_study,
    StudyKind.CONV_HOLE: run_convergence_study,
    StudyKind.SINGULAR_CANTILEVER: run_singular_study,
    StudyKind.SINGULAR_L: run_singular_study,
    StudyKind.BASIS_DUMP: run_basis_dump,
}


def run_study(cfg: StudyConfig) -> StudyOutcome:
    """Run the study named by cfg.kind"""
    logger.info("running %s", cfg.kind.value)
    return DRIVERS[cfg.kind](cfg)
