# Solver module

from solver.assembly import (
    LinearSystem, ReducedSystem, SolveReport,
    apply_dirichlet, assemble, solve, solve_system, strain_energy
)
from solver.boundary import (
    boundary_spec_system, impose_field_on_boundary, point_constraints, select_edges,
    traction_load, zero_constraints
)
from solver.elasticity import (
    ElementMatrices, default_stress_points, element_stiffness, element_stress, material_matrix
)
from solver.interpolation import interpolate_field
from solver.solution import Solution

__all__ = [
    'LinearSystem', 'ReducedSystem', 'SolveReport',
    'apply_dirichlet', 'assemble', 'solve', 'solve_system', 'strain_energy',
    'boundary_spec_system', 'impose_field_on_boundary', 'point_constraints', 'select_edges',
    'traction_load', 'zero_constraints', 'interpolate_field',
    'ElementMatrices', 'default_stress_points', 'element_stiffness', 'element_stress',
    'material_matrix', 'Solution'
]
