# Meshing module

from meshing.coupling import EdgeCoupling, EdgeLayout, classify_elements, discover_couplings
from meshing.dofmap import DofMap, build_dof_map
from meshing.geometries import builtin_geometry, builtin_names
from meshing.io import load_mesh, save_mesh, validate_mesh
from meshing.refinement import refine_y_region, uniform_refine

__all__ = [
    'EdgeCoupling', 'EdgeLayout', 'classify_elements', 'discover_couplings',
    'DofMap', 'build_dof_map',
    'builtin_geometry', 'builtin_names',
    'load_mesh', 'save_mesh', 'validate_mesh',
    'refine_y_region', 'uniform_refine'
]
