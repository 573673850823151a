# Verify module

from verify.conformity import interface_jump
from verify.errors import energy_error, l2_error, mean_relative_error, relative_energy_error
from verify.patch import ExactField, PatchReport, exact_field, patch_mesh, run_patch_test
from verify.rates import convergence_rate, theoretical_rate, two_point_rate
from verify.studies import (
    StudyOutcome, patch_grid, run_study, shape_table, stratified_sample
)

__all__ = [
    'interface_jump',
    'energy_error', 'l2_error', 'mean_relative_error', 'relative_energy_error',
    'ExactField', 'PatchReport', 'exact_field', 'patch_mesh', 'run_patch_test',
    'convergence_rate', 'theoretical_rate', 'two_point_rate',
    'StudyOutcome', 'patch_grid', 'run_study', 'shape_table', 'stratified_sample'
]
