# Analytic module

from analytic.beams import BeamField, BeamVariant, beam_field
from analytic.checks import divergence_residual
from analytic.hole import HoleProblem, hole_displacement
from analytic.polyfield import (
    PolynomialField2D, admissible_poly_field, closure_row, monomials, pascal_index, poly_field_eval
)

__all__ = [
    'BeamField', 'BeamVariant', 'beam_field',
    'divergence_residual',
    'HoleProblem', 'hole_displacement',
    'PolynomialField2D', 'admissible_poly_field', 'closure_row', 'monomials', 'pascal_index',
    'poly_field_eval'
]
