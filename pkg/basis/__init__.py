# Basis module

from basis.polybasis import (
    Basis1D, BasisFamily, FamilyKind, NodeDistribution,
    glc_points, gll_points, hierarchic_eval, lagrange_eval, legendre_eval, make_basis
)
from basis.quadrature import (
    MappedRule2D, QuadRule, SubdomainGrid,
    composite_rule_1d, composite_rule_2d, gauss_rule, tensor_rule_2d
)

__all__ = [
    'Basis1D', 'BasisFamily', 'FamilyKind', 'NodeDistribution',
    'glc_points', 'gll_points', 'hierarchic_eval', 'lagrange_eval', 'legendre_eval', 'make_basis',
    'MappedRule2D', 'QuadRule', 'SubdomainGrid',
    'composite_rule_1d', 'composite_rule_2d', 'gauss_rule', 'tensor_rule_2d'
]
