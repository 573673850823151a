"""Closed-form 12-node bi-quadratic transition elements

Reference transcription of the serendipity, trunk-space and transition shape
functions of the 12-node element that couples one quadratic element to two
quadratic elements along E1 and E2. Used as a test oracle for
build_transition.
"""

import math
from enum import Enum
from typing import Callable, Tuple

import numpy as np

from basis.polybasis import BasisFamily, make_basis
from elements.blending import EdgeSpec, TransitionShapeSet, build_transition

SQRT6_4 = math.sqrt(6.0) / 4.0


class FixtureVariant(str, Enum):
    LALA = "LaLa"
    LALE = "LaLe"
    LELE = "LeLe"


def n1(s):
    return 0.5 * (1.0 - s)


def n2(s):
    return 0.5 * (1.0 + s)


def la_n1(s):
    return 0.5 * (s * s - s)


def la_n2(s):
    return 1.0 - s * s


def la_n3(s):
    return 0.5 * (s * s + s)


def le_n1(s):
    return 0.5 * (1.0 - s)


def le_n2(s):
    return SQRT6_4 * (s * s - 1.0)


def le_n3(s):
    return 0.5 * (1.0 + s)


# 8-node serendipity element
def serendipity_4(xi, eta):
    return -0.25 * (1.0 - xi) * (1.0 + eta) * (1.0 + xi - eta)


def serendipity_11(xi, eta):
    return 0.5 * (1.0 - xi * xi) * (1.0 + eta)


def serendipity_12(xi, eta):
    return 0.5 * (1.0 - xi) * (1.0 - eta * eta)


# trunk space built on hierarchic functions
def trunk_4(xi, eta):
    return n1(xi) * n2(eta)


def trunk_11(xi, eta):
    return le_n2(xi) * n2(eta)


def trunk_12(xi, eta):
    return le_n2(eta) * n1(xi)


def _split_traces(f1, f2, f3):
    """Five piecewise quadratic trace functions on [-1,0] u [0,1]"""

    def left(f):
        return lambda t: np.where(t <= 0.0, f(2.0 * t + 1.0), 0.0)

    def right(f):
        return lambda t: np.where(t > 0.0, f(2.0 * t - 1.0), 0.0)

    junction = lambda t: np.where(t <= 0.0, f3(2.0 * t + 1.0), f1(2.0 * t - 1.0))
    return left(f1), left(f2), junction, right(f2), right(f3)


def twelve_node_fixture(variant) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """Closed-form evaluator of the 12 boundary functions of a variant

    Returns:
        Function (xi, eta) -> array of shape (n_points, 12)
    """
    variant = FixtureVariant(variant)
    if variant == FixtureVariant.LALA:
        split = (la_n1, la_n2, la_n3)
        g1, g2, g3 = la_n1, la_n2, la_n3
        corner_4, edge_11, edge_12 = serendipity_4, serendipity_11, serendipity_12
    elif variant == FixtureVariant.LALE:
        split = (le_n1, le_n2, le_n3)
        g1, g2, g3 = la_n1, la_n2, la_n3
        corner_4, edge_11, edge_12 = serendipity_4, serendipity_11, serendipity_12
    else:
        split = (le_n1, le_n2, le_n3)
        g1, g2, g3 = le_n1, le_n2, le_n3
        corner_4, edge_11, edge_12 = trunk_4, trunk_11, trunk_12
    s1, s2, s3, s4, s5 = _split_traces(*split)

    def evaluate(xi, eta) -> np.ndarray:
        xi = np.atleast_1d(np.asarray(xi, dtype=float)).ravel()
        eta = np.atleast_1d(np.asarray(eta, dtype=float)).ravel()
        return np.column_stack([
            n1(xi) * g1(eta) + n1(eta) * s1(xi) - n1(xi) * n1(eta),
            n2(xi) * s1(eta) + n1(eta) * s5(xi) - n2(xi) * n1(eta),
            n2(xi) * s5(eta) + n2(eta) * g3(xi) - n2(xi) * n2(eta),
            corner_4(xi, eta),
            n1(eta) * s2(xi),
            n1(eta) * s3(xi),
            n1(eta) * s4(xi),
            n2(xi) * s2(eta),
            n2(xi) * s3(eta),
            n2(xi) * s4(eta),
            edge_11(xi, eta),
            edge_12(xi, eta),
        ])

    return evaluate


def fixture_transition(variant) -> Tuple[TransitionShapeSet, int]:
    """Transition set built generically for the same 12-node layout

    Returns:
        (shape set with all four edges blended, number of boundary functions)
    """
    variant = FixtureVariant(variant)
    lagrange = make_basis(BasisFamily.lagrange(), 2)
    legendre = make_basis(BasisFamily.hierarchic(), 2)
    split_basis = lagrange if variant == FixtureVariant.LALA else legendre
    plain_basis = legendre if variant == FixtureVariant.LELE else lagrange
    split = EdgeSpec.from_breaks((-1.0, 0.0, 1.0), (split_basis, split_basis))
    plain = EdgeSpec.single(plain_basis)
    shape_set = build_transition((split, split, plain, plain), plain_basis,
                                 coupled_edges=(True, True, True, True))
    return shape_set, 12
