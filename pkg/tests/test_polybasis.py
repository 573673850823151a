"""Tests for the 1D shape-function families

Node sets, Kronecker delta and partition of unity of the spectral bases,
the closed form of the hierarchic modes, and argument checking.
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from basis.polybasis import (
    BasisFamily, NodeDistribution, glc_points, gll_points, hierarchic_eval,
    lagrange_eval, legendre_eval, make_basis
)
from utils.errors import BasisError

ORDERS = [1, 2, 3, 5, 8, 12]
FAMILIES = [
    BasisFamily.lagrange(NodeDistribution.GLL),
    BasisFamily.lagrange(NodeDistribution.GLC),
    BasisFamily.hierarchic(),
]


@pytest.fixture
def samples():
    return np.linspace(-1.0, 1.0, 37)


# =============================================================================
# Node sets
# =============================================================================


class TestNodes:
    def test_gll_low_orders(self):
        assert_allclose(gll_points(2), [-1.0, 0.0, 1.0], atol=1e-15)
        r = 1.0 / math.sqrt(5.0)
        assert_allclose(gll_points(3), [-1.0, -r, r, 1.0], atol=1e-14)
        s = math.sqrt(3.0 / 7.0)
        assert_allclose(gll_points(4), [-1.0, -s, 0.0, s, 1.0], atol=1e-14)

    def test_glc_formula(self):
        p = 6
        expected = -np.cos(np.arange(p + 1) * np.pi / p)
        assert_allclose(glc_points(p), expected, atol=1e-15)

    @pytest.mark.parametrize("p", ORDERS)
    @pytest.mark.parametrize("points", [gll_points, glc_points])
    def test_symmetric_and_sorted(self, p, points):
        nodes = points(p)
        assert len(nodes) == p + 1
        assert nodes[0] == -1.0 and nodes[-1] == 1.0
        assert np.all(np.diff(nodes) > 0.0)
        assert_allclose(nodes, -nodes[::-1], atol=0.0)

    @pytest.mark.parametrize("p", [2, 4, 7, 12])
    def test_gll_interior_are_derivative_roots(self, p):
        for x in gll_points(p)[1:-1]:
            _, d = legendre_eval(p, x)
            assert abs(d) < 1e-10

    @pytest.mark.parametrize("p", [0, 13, -1])
    def test_order_out_of_range(self, p):
        with pytest.raises(BasisError):
            gll_points(p)


# =============================================================================
# Legendre polynomials
# =============================================================================


class TestLegendre:
    def test_cubic_value(self):
        value, deriv = legendre_eval(3, 0.5)
        assert value == pytest.approx(-0.4375)
        assert deriv == pytest.approx(0.375)

    def test_endpoint_values(self):
        for n in range(8):
            value, deriv = legendre_eval(n, 1.0)
            assert value == pytest.approx(1.0)
            assert deriv == pytest.approx(n * (n + 1) / 2.0)

    def test_outside_interval(self):
        with pytest.raises(BasisError):
            legendre_eval(2, 1.5)

    def test_negative_degree(self):
        with pytest.raises(BasisError):
            legendre_eval(-1, 0.0)


# =============================================================================
# Basis properties
# =============================================================================


class TestSpectralBasis:
    @pytest.mark.parametrize("p", ORDERS)
    @pytest.mark.parametrize("distribution", list(NodeDistribution))
    def test_kronecker_delta(self, p, distribution):
        basis = make_basis(BasisFamily.lagrange(distribution), p)
        values, _ = basis.tabulate(basis.nodes)
        assert_allclose(values, np.eye(p + 1), atol=1e-12)

    @pytest.mark.parametrize("p", ORDERS)
    def test_partition_of_unity(self, p, samples):
        basis = make_basis(BasisFamily.lagrange(), p)
        values, derivs = basis.tabulate(samples)
        assert_allclose(values.sum(axis=1), 1.0, atol=1e-12)
        assert_allclose(derivs.sum(axis=1), 0.0, atol=1e-9)

    def test_lagrange_eval_one_based(self):
        basis = make_basis(BasisFamily.lagrange(), 2)
        assert lagrange_eval(basis, 1, -1.0)[0] == pytest.approx(1.0)
        assert lagrange_eval(basis, 2, 0.0)[0] == pytest.approx(1.0)
        assert lagrange_eval(basis, 3, 1.0)[0] == pytest.approx(1.0)

    def test_lagrange_eval_rejects_hierarchic(self):
        with pytest.raises(BasisError):
            lagrange_eval(make_basis(BasisFamily.hierarchic(), 3), 1, 0.0)


class TestHierarchicBasis:
    def test_first_mode_closed_form(self, samples):
        basis = make_basis(BasisFamily.hierarchic(), 4)
        value, deriv = hierarchic_eval(basis, 2, samples)
        assert_allclose(value, 1.5 * (samples ** 2 - 1.0) / math.sqrt(6.0), atol=1e-14)
        assert_allclose(deriv, math.sqrt(1.5) * samples, atol=1e-14)

    @pytest.mark.parametrize("p", ORDERS)
    def test_modes_vanish_at_endpoints(self, p):
        values, _ = make_basis(BasisFamily.hierarchic(), p).tabulate([-1.0, 1.0])
        assert_allclose(values[:, 0], [1.0, 0.0], atol=1e-15)
        assert_allclose(values[:, -1], [0.0, 1.0], atol=1e-15)
        assert_allclose(values[:, 1:-1], 0.0, atol=1e-14)

    def test_hierarchy(self, samples):
        low, _ = make_basis(BasisFamily.hierarchic(), 3).tabulate(samples)
        high, _ = make_basis(BasisFamily.hierarchic(), 6).tabulate(samples)
        assert_allclose(high[:, 1:3], low[:, 1:3], atol=1e-14)

    def test_hierarchic_eval_rejects_lagrange(self):
        with pytest.raises(BasisError):
            hierarchic_eval(make_basis(BasisFamily.lagrange(), 3), 2, 0.0)


@pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.code + str(f.distribution))
@pytest.mark.parametrize("p", [1, 3, 6])
def test_derivatives_match_finite_differences(family, p):
    basis = make_basis(family, p)
    x = np.linspace(-0.9, 0.9, 11)
    h = 1e-6
    _, derivs = basis.tabulate(x)
    plus, _ = basis.tabulate(x + h)
    minus, _ = basis.tabulate(x - h)
    assert_allclose(derivs, (plus - minus) / (2.0 * h), atol=1e-6)


class TestArguments:
    def test_index_out_of_range(self):
        basis = make_basis(BasisFamily.lagrange(), 3)
        with pytest.raises(BasisError):
            basis.eval(0, 0.0)
        with pytest.raises(BasisError):
            basis.eval(5, 0.0)

    def test_point_outside_domain(self):
        with pytest.raises(BasisError):
            make_basis(BasisFamily.hierarchic(), 2).eval(1, -1.01)

    def test_family_codes(self):
        assert BasisFamily.from_code('La').is_lagrange
        assert not BasisFamily.from_code('Le').is_lagrange
        with pytest.raises(BasisError):
            BasisFamily.from_code('Xx')

    def test_family_dict(self):
        family = BasisFamily.lagrange(NodeDistribution.GLC)
        assert BasisFamily.from_dict(family.to_dict()) == family
