"""Tests for mesh mapping, coupling discovery, refinement, mesh files and DOF numbering"""

import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from basis.polybasis import BasisFamily
from meshing.coupling import classify, discover_couplings
from meshing.dofmap import build_dof_map
from meshing.geometries import builtin_geometry, builtin_names
from meshing.io import load_mesh, save_mesh
from meshing.mapping import contains, inverse_map, jacobian, map_points
from meshing.refinement import merge_vertices, refine_y_region, subdivide_quad, uniform_refine
from models.mesh import ElementClass, Mesh, RefineParams, Region
from utils.errors import (
    ConfigError, DuplicateVertexError, MeshConsistencyError, MeshError, MeshParseError,
    OrientationError
)
from verify.conformity import interface_jump

SKEW = np.array([[0.0, 0.0], [2.0, 0.2], [2.3, 1.9], [-0.2, 1.5]])


@pytest.fixture
def two_quad():
    mesh, _ = builtin_geometry('two-quad')
    return mesh


def hanging_mesh(dx: float = 0.0, dy: float = 0.0) -> Mesh:
    """x unit square next to two stacked y rectangles; (dx, dy) moves the hanging vertex"""
    vertices = [(0, 0), (1, 0), (1, 1), (0, 1), (2, 0), (2, 0.5), (1 + dx, 0.5 + dy), (2, 1)]
    quads = [(0, 1, 2, 3), (1, 4, 5, 6), (6, 5, 7, 2)]
    return Mesh(np.array(vertices, dtype=float), np.array(quads), ['x', 'y', 'y'])


# =============================================================================
# Geometry map
# =============================================================================


class TestMapping:
    def test_corners(self):
        mapped = map_points(SKEW, [-1, 1, 1, -1], [-1, -1, 1, 1])
        assert_allclose(mapped, SKEW, atol=1e-15)

    def test_unit_square_jacobian(self):
        square = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
        jac, det = jacobian(square, [0.3], [-0.4])
        assert_allclose(jac[0], 0.5 * np.eye(2))
        assert det[0] == pytest.approx(0.25)

    def test_inverse_map(self):
        point = map_points(SKEW, [0.37], [-0.61])[0]
        xi, eta = inverse_map(SKEW, point)
        assert xi == pytest.approx(0.37, abs=1e-12)
        assert eta == pytest.approx(-0.61, abs=1e-12)

    def test_contains(self):
        assert contains(SKEW, map_points(SKEW, [0.99], [0.99])[0])
        assert not contains(SKEW, (3.0, 3.0))


# =============================================================================
# Coupling discovery and classification
# =============================================================================


class TestCoupling:
    def test_conforming_pair(self, two_quad):
        couplings = discover_couplings(two_quad)
        assert len(couplings.atomic_edges()) == 7
        assert len(couplings.boundary_edges()) == 6
        assert couplings.coupled_edges() == []
        assert couplings.neighbours(0) == {1}
        assert two_quad.census() == {'X': 0, 'Y': 1, 'XNY': 1, 'YNY': 0}

    def test_hanging_vertex(self):
        mesh = hanging_mesh()
        couplings = discover_couplings(mesh)
        layout = couplings.layout(0, 1)
        assert layout.vertices == (1, 6, 2)
        assert_allclose(layout.breaks, (-1.0, 0.0, 1.0))
        assert couplings.coupled_edges() == [(0, 1)]
        assert couplings.neighbours(0) == {1, 2}
        assert [c.value for c in classify(mesh).element_class] == ['XNY', 'Y', 'Y']

    def test_tjunction_mismatch(self):
        with pytest.raises(MeshConsistencyError, match="T-junction"):
            discover_couplings(hanging_mesh(dx=1e-8))

    def test_hanging_vertex_moved_along_edge(self):
        layout = discover_couplings(hanging_mesh(dy=1e-8)).layout(0, 1)
        assert layout.vertices == (1, 6, 2)
        assert layout.breaks[1] == pytest.approx(2e-8, abs=1e-12)

    def test_edge_with_three_owners(self):
        vertices = [(0, 0), (1, 0), (1, 1), (0, 1), (2, 0), (2, 1), (0.5, -1), (1.5, -1)]
        # third quad folds back over the edge (1, 2)
        quads = [(0, 1, 2, 3), (1, 4, 5, 2), (6, 7, 2, 1)]
        mesh = Mesh(np.array(vertices, dtype=float), np.array(quads), ['x', 'y', 'y'])
        with pytest.raises(MeshConsistencyError):
            discover_couplings(mesh)


# =============================================================================
# Refinement
# =============================================================================


class TestRefinement:
    def test_subdivide_quad(self):
        points, children = subdivide_quad(SKEW, 3)
        assert points.shape == (16, 2)
        assert len(children) == 9
        assert_allclose(points[0], SKEW[0])
        assert_allclose(points[-1], SKEW[2])

    def test_merge_vertices(self):
        vertices = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [1.0, 1e-14]])
        quads = np.array([[0, 1, 3, 2]])
        merged, remapped = merge_vertices(vertices, quads, 1e-10)
        assert len(merged) == 2
        assert remapped.tolist() == [[0, 1, 1, 0]]

    def test_uniform_refine(self, two_quad):
        refined = uniform_refine(two_quad)
        assert refined.n_quads == 8
        assert refined.n_vertices == 15
        assert refined.census() == {'X': 2, 'Y': 4, 'XNY': 2, 'YNY': 0}

    def test_band_refinement_census(self, two_quad):
        refined = refine_y_region(two_quad, RefineParams(n_y=2, n_s=2))
        assert refined.census() == {'X': 0, 'Y': 8, 'XNY': 1, 'YNY': 2}
        couplings = discover_couplings(refined)
        assert couplings.layout(0, 1).n_segments == 4

    @pytest.mark.parametrize("n_y", [1, 2, 3, 4])
    def test_segments_per_pass(self, two_quad, n_y):
        refined = refine_y_region(two_quad, RefineParams(n_y=n_y, n_s=1))
        assert refined.n_quads == 1 + n_y * n_y
        assert discover_couplings(refined).layout(0, 1).n_segments == n_y

    def test_refined_area_preserved(self):
        mesh, _ = builtin_geometry('bathe-patch')
        refined = refine_y_region(mesh, RefineParams(n_y=3, n_s=2))

        def area(m):
            total = 0.0
            for q in m.quads:
                x, y = m.vertices[q, 0], m.vertices[q, 1]
                total += 0.5 * (np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))
            return total
        assert area(refined) == pytest.approx(area(mesh))

    def test_focus_refinement(self):
        mesh, spec = builtin_geometry('l-domain')
        refined = refine_y_region(mesh, RefineParams(n_y=2, n_s=3, focus=spec.focus))
        assert refined.n_quads == mesh.n_quads + 3 * 3 * 3
        corner = np.asarray(spec.focus[0])
        smallest = min(
            np.ptp(refined.element_coords(e)[:, 0])
            for e in range(refined.n_quads)
            if np.any(np.all(np.isclose(refined.element_coords(e), corner), axis=1))
        )
        assert smallest == pytest.approx(5.0 / 8.0)

    def test_nothing_to_refine(self):
        mesh = Mesh(np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float),
                    np.array([[0, 1, 2, 3]]), ['x'])
        with pytest.raises(MeshError):
            refine_y_region(mesh, RefineParams())

    @pytest.mark.parametrize("kwargs", [{'n_y': 0}, {'n_y': 5}, {'n_s': 0}, {'n_s': 9}])
    def test_refine_params_range(self, kwargs):
        with pytest.raises(ConfigError):
            RefineParams(**kwargs)


# =============================================================================
# Mesh files
# =============================================================================


class TestMeshFile:
    def test_save_and_load(self, two_quad):
        loaded = load_mesh(save_mesh(two_quad))
        assert_allclose(loaded.vertices, two_quad.vertices, rtol=0, atol=0)
        assert loaded.quads.tolist() == two_quad.quads.tolist()
        assert loaded.region == [Region.X, Region.Y]
        assert loaded.element_class == [ElementClass.XNY, ElementClass.Y]

    def test_syntax_error_line(self):
        text = '{\n  "vertices": [[0, 0],\n  [1, 0]\n  "quads": []\n}'
        with pytest.raises(MeshParseError) as info:
            load_mesh(text)
        assert info.value.line == 4

    def test_bad_region_tag_line(self, two_quad):
        data = two_quad.to_dict()
        data['region'] = ['x', 'z']
        with pytest.raises(MeshParseError, match="region tag 1"):
            load_mesh(json.dumps(data))

    def test_missing_key(self):
        with pytest.raises(MeshParseError, match="quads"):
            load_mesh('{"vertices": [], "region": []}')

    def test_vertex_id_out_of_range(self):
        text = json.dumps({'vertices': [[0, 0], [1, 0], [1, 1]], 'quads': [[0, 1, 2, 3]],
                           'region': ['x']})
        with pytest.raises(MeshParseError, match="quad 0"):
            load_mesh(text)

    def test_clockwise_quad(self):
        text = json.dumps({'vertices': [[0, 0], [1, 0], [1, 1], [0, 1]],
                           'quads': [[0, 3, 2, 1]], 'region': ['x']})
        with pytest.raises(OrientationError) as info:
            load_mesh(text)
        assert info.value.quad_index == 0

    def test_duplicate_vertex(self):
        text = json.dumps({'vertices': [[0, 0], [1, 0], [1, 1], [0, 1], [1, 1]],
                           'quads': [[0, 1, 2, 3]], 'region': ['x']})
        with pytest.raises(DuplicateVertexError):
            load_mesh(text)


# =============================================================================
# Built-in geometries
# =============================================================================


class TestGeometries:
    @pytest.mark.parametrize("name", builtin_names())
    def test_builtins_are_valid(self, name):
        mesh, spec = builtin_geometry(name)
        assert mesh.n_quads > 0
        assert len(mesh.region_elements(Region.Y)) > 0
        assert spec.description

    def test_bathe_patch(self):
        mesh, _ = builtin_geometry('bathe-patch')
        assert mesh.census() == {'X': 0, 'Y': 1, 'XNY': 4, 'YNY': 0}

    def test_hole_quadrant_scales(self):
        mesh, _ = builtin_geometry('hole-quadrant', a=2.0)
        assert_allclose(mesh.vertices.min(axis=0), [2.0, 0.0])
        assert_allclose(mesh.vertices.max(axis=0), [10.0, 4.0])

    def test_cantilever_is_reproducible(self):
        first, _ = builtin_geometry('cantilever')
        second, _ = builtin_geometry('cantilever')
        assert_allclose(first.vertices, second.vertices, rtol=0, atol=0)
        assert first.n_quads == 20

    def test_l_domain(self):
        mesh, spec = builtin_geometry('l-domain')
        assert mesh.n_quads == 12
        assert spec.focus == [(10.0, 10.0)]

    def test_unknown(self):
        with pytest.raises(ConfigError):
            builtin_geometry('sphere')


# =============================================================================
# DOF numbering
# =============================================================================


class TestDofMap:
    def test_counts_conforming(self, two_quad):
        dofmap = build_dof_map(two_quad, None, 2, 2)
        # 6 vertices + 7 edges + 2 bubbles
        assert dofmap.n_scalar == 15
        assert dofmap.n_dof == 30

    def test_vertices_first(self, two_quad):
        dofmap = build_dof_map(two_quad, None, 3, 3)
        assert sorted(dofmap.vertex_dof.values()) == list(range(6))
        first_edge = min(int(ids.min()) for ids in dofmap.edge_dofs.values())
        assert first_edge == 6
        assert min(int(b.min()) for b in dofmap.interior_dofs) > max(
            int(ids.max()) for ids in dofmap.edge_dofs.values())

    def test_shared_edge_ids(self, two_quad):
        dofmap = build_dof_map(two_quad, None, 3, 3)
        shared = set(dofmap.scalar_dofs[0]) & set(dofmap.scalar_dofs[1])
        # two vertices and two edge functions of the common edge
        assert len(shared) == 4

    def test_edge_takes_y_basis(self, two_quad):
        dofmap = build_dof_map(two_quad, None, 2, 5)
        assert dofmap.edge_basis[(1, 4)].order == 5
        assert dofmap.shape_sets[0].n_functions == 4 + 4 + 3 * 1 + 1

    @pytest.mark.parametrize("family", [BasisFamily.lagrange(), BasisFamily.hierarchic()])
    def test_reversed_edge_is_continuous(self, family):
        # second quad starts at its top-right corner, so the common edge runs downwards
        vertices = [(0, 0), (1, 0), (1, 1), (0, 1), (2, 0), (2, 1)]
        quads = [(0, 1, 2, 3), (5, 2, 1, 4)]
        mesh = classify(Mesh(np.array(vertices, dtype=float), np.array(quads), ['x', 'y']))
        dofmap = build_dof_map(mesh, None, 4, 4, family, family)
        assert interface_jump(mesh, dofmap, n_points=40, seed=3) < 1e-12

    @pytest.mark.parametrize("x_family,y_family", [
        (BasisFamily.lagrange(), BasisFamily.lagrange()),
        (BasisFamily.hierarchic(), BasisFamily.lagrange()),
        (BasisFamily.hierarchic(), BasisFamily.hierarchic()),
    ])
    def test_hanging_interface_is_continuous(self, two_quad, x_family, y_family):
        mesh = refine_y_region(two_quad, RefineParams(n_y=2, n_s=2))
        dofmap = build_dof_map(mesh, None, 6, 3, x_family, y_family)
        assert interface_jump(mesh, dofmap, n_points=60, seed=11) < 1e-11
