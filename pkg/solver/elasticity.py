"""Plane linear elasticity on transition elements"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from elements.blending import TransitionShapeSet
from meshing.mapping import physical_gradients
from models.material import Material, StressState


@dataclass
class ElementMatrices:
    """Element stiffness (interleaved u_x, u_y per function) and load vector"""
    K: np.ndarray
    f: np.ndarray


def material_matrix(material: Material) -> np.ndarray:
    """Constitutive matrix in Voigt order (sx, sy, txy) vs (ex, ey, gxy)"""
    E, nu = material.E, material.nu
    if material.state == StressState.PLANE_STRESS:
        c = E / (1.0 - nu * nu)
        return c * np.array([[1.0, nu, 0.0],
                             [nu, 1.0, 0.0],
                             [0.0, 0.0, 0.5 * (1.0 - nu)]])
    c = E / ((1.0 + nu) * (1.0 - 2.0 * nu))
    return c * np.array([[1.0 - nu, nu, 0.0],
                         [nu, 1.0 - nu, 0.0],
                         [0.0, 0.0, 0.5 - nu]])


def stiffness_from_gradients(gx: np.ndarray, gy: np.ndarray, omega: np.ndarray,
                             D: np.ndarray) -> np.ndarray:
    """Assemble the interleaved stiffness from scalar gradient tables

    gx, gy have shape (n_points, n_functions); omega holds weight * detJ.
    """
    wx = gx * omega[:, None]
    wy = gy * omega[:, None]
    a_xx = gx.T @ wx
    a_xy = wx.T @ gy
    a_yx = a_xy.T
    a_yy = gy.T @ wy
    k_xx = D[0, 0] * a_xx + D[0, 2] * a_xy + D[2, 0] * a_yx + D[2, 2] * a_yy
    k_xy = D[0, 1] * a_xy + D[0, 2] * a_xx + D[2, 1] * a_yy + D[2, 2] * a_yx
    k_yy = D[1, 1] * a_yy + D[1, 2] * a_yx + D[2, 1] * a_xy + D[2, 2] * a_xx
    n = gx.shape[1]
    K = np.empty((2 * n, 2 * n))
    K[0::2, 0::2] = k_xx
    K[0::2, 1::2] = k_xy
    K[1::2, 0::2] = k_xy.T
    K[1::2, 1::2] = k_yy
    return K


def element_stiffness(coords: np.ndarray, shape_set: TransitionShapeSet, material: Material,
                      n_per_dir: Optional[int] = None, element: int = -1) -> ElementMatrices:
    """Stiffness of one element by composite quadrature over its subdomain grid

    Args:
        coords: (4, 2) vertex coordinates, counter-clockwise
        shape_set: Element shape functions
        material: Material
        n_per_dir: Gauss points per direction and cell (default max order + 1)
        element: Element index used in error messages

    Raises:
        GeometryError: non-positive Jacobian at a quadrature point
    """
    rule, _, dxi, deta = shape_set.quadrature_table(n_per_dir)
    gx, gy, det = physical_gradients(coords, rule.xi, rule.eta, dxi, deta, element)
    K = stiffness_from_gradients(gx, gy, rule.weights * det, material_matrix(material))
    return ElementMatrices(K, np.zeros(K.shape[0]))


def default_stress_points(shape_set: TransitionShapeSet) -> Tuple[np.ndarray, np.ndarray]:
    """Element nodes for spectral elements, a (p+1) x (p+1) equidistant grid otherwise"""
    basis = shape_set.interior
    if basis.family.is_lagrange:
        ticks = np.asarray(basis.nodes)
    else:
        ticks = np.linspace(-1.0, 1.0, basis.order + 1)
    xi, eta = np.meshgrid(ticks, ticks, indexing='xy')
    return xi.ravel(), eta.ravel()


def strain_matrix_apply(gx: np.ndarray, gy: np.ndarray, u_e: np.ndarray) -> np.ndarray:
    """Strains (ex, ey, gxy) at every point from interleaved coefficients"""
    ux, uy = u_e[0::2], u_e[1::2]
    return np.column_stack([gx @ ux, gy @ uy, gy @ ux + gx @ uy])


def element_stress(u_e: np.ndarray, shape_set: TransitionShapeSet, coords: np.ndarray,
                   material: Material, points: Optional[Sequence] = None,
                   element: int = -1) -> np.ndarray:
    """Stresses (sx, sy, txy) at reference points of one element

    Args:
        u_e: Local interleaved coefficients (orientation signs applied)
        points: (xi, eta) arrays; default_stress_points when omitted

    Returns:
        Array of shape (n_points, 3)
    """
    if points is None:
        xi, eta = default_stress_points(shape_set)
    else:
        xi = np.atleast_1d(np.asarray(points[0], dtype=float))
        eta = np.atleast_1d(np.asarray(points[1], dtype=float))
    _, dxi, deta = shape_set.tabulate(xi, eta)
    gx, gy, _ = physical_gradients(coords, xi, eta, dxi, deta, element)
    return strain_matrix_apply(gx, gy, u_e) @ material_matrix(material).T
