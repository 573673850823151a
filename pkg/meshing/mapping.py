"""Bilinear geometry map of straight-sided quadrilaterals"""

from typing import Tuple

import numpy as np

from utils.errors import GeometryError

NEWTON_TOL = 1e-13
NEWTON_MAX_ITER = 50


def q4_shapes(xi, eta) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Bilinear vertex functions and their reference derivatives, shape (n, 4)"""
    xi = np.atleast_1d(np.asarray(xi, dtype=float)).ravel()
    eta = np.atleast_1d(np.asarray(eta, dtype=float)).ravel()
    values = 0.25 * np.column_stack([
        (1 - xi) * (1 - eta), (1 + xi) * (1 - eta), (1 + xi) * (1 + eta), (1 - xi) * (1 + eta)
    ])
    dxi = 0.25 * np.column_stack([-(1 - eta), (1 - eta), (1 + eta), -(1 + eta)])
    deta = 0.25 * np.column_stack([-(1 - xi), -(1 + xi), (1 + xi), (1 - xi)])
    return values, dxi, deta


def map_points(coords: np.ndarray, xi, eta) -> np.ndarray:
    """Physical coordinates (n, 2) of reference points"""
    values, _, _ = q4_shapes(xi, eta)
    return values @ coords


def jacobian(coords: np.ndarray, xi, eta) -> Tuple[np.ndarray, np.ndarray]:
    """Jacobian J[:, a, b] = d(x_b)/d(xi_a) and its determinant at each point"""
    _, dxi, deta = q4_shapes(xi, eta)
    jac = np.empty((dxi.shape[0], 2, 2))
    jac[:, 0, :] = dxi @ coords
    jac[:, 1, :] = deta @ coords
    det = jac[:, 0, 0] * jac[:, 1, 1] - jac[:, 0, 1] * jac[:, 1, 0]
    return jac, det


def physical_gradients(coords: np.ndarray, xi: np.ndarray, eta: np.ndarray,
                       dn_dxi: np.ndarray, dn_deta: np.ndarray,
                       element: int = -1) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Push reference gradients of shape functions to x and y

    Raises:
        GeometryError: if the Jacobian is not positive at some point

    Returns:
        (dN/dx, dN/dy, detJ)
    """
    jac, det = jacobian(coords, xi, eta)
    bad = np.flatnonzero(det <= 0.0)
    if bad.size:
        k = bad[0]
        raise GeometryError(element, (float(xi[k]), float(eta[k])), float(det[k]))
    inv_det = 1.0 / det
    # inverse of [[a, b], [c, d]] is [[d, -b], [-c, a]] / det
    gx = (jac[:, 1, 1] * inv_det)[:, None] * dn_dxi - (jac[:, 0, 1] * inv_det)[:, None] * dn_deta
    gy = -(jac[:, 1, 0] * inv_det)[:, None] * dn_dxi + (jac[:, 0, 0] * inv_det)[:, None] * dn_deta
    return gx, gy, det


def inverse_map(coords: np.ndarray, point) -> Tuple[float, float]:
    """Reference coordinates of a physical point (Newton iteration)

    The result may lie outside the reference square if the point is outside
    the element.
    """
    target = np.asarray(point, dtype=float)
    ref = np.zeros(2)
    scale = max(np.ptp(coords[:, 0]), np.ptp(coords[:, 1]), 1e-300)
    for _ in range(NEWTON_MAX_ITER):
        residual = map_points(coords, ref[0], ref[1])[0] - target
        if np.linalg.norm(residual) <= NEWTON_TOL * scale:
            break
        jac, _ = jacobian(coords, ref[0], ref[1])
        ref -= np.linalg.solve(jac[0].T, residual)
    return float(ref[0]), float(ref[1])


def contains(coords: np.ndarray, point, tol: float = 1e-10) -> bool:
    """True if the point lies in the closed element (reference tolerance)"""
    xi, eta = inverse_map(coords, point)
    return abs(xi) <= 1.0 + tol and abs(eta) <= 1.0 + tol
