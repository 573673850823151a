"""Finite-difference equilibrium oracle"""

from typing import Callable, Optional

import numpy as np

FD_STEP = 1e-5


def divergence_residual(stress: Callable[[np.ndarray], np.ndarray], points,
                        bbox: Optional[float] = None) -> float:
    """Largest |div sigma| over the sample points

    Central differences with step 1e-5 times the bounding-box size.

    Args:
        stress: Function of points (n, 2) returning (sx, sy, txy) rows
        points: Sample points (n, 2)
        bbox: Model size; the extent of the samples when omitted
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if bbox is None:
        bbox = float(np.hypot(*np.ptp(pts, axis=0))) if len(pts) > 1 else 1.0
    h = FD_STEP * (bbox or 1.0)
    dx = np.array([h, 0.0])
    dy = np.array([0.0, h])
    ds_dx = (stress(pts + dx) - stress(pts - dx)) / (2.0 * h)
    ds_dy = (stress(pts + dy) - stress(pts - dy)) / (2.0 * h)
    div_x = ds_dx[:, 0] + ds_dy[:, 2]
    div_y = ds_dx[:, 2] + ds_dy[:, 1]
    return float(np.max(np.hypot(div_x, div_y)))
