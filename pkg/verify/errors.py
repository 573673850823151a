"""Error measures: mean relative stress error, relative L2 and energy errors"""

import logging
from typing import Callable, Tuple

import numpy as np

from solver.solution import Solution
from utils.errors import EnergyError, NormError

logger = logging.getLogger(__name__)

SMALL_REFERENCE = 1e-8
RADICAND_TOL = 1e-12


def mean_relative_error(computed: np.ndarray, reference: np.ndarray) -> Tuple[float, np.ndarray]:
    """Mean of |computed - reference| / |reference| over points and components

    Reference entries smaller than 1e-8 times the largest reference magnitude
    are normalised by that largest magnitude instead.

    Returns:
        (overall mean, per-component means)
    """
    computed = np.atleast_2d(np.asarray(computed, dtype=float))
    reference = np.atleast_2d(np.asarray(reference, dtype=float))
    scale = float(np.max(np.abs(reference))) if reference.size else 0.0
    if scale == 0.0:
        raise NormError("reference values are all zero")
    denom = np.abs(reference)
    denom = np.where(denom < SMALL_REFERENCE * scale, scale, denom)
    rel = np.abs(computed - reference) / denom
    return float(rel.mean()), rel.mean(axis=0)


def l2_error(solution: Solution, exact: Callable[[np.ndarray], np.ndarray], extra: int = 3) -> float:
    """Relative L2 displacement error ||u_ex - u_h|| / ||u_ex||

    Element-wise composite Gauss quadrature of order max_order + extra.

    Raises:
        NormError: exact field has zero norm
    """
    err2 = 0.0
    ref2 = 0.0
    for e in range(solution.mesh.n_quads):
        points, omega, u_h = solution.quadrature(e, extra)
        u_ex = np.asarray(exact(points), dtype=float)
        err2 += float(omega @ np.sum((u_ex - u_h) ** 2, axis=1))
        ref2 += float(omega @ np.sum(u_ex ** 2, axis=1))
    if ref2 <= 0.0:
        raise NormError("exact displacement field has zero L2 norm")
    return float(np.sqrt(err2 / ref2))


def relative_energy_error(energy_num: float, energy_ref: float) -> float:
    """sqrt((U_ref - U_num) / U_ref)

    Raises:
        NormError: zero reference energy
        EnergyError: radicand below -1e-12 (reference not converged)
    """
    if energy_ref == 0.0:
        raise NormError("reference strain energy is zero")
    radicand = (energy_ref - energy_num) / energy_ref
    if radicand < -RADICAND_TOL:
        raise EnergyError(f"energy radicand {radicand:.3e} is negative: reference not converged")
    if radicand < 0.0:
        logger.warning("clamping energy radicand %.3e to zero", radicand)
        radicand = 0.0
    return float(np.sqrt(radicand))


def energy_error(u_num: np.ndarray, K, u_ref: np.ndarray, K_ref) -> float:
    """Relative energy-norm error of u_num against a reference solution

    Both energies are total strain energies, so the vectors may live on
    different meshes.
    """
    energy_num = float(u_num @ (K @ u_num))
    energy_ref = float(u_ref @ (K_ref @ u_ref))
    return relative_energy_error(energy_num, energy_ref)
