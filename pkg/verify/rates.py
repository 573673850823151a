"""Convergence rates with respect to the number of DOFs"""

import logging
from typing import List, Optional, Tuple

import numpy as np

from models.study import StudyResult
from utils.errors import StudyError

logger = logging.getLogger(__name__)

ROUNDOFF_FLOOR = 1e-11


def theoretical_rate(p_min: int) -> float:
    """Optimal rate -(p_min + 1) / 2 of a smooth 2D problem"""
    return -(p_min + 1) / 2.0


def two_point_rate(n1: float, e1: float, n2: float, e2: float) -> float:
    return float(np.log10(e2 / e1) / np.log10(n2 / n1))


def convergence_rate(series: StudyResult, window: Optional[Tuple[int, int]] = None,
                     floor: float = ROUNDOFF_FLOOR) -> Tuple[List[float], float]:
    """Two-point rates and least-squares slope of log(error) over log(n_DOF)

    Rows with error below the round-off floor are dropped before fitting.
    The result is also stored on the series.

    Args:
        series: Study rows ordered by increasing n_DOF
        window: Optional (start, stop) row slice to fit

    Raises:
        StudyError: fewer than two usable rows
    """
    rows = series.rows if window is None else series.rows[window[0]:window[1]]
    usable = [r for r in rows if r.error >= floor]
    if len(usable) < len(rows):
        logger.warning("%s: %d rows below the round-off floor %.0e excluded",
                       series.label or 'study', len(rows) - len(usable), floor)
    if len(usable) < 2:
        raise StudyError(f"need at least two usable rows, got {len(usable)}")
    rates = [two_point_rate(a.n_dof, a.error, b.n_dof, b.error) for a, b in zip(usable, usable[1:])]
    log_n = np.log10([r.n_dof for r in usable])
    log_e = np.log10([r.error for r in usable])
    slope = float(np.polyfit(log_n, log_e, 1)[0])
    series.rates = rates
    series.slope = slope
    logger.info("%s: slope %.4f", series.label or 'study', slope)
    return rates, slope
