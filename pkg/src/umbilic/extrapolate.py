"""Convergence-order and Richardson helpers for step-halving sequences."""
from __future__ import annotations

import math

import numpy as np

__all__ = ["observed_order", "richardson", "richardson_table"]


def observed_order(err_coarse: float, err_fine: float, floor: float = 0.0) -> float:
    """``log2(err_coarse / err_fine)`` for a halved step.

    Returns ``inf`` when both errors sit at or below ``floor`` (the estimate is
    exact to working precision, so no order can be measured).
    """
    err_coarse, err_fine = abs(err_coarse), abs(err_fine)
    if err_coarse <= floor and err_fine <= floor:
        return math.inf
    if err_fine == 0.0:
        return math.inf
    if err_coarse == 0.0:
        return -math.inf
    return math.log2(err_coarse / err_fine)


def richardson(coarse, fine, power: int):
    """Eliminate the ``h**power`` term from values at ``h`` and ``h/2``."""
    m = 2.0**power
    return (m * np.asarray(fine) - np.asarray(coarse)) / (m - 1)


def richardson_table(values, powers=(2, 4)) -> list[np.ndarray]:
    """Successive Richardson columns for values at ``h_j = h_0 2^-j``.

    ``table[0]`` is the raw sequence; ``table[i]`` has the first ``i``
    entries of ``powers`` eliminated and is one entry shorter than
    ``table[i-1]``.
    """
    cols = [np.asarray(values, dtype=float)]
    for p in powers:
        prev = cols[-1]
        if prev.size < 2:
            break
        cols.append(richardson(prev[:-1], prev[1:], p))
    return cols
