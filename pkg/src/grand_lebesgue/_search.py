"""Grid scan followed by golden-section polish around the best grid point."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_MAX_ITER = 400


def golden_max(fun: Callable[[float], float], a: float, b: float,
               rel_tol: float) -> tuple[float, float]:
    """Best point found by golden-section search for a maximum on ``[a, b]``.

    Stops once the bracket is narrower than ``rel_tol * b``. The return value
    is the best evaluated point, not the bracket middle.
    """
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = fun(c), fun(d)
    best = (c, fc) if fc >= fd else (d, fd)
    for _ in range(_MAX_ITER):
        if b - a <= rel_tol * abs(b):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = fun(c)
            if fc > best[1]:
                best = (c, fc)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = fun(d)
            if fd > best[1]:
                best = (d, fd)
    return best


def refine_max(fun: Callable[[float], float], grid: np.ndarray,
               values: np.ndarray, rel_tol: float) -> tuple[int, float, float]:
    """Return ``(grid_argmax, eps_star, value_star)`` with ``value_star >= max(values)``.

    Ties go to the first index so that the scan order fixes the result.
    """
    i = int(np.argmax(values))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    best_eps, best_val = float(grid[i]), float(values[i])
    if hi > lo:
        e, v = golden_max(fun, float(lo), float(hi), rel_tol)
        if v > best_val:
            best_eps, best_val = e, v
    return i, best_eps, best_val
