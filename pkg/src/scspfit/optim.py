"""Derivative-free minimizers used by the normalization and fitting stages."""
from __future__ import annotations

import math
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.optimize import minimize

INV_PHI = (math.sqrt(5) - 1) / 2


class Bounds1D(NamedTuple):
    lo: float = 0.0
    hi: float = 3.0
    tol: float = 1e-6

    def check(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")


class OptResult(NamedTuple):
    x: np.ndarray | float
    fun: float
    nfev: int
    converged: bool


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float):
    """Golden-section search on [lo, hi] until the bracket is narrower than tol.

    Returns ``(x, fx, a, b, nfev)`` where [a, b] is the final bracket.
    """
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    nfev = 2
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        nfev += 1
    if fc <= fd:
        return c, fc, a, b, nfev
    return d, fd, a, b, nfev


def scan_golden(f: Callable[[float], float], lo: float, hi: float, tol: float,
                n_scan: int = 33):
    """Coarse scan on an even grid, then golden-section refinement around the best node.

    The scan makes the search robust to the kinks of piecewise-smooth
    objectives; the refinement only ever looks inside one scan cell on either
    side of the best node. Returns ``(x, fx, a, b, nfev)``.
    """
    grid = np.linspace(lo, hi, n_scan)
    vals = np.array([f(float(g)) for g in grid])
    i = int(np.argmin(vals))
    a = float(grid[max(i - 1, 0)])
    b = float(grid[min(i + 1, n_scan - 1)])
    x, fx, a, b, nfev = golden_section(f, a, b, tol)
    nfev += n_scan
    # a boundary node can beat the interior probes of the refinement
    for g, v in ((grid[i], vals[i]), (lo, vals[0]), (hi, vals[-1])):
        if v < fx:
            x, fx = float(g), float(v)
    return x, fx, a, b, nfev


def nelder_mead_multistart(f: Callable[[np.ndarray], float],
                           seeds: Sequence[Sequence[float]],
                           bounds: Sequence[tuple[float, float]],
                           n_starts: int = 5,
                           maxfev: int = 2000,
                           xatol: float = 1e-8,
                           fatol: float = 1e-13) -> OptResult:
    """Bounded Nelder-Mead from the best ``n_starts`` of a deterministic seed set.

    The best local result is restarted once from its own location to shake
    off a collapsed simplex.
    """
    seeds = [np.asarray(s, dtype=float) for s in seeds]
    seed_vals = [f(s) for s in seeds]
    order = np.argsort(seed_vals, kind="stable")[:n_starts]
    nfev = len(seeds)
    best = None
    converged_all = True
    opts = {"maxfev": maxfev, "xatol": xatol, "fatol": fatol}
    for j in order:
        res = minimize(f, seeds[j], method="Nelder-Mead", bounds=bounds, options=opts)
        nfev += res.nfev
        if best is None or res.fun < best.fun:
            best = res
    res = minimize(f, best.x, method="Nelder-Mead", bounds=bounds, options=opts)
    nfev += res.nfev
    if res.fun <= best.fun:
        best = res
    converged_all = bool(best.success)
    return OptResult(np.asarray(best.x, dtype=float), float(best.fun), nfev, converged_all)
