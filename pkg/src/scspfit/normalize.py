"""Amplitude normalization of derivative-like filters and DC compensation of
smoothing-like filters."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .exceptions import DegenerateError
from .kernels import Family, FilterGrid
from .measures import moments, respond_to_monomial, spread
from .optim import scan_golden


class NormKind(Enum):
    DERIV_X = "DerivX"
    DERIV_Y = "DerivY"
    DERIV_XY = "DerivXY"
    DC_UNIT = "DcUnit"


@dataclass(frozen=True)
class NormalizedFilter:
    grid: FilterGrid
    kind: NormKind
    scale_applied: float
    dc_constant: float = 0.0


def normalize_derivative(h: FilterGrid, axis: str) -> NormalizedFilter:
    """Rescale h so its response to the matched shift-adjusted linear monomial is 1.

    The shift is the unweighted mean of |h|. The divisor keeps its sign, so
    filters of reversed polarity come out with flipped contrast.
    """
    axis = axis.upper()
    if axis not in ("X", "Y"):
        raise ValueError(f"axis must be 'X' or 'Y', got {axis!r}")
    offset = spread(h).mean
    a, b = (1, 0) if axis == "X" else (0, 1)
    r = respond_to_monomial(h, a, b, offset)
    if abs(r) <= 1e-9:
        raise DegenerateError(
            f"response to the {axis.lower()}-monomial is {r:g}; filter is not derivative-like along {axis}")
    kind = NormKind.DERIV_X if axis == "X" else NormKind.DERIV_Y
    return NormalizedFilter(FilterGrid(h.values / r), kind, r)


def normalize_mixed(h: FilterGrid) -> NormalizedFilter:
    """Rescale h to unit response to the shift-adjusted product monomial x*y."""
    r = respond_to_monomial(h, 1, 1, spread(h).mean)
    if abs(r) <= 1e-9:
        raise DegenerateError(f"response to the xy-monomial is {r:g}; filter is not a mixed derivative")
    return NormalizedFilter(FilterGrid(h.values / r), NormKind.DERIV_XY, r)


def det_spread(values: np.ndarray, x: np.ndarray, y: np.ndarray, c: float) -> float:
    return float(np.linalg.det(moments(np.abs(values - c), x, y).cov))


def _det_spread_slope(values, x, y, c) -> float:
    """d/dC of det V(|h - C|) inside a smooth piece (no coefficient equal to C)."""
    w = np.abs(values - c)
    dw = -np.sign(values - c)
    s0, ds0 = w.sum(), dw.sum()
    s1 = np.array([(w * x).sum(), (w * y).sum()])
    ds1 = np.array([(dw * x).sum(), (dw * y).sum()])
    s2 = np.array([[(w * x * x).sum(), (w * x * y).sum()],
                   [(w * x * y).sum(), (w * y * y).sum()]])
    ds2 = np.array([[(dw * x * x).sum(), (dw * x * y).sum()],
                    [(dw * x * y).sum(), (dw * y * y).sum()]])
    v = s2 / s0 - np.outer(s1, s1) / s0 ** 2
    dv = (ds2 / s0 - s2 * ds0 / s0 ** 2
          - (np.outer(ds1, s1) + np.outer(s1, ds1)) / s0 ** 2
          + 2 * np.outer(s1, s1) * ds0 / s0 ** 3)
    return float(dv[0, 0] * v[1, 1] + v[0, 0] * dv[1, 1] - 2 * v[0, 1] * dv[0, 1])


def find_dc_constant(h: FilterGrid, tol: float = 1e-7, n_scan: int = 33) -> float:
    """Constant C in [min h, max h] minimizing det V(|h - C|).

    A scan plus golden-section search locates the minimum to ``tol``; the
    result is then polished either onto a kink (a coefficient value) or onto
    the root of the analytic slope, whichever gives the lower objective.
    """
    vals = h.values
    lo, hi = float(vals.min()), float(vals.max())
    if not hi > lo:
        raise DegenerateError("cannot DC-compensate a constant filter")
    x, y = h.coords()

    def f(c):
        try:
            return det_spread(vals, x, y, c)
        except DegenerateError:
            return np.inf

    c, fc, a, b, _ = scan_golden(f, lo, hi, tol, n_scan)
    a, b = max(lo, c - 2 * tol), min(hi, c + 2 * tol)
    candidates = [c]
    flat = vals.ravel()
    candidates += [float(v) for v in flat[(flat >= a) & (flat <= b)]]
    # slope root inside the piece that holds the bracket, if the bracket is kink-free
    if not np.any((flat > a) & (flat < b)):
        try:
            ga, gb = _det_spread_slope(vals, x, y, a), _det_spread_slope(vals, x, y, b)
            if ga < 0 < gb:
                candidates.append(brentq(lambda t: _det_spread_slope(vals, x, y, t), a, b, xtol=1e-16))
        except DegenerateError:
            pass
    fvals = [f(t) for t in candidates]
    return float(candidates[int(np.argmin(fvals))])


def dc_compensate(h: FilterGrid) -> NormalizedFilter:
    """Subtract the spread-minimizing constant, then rescale to unit DC response."""
    c = find_dc_constant(h)
    shifted = h.values - c
    dc = float(shifted.sum())
    if abs(dc) < 1e-9:
        raise DegenerateError(f"DC response after compensation is {dc:g}")
    return NormalizedFilter(FilterGrid(shifted / dc), NormKind.DC_UNIT, dc, c)


def normalize_for_family(h: FilterGrid, family) -> NormalizedFilter:
    """Normalization matching the role of a master filter (1-9)."""
    family = Family(family)
    if family in (Family.DxMinus, Family.DxPlus, Family.DxCentered):
        return normalize_derivative(h, "X")
    if family in (Family.DyPlus, Family.DyMinus, Family.DyCentered):
        return normalize_derivative(h, "Y")
    if family in (Family.Sharpen, Family.Smooth):
        return dc_compensate(h)
    return normalize_mixed(h)
