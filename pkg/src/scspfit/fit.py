"""Estimation of idealized-model parameters from normalized learned filters.

Six estimators are provided for the one-scale-pair families:

* ``A``  - weighted variances mapped through the closed forms for continuous
  Gaussian derivatives,
* ``B``  - weighted variances matched against those of the discrete model,
* ``C1``/``C2`` - l1 fit with separate / tied scales,
* ``D1``/``D2`` - l2 fit with separate / tied scales,

plus a joint (sigma, gamma) fit of the sharpening model in l1 or l2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from .kernels import Family, FilterGrid, IdealizedSpec, ideal_filter
from .measures import WeightSpec, moments, spread, weight_kernel
from .normalize import NormalizedFilter
from .optim import Bounds1D, nelder_mead_multistart, scan_golden

SEED_SCALES = (0.3, 0.7, 1.2)
DEFAULT_BOUNDS = Bounds1D(0.0, 3.0, 1e-6)
DEFAULT_GAMMA_BOUNDS = (0.0, 3.0)

_X_DERIVATIVE = {Family.DxMinus, Family.DxPlus, Family.DxCentered}
_Y_DERIVATIVE = {Family.DyPlus, Family.DyMinus, Family.DyCentered}
_VARIANCE_FAMILIES = _X_DERIVATIVE | _Y_DERIVATIVE | {Family.Smooth}

FilterLike = Union[NormalizedFilter, FilterGrid]


class Method(Enum):
    A = "A"
    B = "B"
    C1 = "C1"
    C2 = "C2"
    D1 = "D1"
    D2 = "D2"
    Sharpen7L1 = "S7L1"
    Sharpen7L2 = "S7L2"


class Norm(Enum):
    L1 = "L1"
    L2 = "L2"


@dataclass(frozen=True)
class FitResult:
    method: Method
    spec: IdealizedSpec
    residual_l1: float
    residual_l2: float
    objective_evals: int
    converged: bool

    @property
    def sigma_x(self) -> float:
        return self.spec.scales.sigma_x

    @property
    def sigma_y(self) -> float:
        return self.spec.scales.sigma_y


def _grid(h: FilterLike) -> FilterGrid:
    return h.grid if isinstance(h, NormalizedFilter) else h


def _result(method, spec, h: FilterGrid, nfev, converged) -> FitResult:
    diff = ideal_filter(spec, h.radius_x, h.radius_y).values - h.values
    return FitResult(Method(method), spec, float(np.abs(diff).sum()),
                     float(np.sqrt((diff ** 2).sum())), int(nfev), bool(converged))


def _check_family(family, allowed, method) -> Family:
    family = Family(family)
    if family not in allowed:
        raise ValueError(f"method {method} is not defined for family {family.name}")
    return family


def method_a_from_cov(cov, family) -> tuple[float, float]:
    """Scale estimates from a weighted variance matrix of a normalized filter.

    sigma = sqrt(2 v) along a smoothing axis and sqrt(2 v / 3) along the
    differentiated axis.
    """
    family = _check_family(family, _VARIANCE_FAMILIES, "A")
    vxx, vyy = float(cov[0][0]), float(cov[1][1])
    sx = math.sqrt(2 * vxx / 3) if family in _X_DERIVATIVE else math.sqrt(2 * vxx)
    sy = math.sqrt(2 * vyy / 3) if family in _Y_DERIVATIVE else math.sqrt(2 * vyy)
    return sx, sy


def method_a(h_norm: FilterLike, family, sigma0: float = 1.0) -> FitResult:
    family = _check_family(family, _VARIANCE_FAMILIES, "A")
    h = _grid(h_norm)
    cov = spread(h, WeightSpec.for_family(family, sigma0)).cov
    sx, sy = method_a_from_cov(cov, family)
    return _result(Method.A, IdealizedSpec(family, (sx, sy)), h, 1, True)


def method_b(h_norm: FilterLike, family, sigma0: float = 1.0,
             bounds: Bounds1D = DEFAULT_BOUNDS) -> FitResult:
    """Match the diagonal weighted variances of the discrete model to those of h.

    The model is separable and so is the weight, so the x entry depends on
    sigma_x alone and the two axes are solved independently.
    """
    family = _check_family(family, _VARIANCE_FAMILIES, "B")
    bounds = Bounds1D(*bounds)
    bounds.check()
    h = _grid(h_norm)
    rx, ry = h.radius_x, h.radius_y
    w = weight_kernel(WeightSpec.for_family(family, sigma0), rx, ry)
    x, y = h.coords()
    target = moments(np.abs(h.values) * w, x, y).cov

    def model_var(sx, sy):
        g = ideal_filter(IdealizedSpec(family, (sx, sy)), rx, ry)
        return moments(np.abs(g.values) * w, x, y).cov

    est = []
    nfev = 0
    converged = True
    for axis in (0, 1):
        if axis == 0:
            f = lambda s: abs(model_var(s, sigma0)[0, 0] - target[0, 0])
        else:
            f = lambda s: abs(model_var(sigma0, s)[1, 1] - target[1, 1])
        s, fs, _, _, n = scan_golden(f, bounds.lo, bounds.hi, bounds.tol)
        nfev += n
        at_edge = min(s - bounds.lo, bounds.hi - s) <= bounds.tol
        if at_edge and fs > 1e-9:
            converged = False
        est.append(s)
    return _result(Method.B, IdealizedSpec(family, tuple(est)), h, nfev, converged)


def _norm_fn(norm: Norm):
    if norm is Norm.L1:
        return lambda d: float(np.abs(d).sum())
    return lambda d: float(np.sqrt((d * d).sum()))


def method_norm_fit(h_norm: FilterLike, family, norm, tie_scales: bool = False,
                    bounds: Bounds1D = DEFAULT_BOUNDS) -> FitResult:
    """Minimize the l1 or l2 distance between the idealized model and h."""
    family = _check_family(family, _VARIANCE_FAMILIES | {Family.DxyMixed}, "C/D")
    norm = Norm(norm)
    bounds = Bounds1D(*bounds)
    bounds.check()
    h = _grid(h_norm)
    rx, ry = h.radius_x, h.radius_y
    target = h.values
    dist = _norm_fn(norm)

    def objective(p):
        return dist(ideal_filter(IdealizedSpec(family, (p[0], p[1])), rx, ry).values - target)

    if tie_scales:
        s, _, _, _, nfev = scan_golden(lambda s: objective((s, s)), bounds.lo, bounds.hi, bounds.tol)
        scales, converged = (s, s), True
        method = Method.C2 if norm is Norm.L1 else Method.D2
    else:
        seeds = [(a, b) for a in SEED_SCALES for b in SEED_SCALES]
        box = [(bounds.lo, bounds.hi)] * 2
        res = nelder_mead_multistart(objective, seeds, box, xatol=bounds.tol)
        scales, nfev, converged = tuple(np.clip(res.x, bounds.lo, bounds.hi)), res.nfev, res.converged
        method = Method.C1 if norm is Norm.L1 else Method.D1
    return _result(method, IdealizedSpec(family, scales), h, nfev, converged)


def fit_sharpen7(h_norm: FilterLike, norm, bounds: Bounds1D = DEFAULT_BOUNDS,
                 gamma_bounds: tuple[float, float] = DEFAULT_GAMMA_BOUNDS) -> FitResult:
    """Joint fit of (sigma, gamma) in impulse - gamma * Lap5 * T(sigma)."""
    norm = Norm(norm)
    bounds = Bounds1D(*bounds)
    bounds.check()
    h = _grid(h_norm)
    rx, ry = h.radius_x, h.radius_y
    target = h.values
    dist = _norm_fn(norm)

    def objective(p):
        spec = IdealizedSpec(Family.Sharpen, (p[0], p[0]), gamma=float(p[1]))
        return dist(ideal_filter(spec, rx, ry).values - target)

    seeds = [(s, g) for s in SEED_SCALES for g in SEED_SCALES]
    box = [(bounds.lo, bounds.hi), gamma_bounds]
    res = nelder_mead_multistart(objective, seeds, box, xatol=bounds.tol)
    s = float(np.clip(res.x[0], bounds.lo, bounds.hi))
    g = float(np.clip(res.x[1], *gamma_bounds))
    method = Method.Sharpen7L1 if norm is Norm.L1 else Method.Sharpen7L2
    return _result(method, IdealizedSpec(Family.Sharpen, (s, s), gamma=g), h, res.nfev, res.converged)


def fit(h_norm: FilterLike, family, method, sigma0: float = 1.0,
        bounds: Bounds1D = DEFAULT_BOUNDS) -> FitResult:
    """Dispatch on the method name (A, B, C1, C2, D1, D2, S7L1, S7L2)."""
    method = Method(method)
    if method is Method.A:
        return method_a(h_norm, family, sigma0)
    if method is Method.B:
        return method_b(h_norm, family, sigma0, bounds)
    if method in (Method.Sharpen7L1, Method.Sharpen7L2):
        norm = Norm.L1 if method is Method.Sharpen7L1 else Norm.L2
        return fit_sharpen7(h_norm, norm, bounds)
    norm = Norm.L1 if method in (Method.C1, Method.C2) else Norm.L2
    return method_norm_fit(h_norm, family, norm, method in (Method.C2, Method.D2), bounds)
