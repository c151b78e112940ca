"""Norms, spatial spread measures and monomial responses of filter grids."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from .exceptions import DegenerateError
from .kernels import Family, FilterGrid, IdealizedSpec, ideal_filter


class SpreadMeasure(NamedTuple):
    mean: np.ndarray  # (m_x, m_y)
    cov: np.ndarray  # 2x2, order (x, y)


class WeightShape(Enum):
    NONE = "none"
    SMOOTH = "smooth"
    ABS_DX = "absdx"
    ABS_DY = "absdy"


_VARIANT_FAMILY = {
    (WeightShape.ABS_DX, "plus"): Family.DxPlus,
    (WeightShape.ABS_DX, "minus"): Family.DxMinus,
    (WeightShape.ABS_DX, "centered"): Family.DxCentered,
    (WeightShape.ABS_DY, "plus"): Family.DyPlus,
    (WeightShape.ABS_DY, "minus"): Family.DyMinus,
    (WeightShape.ABS_DY, "centered"): Family.DyCentered,
}

_FAMILY_WEIGHT = {
    Family.DyPlus: (WeightShape.ABS_DY, "plus"),
    Family.DxMinus: (WeightShape.ABS_DX, "minus"),
    Family.DyMinus: (WeightShape.ABS_DY, "minus"),
    Family.DxPlus: (WeightShape.ABS_DX, "plus"),
    Family.DxCentered: (WeightShape.ABS_DX, "centered"),
    Family.DyCentered: (WeightShape.ABS_DY, "centered"),
    Family.Smooth: (WeightShape.SMOOTH, None),
}


@dataclass(frozen=True)
class WeightSpec:
    """Shape and scale of the weighting kernel used in weighted spread measures.

    ``variant`` picks the difference operator (``"plus"``, ``"minus"`` or
    ``"centered"``) for the derivative-shaped weights.
    """

    shape: WeightShape = WeightShape.NONE
    variant: str | None = None
    sigma0: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "shape", WeightShape(self.shape))
        if self.shape in (WeightShape.ABS_DX, WeightShape.ABS_DY):
            if self.variant not in ("plus", "minus", "centered"):
                raise ValueError(f"derivative weight needs variant plus/minus/centered, got {self.variant!r}")
        elif self.variant is not None:
            raise ValueError(f"variant is meaningless for weight shape {self.shape.value}")
        if self.shape is not WeightShape.NONE and not self.sigma0 > 0:
            raise ValueError("sigma0 must be positive")

    @classmethod
    def for_family(cls, family, sigma0: float = 1.0) -> WeightSpec:
        """Weight whose shape matches the absolute value of the given model family."""
        family = Family(family)
        if family not in _FAMILY_WEIGHT:
            raise ValueError(f"no matched weighting shape for family {family.name}")
        shape, variant = _FAMILY_WEIGHT[family]
        return cls(shape, variant, sigma0)


UNWEIGHTED = WeightSpec()


def weight_kernel(weight: WeightSpec, radius_x: int, radius_y: int) -> np.ndarray:
    if weight.shape is WeightShape.NONE:
        return np.ones((2 * radius_y + 1, 2 * radius_x + 1))
    s0 = weight.sigma0
    if weight.shape is WeightShape.SMOOTH:
        fam = Family.Smooth
    else:
        fam = _VARIANT_FAMILY[(weight.shape, weight.variant)]
    return np.abs(ideal_filter(IdealizedSpec(fam, (s0, s0)), radius_x, radius_y).values)


def l1_norm(h: FilterGrid) -> float:
    return float(np.abs(h.values).sum())


def l2_norm(h: FilterGrid) -> float:
    return float(np.sqrt((h.values ** 2).sum()))


def moments(mass: np.ndarray, x: np.ndarray, y: np.ndarray) -> SpreadMeasure:
    """Mean and central second moment of a non-negative mass distribution."""
    total = mass.sum()
    if not total > 1e-300:
        raise DegenerateError(f"spread measure undefined: total mass {total:g}")
    mx = (x * mass).sum() / total
    my = (y * mass).sum() / total
    dx = x - mx
    dy = y - my
    vxx = (dx * dx * mass).sum() / total
    vyy = (dy * dy * mass).sum() / total
    vxy = (dx * dy * mass).sum() / total
    return SpreadMeasure(np.array([mx, my]), np.array([[vxx, vxy], [vxy, vyy]]))


def spread(h: FilterGrid, weight: WeightSpec = UNWEIGHTED) -> SpreadMeasure:
    """Spatial mean and covariance of |h|, optionally multiplied by a weighting kernel."""
    x, y = h.coords()
    w = weight_kernel(weight, h.radius_x, h.radius_y)
    return moments(np.abs(h.values) * w, x, y)


def respond_to_monomial(h: FilterGrid, a: int, b: int, offset=(0.0, 0.0)) -> float:
    """Response at the origin to (x - offset_x)**a * (y - offset_y)**b."""
    x, y = h.coords()
    ox, oy = offset
    return float((h.values * (x - ox) ** a * (y - oy) ** b).sum())


class ContinuousKind(Enum):
    GAUSS = "gauss"
    ABS_GX = "absgx"
    ABS_GY = "absgy"


def cont_weighted_variance(kind, scales) -> np.ndarray:
    """Self-weighted variance of a continuous Gaussian or |first derivative|.

    Closed forms: diag(sx^2/2, sy^2/2) for the Gaussian, with the
    differentiated axis entry replaced by 3 s^2 / 2 for |g_x| or |g_y|.
    """
    kind = ContinuousKind(kind)
    sx, sy = scales
    if not (sx > 0 and sy > 0):
        raise ValueError("continuous kernels need positive scales")
    vx = sx * sx / 2
    vy = sy * sy / 2
    if kind is ContinuousKind.ABS_GX:
        vx *= 3
    elif kind is ContinuousKind.ABS_GY:
        vy *= 3
    return np.diag([vx, vy])
