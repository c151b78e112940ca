"""Discrete scale-space kernels and idealized receptive-field models.

Grids are stored with row 0 at the top (y = +radius_y) and column 0 at the
left (x = -radius_x). Difference molecules are laid out in correlation
orientation, so that ``sum(molecule * f)`` over the grid coordinates gives
the action of the operator at the origin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import NamedTuple

import numpy as np
from scipy.signal import convolve2d


class FilterGrid:
    """Odd-sized 2-D coefficient grid with centered integer coordinates."""

    __slots__ = ("_values",)

    def __init__(self, values):
        arr = np.array(values, dtype=float)
        if arr.ndim != 2:
            raise ValueError(f"grid must be 2-D, got shape {arr.shape}")
        if arr.shape[0] % 2 == 0 or arr.shape[1] % 2 == 0:
            raise ValueError(f"grid dimensions must be odd, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("grid contains non-finite values")
        arr.setflags(write=False)
        self._values = arr

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def shape(self) -> tuple[int, int]:
        return self._values.shape

    @property
    def radius_x(self) -> int:
        return self._values.shape[1] // 2

    @property
    def radius_y(self) -> int:
        return self._values.shape[0] // 2

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Return (x, y) coordinate arrays matching ``values``."""
        rx, ry = self.radius_x, self.radius_y
        x = np.arange(-rx, rx + 1, dtype=float)
        y = np.arange(ry, -ry - 1, -1, dtype=float)
        return np.meshgrid(x, y)

    def at(self, x: int, y: int) -> float:
        return float(self._values[self.radius_y - y, x + self.radius_x])

    def crop(self, radius_x: int, radius_y: int) -> FilterGrid:
        if radius_x > self.radius_x or radius_y > self.radius_y:
            return self.pad(radius_x, radius_y).crop(radius_x, radius_y)
        cy, cx = self.radius_y, self.radius_x
        return FilterGrid(self._values[cy - radius_y:cy + radius_y + 1,
                                       cx - radius_x:cx + radius_x + 1])

    def pad(self, radius_x: int, radius_y: int) -> FilterGrid:
        px = max(radius_x - self.radius_x, 0)
        py = max(radius_y - self.radius_y, 0)
        return FilterGrid(np.pad(self._values, ((py, py), (px, px))))

    def __add__(self, other: FilterGrid) -> FilterGrid:
        return FilterGrid(self._values + other.values)

    def __sub__(self, other: FilterGrid) -> FilterGrid:
        return FilterGrid(self._values - other.values)

    def __mul__(self, c: float) -> FilterGrid:
        return FilterGrid(self._values * c)

    __rmul__ = __mul__

    def __neg__(self) -> FilterGrid:
        return FilterGrid(-self._values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FilterGrid):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._values, other.values))

    def __hash__(self):
        return hash((self.shape, self._values.tobytes()))

    def __repr__(self) -> str:
        return f"FilterGrid(radius_x={self.radius_x}, radius_y={self.radius_y})"


class ScalePair(NamedTuple):
    sigma_x: float
    sigma_y: float


class Family(IntEnum):
    DyPlus = 1
    DxMinus = 2
    DyMinus = 3
    DxPlus = 4
    DxCentered = 5
    DyCentered = 6
    Sharpen = 7
    Smooth = 8
    DxyMixed = 9


class Op(Enum):
    DxPlus = "DxPlus"
    DxMinus = "DxMinus"
    DyPlus = "DyPlus"
    DyMinus = "DyMinus"
    Dx = "Dx"
    Dy = "Dy"
    Dxx = "Dxx"
    Dxy = "Dxy"
    Dyy = "Dyy"
    Lap5 = "Lap5"


# molecule rows are listed top (y=+1) to bottom (y=-1)
_MOLECULES = {
    Op.DxPlus: [[0, 0, 0], [0, -1, 1], [0, 0, 0]],
    Op.DxMinus: [[0, 0, 0], [-1, 1, 0], [0, 0, 0]],
    Op.DyPlus: [[0, 1, 0], [0, -1, 0], [0, 0, 0]],
    Op.DyMinus: [[0, 0, 0], [0, 1, 0], [0, -1, 0]],
    Op.Dx: [[0, 0, 0], [-0.5, 0, 0.5], [0, 0, 0]],
    Op.Dy: [[0, 0.5, 0], [0, 0, 0], [0, -0.5, 0]],
    Op.Dxx: [[0, 0, 0], [1, -2, 1], [0, 0, 0]],
    Op.Dxy: [[-0.25, 0, 0.25], [0, 0, 0], [0.25, 0, -0.25]],
    Op.Dyy: [[0, 1, 0], [0, -2, 0], [0, 1, 0]],
    Op.Lap5: [[0, 1, 0], [1, -4, 1], [0, 1, 0]],
}

FAMILY_OP = {
    Family.DyPlus: Op.DyPlus,
    Family.DxMinus: Op.DxMinus,
    Family.DyMinus: Op.DyMinus,
    Family.DxPlus: Op.DxPlus,
    Family.DxCentered: Op.Dx,
    Family.DyCentered: Op.Dy,
    Family.DxyMixed: Op.Dxy,
}


@dataclass(frozen=True)
class IdealizedSpec:
    family: Family
    scales: ScalePair
    gamma: float | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "scales", ScalePair(*map(float, self.scales)))
        sx, sy = self.scales
        if sx < 0 or sy < 0:
            raise ValueError("scale parameters must be non-negative")
        if self.family is Family.Sharpen:
            if self.gamma is None:
                raise ValueError("Sharpen requires gamma")
            if self.gamma < 0:
                raise ValueError("gamma must be non-negative")
            if sx != sy:
                raise ValueError("Sharpen model is isotropic: sigma_x must equal sigma_y")
        elif self.gamma is not None:
            raise ValueError(f"gamma is only defined for Sharpen, not {self.family.name}")


def bessel_i(n: int, x: float) -> float:
    """Modified Bessel function of the first kind I_n(x) by power series.

    Intended for the moderate arguments met in scale-space work (x up to a
    few tens); there is no asymptotic branch.
    """
    if n < 0 or x < 0:
        raise ValueError(f"bessel_i requires n >= 0 and x >= 0, got n={n}, x={x}")
    n = int(n)
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    half = 0.5 * x
    # first term (x/2)^n / n!, in log space to avoid overflow in n!
    term = math.exp(n * (math.log(x) - math.log(2.0)) - math.lgamma(n + 1))
    total = term
    q = half * half
    k = 0
    while True:
        k += 1
        term *= q / (k * (n + k))
        total += term
        # <= also stops when the leading term underflowed to zero
        if term <= 1e-16 * total:
            break
    return total


def disc_gauss_1d(sigma: float, radius: int) -> np.ndarray:
    """Discrete analogue of the Gaussian, e^{-s} I_|n|(s) with s = sigma**2."""
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    radius = int(radius)
    if radius < 0:
        raise ValueError("radius must be non-negative")
    out = np.zeros(2 * radius + 1)
    if sigma == 0:
        out[radius] = 1.0
        return out
    s = sigma * sigma
    es = math.exp(-s)
    for n in range(radius + 1):
        v = es * bessel_i(n, s)
        out[radius + n] = v
        out[radius - n] = v
    return out


def tail_radius(sigma: float, eps: float = 1e-15) -> int:
    """Smallest radius whose discrete Gaussian misses at most ``eps`` of the unit mass."""
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    s = sigma * sigma
    es = math.exp(-s)
    n = 0
    while True:
        # summed directly, since 1 - (kept mass) cancels catastrophically
        tail = 2 * sum(es * bessel_i(k, s) for k in range(n + 1, n + 80))
        if tail <= eps:
            return n
        n += 1


def disc_gauss_2d(scales, radius_x: int, radius_y: int) -> FilterGrid:
    sx, sy = scales
    tx = disc_gauss_1d(sx, radius_x)
    ty = disc_gauss_1d(sy, radius_y)
    return FilterGrid(np.outer(ty, tx))


def impulse(radius_x: int = 0, radius_y: int = 0) -> FilterGrid:
    v = np.zeros((2 * radius_y + 1, 2 * radius_x + 1))
    v[radius_y, radius_x] = 1.0
    return FilterGrid(v)


def diff_molecule(op) -> FilterGrid:
    return FilterGrid(_MOLECULES[Op(op)])


def apply_op(op_grid: FilterGrid, target: FilterGrid) -> FilterGrid:
    """Full discrete convolution of two grids.

    With both grids in correlation orientation the result is the grid of the
    composed operator (apply ``target``, then ``op_grid``).
    """
    return FilterGrid(convolve2d(op_grid.values, target.values, mode="full"))


def ideal_filter(spec: IdealizedSpec, radius_x: int = 3, radius_y: int = 3) -> FilterGrid:
    """Idealized receptive field: difference molecule applied to the discrete Gaussian.

    The smoothing kernel is built on a support enlarged by the molecule
    radius plus a margin of 2 and the result is cropped without
    renormalization.
    """
    margin = 3
    t = disc_gauss_2d(spec.scales, radius_x + margin, radius_y + margin)
    fam = spec.family
    if fam is Family.Smooth:
        return t.crop(radius_x, radius_y)
    if fam is Family.Sharpen:
        lap = apply_op(diff_molecule(Op.Lap5), t).crop(radius_x, radius_y)
        return impulse(radius_x, radius_y) - spec.gamma * lap
    return apply_op(diff_molecule(FAMILY_OP[fam]), t).crop(radius_x, radius_y)
