"""Affine approximation a*f' + b of learned filters by idealized reference filters."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .exceptions import DegenerateError
from .kernels import Family, FilterGrid, IdealizedSpec, ideal_filter

# Default reference scales when no fitted bank is at hand. Families 1-6 and 8
# use variance-matched estimates typical of the learned master filters; the
# mixed derivative sits at the joint scale of families 1-4.
CANONICAL_SPECS: dict[int, IdealizedSpec] = {
    1: IdealizedSpec(Family.DyPlus, (0.644, 0.583)),
    2: IdealizedSpec(Family.DxMinus, (0.586, 0.644)),
    3: IdealizedSpec(Family.DyMinus, (0.690, 0.674)),
    4: IdealizedSpec(Family.DxPlus, (0.756, 0.460)),
    5: IdealizedSpec(Family.DxCentered, (1.107, 0.945)),
    6: IdealizedSpec(Family.DyCentered, (0.900, 0.889)),
    7: IdealizedSpec(Family.Sharpen, (0.654, 0.654), gamma=0.522),
    8: IdealizedSpec(Family.Smooth, (0.609, 0.601)),
    9: IdealizedSpec(Family.DxyMixed, (0.669, 0.590)),
}


@dataclass(frozen=True)
class Candidate:
    family_index: int
    a: float
    b: float
    residual_l2: float
    error: str | None = None


@dataclass(frozen=True)
class AffineMatch:
    family_index: int
    a: float
    b: float
    residual_l2: float
    rank: tuple[Candidate, ...]


def affine_fit(f: FilterGrid, f_prime: FilterGrid) -> tuple[float, float, float]:
    """Least-squares a, b minimizing ||f - (a f' + b)||_2 over the grid cells."""
    if f.shape != f_prime.shape:
        raise ValueError(f"support mismatch: {f.shape} vs {f_prime.shape}")
    u = f_prime.values.ravel()
    v = f.values.ravel()
    du = u - u.mean()
    var = float(du @ du) / u.size
    if var < 1e-15:
        raise DegenerateError("reference filter is (numerically) constant")
    a = float(du @ (v - v.mean())) / u.size / var
    b = float(v.mean() - a * u.mean())
    r = v - (a * u + b)
    return a, b, float(math.sqrt(r @ r))


def reference_bank(specs: Mapping[int, IdealizedSpec] | None = None,
                   radius: int = 3, families: Sequence[int] | None = None) -> dict[int, FilterGrid]:
    specs = CANONICAL_SPECS if specs is None else specs
    keys = sorted(specs) if families is None else list(families)
    return {k: ideal_filter(specs[k], radius, radius) for k in keys}


def classify(f: FilterGrid, reference: Mapping[int, FilterGrid] | Sequence[FilterGrid]) -> AffineMatch:
    """Closest reference under the affine model; ties go to the lower family index.

    A sequence of references is numbered from 1.
    """
    if not isinstance(reference, Mapping):
        reference = {i + 1: g for i, g in enumerate(reference)}
    if not reference:
        raise ValueError("empty reference set")
    cands = []
    for idx in sorted(reference):
        try:
            a, b, r = affine_fit(f, reference[idx])
            cands.append(Candidate(idx, a, b, r))
        except (DegenerateError, ValueError) as exc:
            cands.append(Candidate(idx, math.nan, math.nan, math.inf, str(exc)))
    cands.sort(key=lambda c: (c.residual_l2, c.family_index))
    best = cands[0]
    if best.error is not None:
        raise DegenerateError(f"no reference filter could be fitted: {best.error}")
    return AffineMatch(best.family_index, best.a, best.b, best.residual_l2, tuple(cands))
