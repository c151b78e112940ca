"""Spread measures and normalization of a learned-looking filter.

A "learned" filter is simulated as a scaled, noisy x-derivative model. Its
spread measures are printed before and after amplitude normalization, then a
smoothing filter with a constant background is DC-compensated.
"""
import numpy as np

from scspfit.kernels import Family, FilterGrid, IdealizedSpec, Op, diff_molecule, disc_gauss_2d, ideal_filter
from scspfit.measures import WeightSpec, respond_to_monomial, spread
from scspfit.normalize import dc_compensate, normalize_for_family

np.set_printoptions(precision=3, suppress=True)
rng = np.random.default_rng(1)

print("spreads of the difference molecules:")
for op in (Op.DxPlus, Op.Dx, Op.Dxx, Op.Dxy):
    s = spread(diff_molecule(op))
    print(f"  {op.name:7s} mean {s.mean}  diag(V) {np.diag(s.cov)}")

h = FilterGrid(-2.7 * ideal_filter(IdealizedSpec(Family.DxPlus, (0.75, 0.5))).values
               + 0.01 * rng.normal(size=(7, 7)))
s = spread(h)
print("\nraw filter: mean", s.mean, "response to x - m_x:", round(respond_to_monomial(h, 1, 0, s.mean), 4))
n = normalize_for_family(h, Family.DxPlus)
m = spread(n.grid).mean
print("normalized (divided by", round(n.scale_applied, 4), "): response",
      round(respond_to_monomial(n.grid, 1, 0, m), 12))
print("weighted spread with |dx+ T(1)|:", np.diag(spread(n.grid, WeightSpec.for_family(Family.DxPlus)).cov))

g = disc_gauss_2d((0.7, 0.7), 7, 7)
n = dc_compensate(FilterGrid(g.values + 0.05))
print(f"\nGaussian + 0.05: recovered C = {n.dc_constant:.8f},"
      f" max grid error {np.abs(n.grid.values - g.values).max():.1e}")
print("diag V before:", np.diag(spread(FilterGrid(g.values + 0.05)).cov), " after:", np.diag(spread(n.grid).cov))
