import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from scspfit.exceptions import DegenerateError
from scspfit.kernels import FilterGrid, Op, diff_molecule
from scspfit.measures import (ContinuousKind, WeightShape, WeightSpec, cont_weighted_variance, l1_norm,
                              l2_norm, respond_to_monomial, spread, weight_kernel)

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
grids = arrays(float, (5, 5), elements=finite).filter(lambda a: np.abs(a).sum() > 1e-3)


def _spread(op):
    return spread(diff_molecule(op))


@pytest.mark.parametrize("op, mean, cov", [
    (Op.DxPlus, (0.5, 0), (0.25, 0)),
    (Op.DxMinus, (-0.5, 0), (0.25, 0)),
    (Op.DyPlus, (0, 0.5), (0, 0.25)),
    (Op.DyMinus, (0, -0.5), (0, 0.25)),
    (Op.Dx, (0, 0), (1, 0)),
    (Op.Dy, (0, 0), (0, 1)),
    (Op.Dxx, (0, 0), (0.5, 0)),
    (Op.Dyy, (0, 0), (0, 0.5)),
    (Op.Dxy, (0, 0), (1, 1)),
])
def test_difference_operator_spreads(op, mean, cov):
    s = _spread(op)
    assert s.mean.tolist() == list(mean)
    assert s.cov.tolist() == [[cov[0], 0], [0, cov[1]]]


@given(grids)
def test_point_symmetric_grid_has_zero_mean(a):
    h = FilterGrid(a + a[::-1, ::-1])
    if np.abs(h.values).sum() < 1e-3:
        return
    s = spread(h)
    assert np.abs(s.mean).max() < 1e-12


@given(grids, st.sampled_from([(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1)]))
def test_translation_covariance(a, shift):
    dx, dy = shift
    base = np.zeros((9, 9))
    base[2:7, 2:7] = a
    moved = np.roll(np.roll(base, dx, axis=1), -dy, axis=0)
    s0, s1 = spread(FilterGrid(base)), spread(FilterGrid(moved))
    np.testing.assert_allclose(s1.mean - s0.mean, [dx, dy], atol=1e-12)
    np.testing.assert_allclose(s1.cov, s0.cov, atol=1e-11)


@given(grids)
def test_spread_is_psd(a):
    cov = spread(FilterGrid(a)).cov
    assert cov[0, 1] == cov[1, 0]
    assert cov[0, 0] >= 0 and cov[1, 1] >= 0
    assert np.linalg.det(cov) >= -1e-12


@given(grids, st.floats(0.01, 100))
def test_spread_ignores_amplitude_and_sign(a, c):
    s0, s1 = spread(FilterGrid(a)), spread(FilterGrid(-c * a))
    np.testing.assert_allclose(s1.mean, s0.mean, atol=1e-12)
    np.testing.assert_allclose(s1.cov, s0.cov, atol=1e-10)


def test_zero_grid_is_degenerate():
    with pytest.raises(DegenerateError):
        spread(FilterGrid(np.zeros((3, 3))))


def test_norms():
    h = FilterGrid([[3, 0, 0], [0, -4, 0], [0, 0, 0]])
    assert l1_norm(h) == 7
    assert l2_norm(h) == 5


def test_monomial_responses_of_molecules():
    assert respond_to_monomial(diff_molecule(Op.DxPlus), 1, 0) == 1
    assert respond_to_monomial(diff_molecule(Op.DxPlus), 1, 0, (0.5, 0)) == 1
    assert respond_to_monomial(diff_molecule(Op.DxPlus), 0, 0) == 0
    assert respond_to_monomial(diff_molecule(Op.Dyy), 0, 2) == 2
    assert respond_to_monomial(diff_molecule(Op.Dxy), 1, 1) == 1


def test_weight_kernels():
    w = weight_kernel(WeightSpec.for_family(8, 1.0), 3, 3)
    assert w.shape == (7, 7) and np.all(w > 0)
    w = weight_kernel(WeightSpec.for_family(4, 1.0), 3, 3)
    assert w[3, 3] > 0 and w.min() >= 0
    assert np.array_equal(weight_kernel(WeightSpec(), 1, 2), np.ones((5, 3)))


def test_weight_spec_validation():
    with pytest.raises(ValueError):
        WeightSpec(WeightShape.ABS_DX)
    with pytest.raises(ValueError):
        WeightSpec(WeightShape.SMOOTH, "plus")
    with pytest.raises(ValueError):
        WeightSpec(WeightShape.SMOOTH, sigma0=0.0)
    with pytest.raises(ValueError):
        WeightSpec.for_family(7)
    assert WeightSpec.for_family(1).variant == "plus"
    assert WeightSpec.for_family(2).variant == "minus"
    assert WeightSpec.for_family(5).shape is WeightShape.ABS_DX


def test_weighting_shrinks_spread():
    h = FilterGrid(np.ones((7, 7)))
    plain = spread(h).cov
    weighted = spread(h, WeightSpec.for_family(8, 1.0)).cov
    assert weighted[0, 0] < plain[0, 0] and weighted[1, 1] < plain[1, 1]


def quadrature_variance(kind, sx, sy, n=1601):
    """Midpoint-rule weighted variance over [-8 sigma, 8 sigma]."""
    def axis(s):
        edges = np.linspace(-8 * s, 8 * s, n + 1)
        return 0.5 * (edges[1:] + edges[:-1])

    x, y = np.meshgrid(axis(sx), axis(sy))
    g = np.exp(-x ** 2 / (2 * sx ** 2) - y ** 2 / (2 * sy ** 2)) / (2 * np.pi * sx * sy)
    if kind is ContinuousKind.GAUSS:
        h = g
    elif kind is ContinuousKind.ABS_GX:
        h = np.abs(-x / sx ** 2 * g)
    else:
        h = np.abs(-y / sy ** 2 * g)
    m = h * h
    tot = m.sum()
    mx, my = (x * m).sum() / tot, (y * m).sum() / tot
    vxx = ((x - mx) ** 2 * m).sum() / tot
    vyy = ((y - my) ** 2 * m).sum() / tot
    vxy = ((x - mx) * (y - my) * m).sum() / tot
    return np.array([[vxx, vxy], [vxy, vyy]])


@pytest.mark.parametrize("kind", list(ContinuousKind))
@pytest.mark.parametrize("scales", [(0.5, 0.5), (1.0, 1.0), (0.7, 1.3)])
def test_continuous_closed_form_matches_quadrature(kind, scales):
    np.testing.assert_allclose(cont_weighted_variance(kind, scales), quadrature_variance(kind, *scales),
                               atol=1e-6)


@given(st.sampled_from(list(ContinuousKind)), st.floats(0.1, 5), st.floats(0.1, 5))
def test_continuous_scale_covariance(kind, sx, sy):
    np.testing.assert_allclose(cont_weighted_variance(kind, (2 * sx, 2 * sy)),
                               4 * cont_weighted_variance(kind, (sx, sy)), rtol=1e-14)


def test_continuous_rejects_zero_scale():
    with pytest.raises(ValueError):
        cont_weighted_variance("gauss", (0.0, 1.0))
