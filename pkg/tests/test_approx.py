import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from scspfit.approx import CANONICAL_SPECS, affine_fit, classify, reference_bank
from scspfit.exceptions import DegenerateError
from scspfit.kernels import Family, FilterGrid, IdealizedSpec, Op, diff_molecule, ideal_filter

REF = reference_bank()
REF8 = reference_bank(families=range(1, 9))
coef = st.floats(-10, 10).filter(lambda c: abs(c) > 1e-2)


def test_exact_affine_image():
    fp = REF[5]
    a, b, r = affine_fit(FilterGrid(2 * fp.values + 0.3), fp)
    assert a == pytest.approx(2, abs=1e-12) and b == pytest.approx(0.3, abs=1e-12) and r < 1e-12
    assert affine_fit(fp, fp) == pytest.approx((1, 0, 0), abs=1e-12)


def test_affine_fit_matches_brute_force(rng):
    f = FilterGrid(rng.normal(size=(7, 7)))
    fp = diff_molecule(Op.Dx).pad(3, 3)
    a, b, r = affine_fit(f, fp)
    # coarse lattice, then a 1e-4 lattice around its best node
    u, v = fp.values.ravel(), f.values.ravel()

    def residuals(aa, bb):
        d = v[None, None] - (aa[:, None, None] * u[None, None] + bb[None, :, None])
        return np.sqrt((d * d).sum(axis=2))

    aa, bb = np.arange(-5, 5, 0.01), np.arange(-2, 2, 0.01)
    i, j = np.unravel_index(residuals(aa, bb).argmin(), (len(aa), len(bb)))
    fine_a = aa[i] + np.arange(-0.01, 0.01 + 1e-12, 1e-4)
    fine_b = bb[j] + np.arange(-0.01, 0.01 + 1e-12, 1e-4)
    brute = residuals(fine_a, fine_b).min()
    assert abs(r - brute) < 1e-6
    assert r <= brute


@given(st.integers(0, 2 ** 31))
def test_affine_fit_beats_probe_lattice(seed):
    rng = np.random.default_rng(seed)
    f, fp = FilterGrid(rng.normal(size=(7, 7))), FilterGrid(rng.normal(size=(7, 7)))
    a, b, r = affine_fit(f, fp)
    for i, j in itertools.product(range(-2, 3), repeat=2):
        d = f.values - ((a + 1e-3 * i) * fp.values + (b + 1e-3 * j))
        assert r <= np.sqrt((d * d).sum()) + 1e-12


def test_affine_fit_errors():
    with pytest.raises(DegenerateError):
        affine_fit(REF[1], FilterGrid(np.full((7, 7), 2.0)))
    with pytest.raises(ValueError):
        affine_fit(REF[1], FilterGrid(np.ones((5, 5))))


@pytest.mark.parametrize("idx", range(1, 10))
def test_self_classification(idx):
    m = classify(REF[idx], REF)
    assert m.family_index == idx and m.residual_l2 < 1e-12


@given(st.integers(1, 9), coef, st.floats(-5, 5))
def test_affine_invariance(idx, c, d):
    f = FilterGrid(ideal_filter(IdealizedSpec(Family.DxCentered, (0.9, 0.7))).values + 0.01 * idx)
    m0 = classify(f, REF)
    m1 = classify(FilterGrid(c * f.values + d), REF)
    assert m1.family_index == m0.family_index
    assert m1.residual_l2 == pytest.approx(abs(c) * m0.residual_l2, rel=1e-9, abs=1e-12)
    assert m1.a == pytest.approx(c * m0.a, rel=1e-9)


def test_examples():
    m = classify(ideal_filter(IdealizedSpec(8, (0.8, 0.8))), {8: ideal_filter(IdealizedSpec(8, (0.8, 0.8)))})
    assert m.residual_l2 < 1e-12
    m = classify(-ideal_filter(IdealizedSpec(5, (1.0, 1.0))), reference_bank(
        {**CANONICAL_SPECS, 5: IdealizedSpec(5, (1.0, 1.0))}))
    assert m.family_index == 5 and m.a < 0


def test_mixed_derivative_reference_helps():
    f = ideal_filter(IdealizedSpec(9, (0.6, 0.6)))
    with9, without9 = classify(f, REF), classify(f, REF8)
    assert with9.family_index == 9
    assert without9.residual_l2 > with9.residual_l2


def test_ranking_and_ties():
    m = classify(REF[3], [REF[3], REF[3], REF[1]])
    assert m.family_index == 1
    res = [c.residual_l2 for c in m.rank]
    assert res == sorted(res)
    assert [c.family_index for c in m.rank[:2]] == [1, 2]


def test_failing_candidate_is_ranked_last():
    bad = FilterGrid(np.zeros((7, 7)))
    m = classify(REF[2], {1: bad, 2: REF[2]})
    assert m.family_index == 2
    assert m.rank[-1].family_index == 1 and m.rank[-1].error
    with pytest.raises(DegenerateError):
        classify(REF[2], {1: bad})
    with pytest.raises(ValueError):
        classify(REF[2], {})


def test_canonical_specs_cover_all_families():
    assert sorted(CANONICAL_SPECS) == list(range(1, 10))
    assert all(CANONICAL_SPECS[i].family == i for i in CANONICAL_SPECS)
