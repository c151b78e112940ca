import numpy as np
import pytest
from hypothesis import given, strategies as st

from scspfit.optim import Bounds1D, golden_section, nelder_mead_multistart, scan_golden


@given(st.floats(-2, 2))
def test_golden_section_on_parabola(c):
    x, fx, a, b, n = golden_section(lambda t: (t - c) ** 2, -3, 3, 1e-9)
    assert abs(x - c) < 1e-8 and b - a <= 1e-9 and n > 10


@given(st.floats(0.0, 3.0))
def test_scan_golden_on_kinked_objective(c):
    # |t - c| plus a distracting local minimum near 2.9
    f = lambda t: abs(t - c) + (0.0 if abs(t - c) < 0.5 else 0.2 * abs(t - 2.9))
    x, fx, *_ = scan_golden(f, 0.0, 3.0, 1e-8)
    assert abs(x - c) < 1e-7


def test_scan_golden_keeps_boundary_minimum():
    x, fx, *_ = scan_golden(lambda t: t, 0.0, 1.0, 1e-6)
    assert x == 0.0 and fx == 0.0


def test_bounds_check():
    Bounds1D(0, 1, 1e-3).check()
    with pytest.raises(ValueError):
        Bounds1D(1, 1, 1e-3).check()
    with pytest.raises(ValueError):
        Bounds1D(0, 1, 0).check()


def test_multistart_finds_global_minimum():
    # two basins; the deeper one is away from the first seed
    f = lambda p: min((p[0] - 0.2) ** 2 + (p[1] - 0.2) ** 2 + 0.1, (p[0] - 2) ** 2 + (p[1] - 1.5) ** 2)
    seeds = [(a, b) for a in (0.3, 0.7, 1.2) for b in (0.3, 0.7, 1.2)]
    res = nelder_mead_multistart(f, seeds, [(0, 3), (0, 3)])
    np.testing.assert_allclose(res.x, [2, 1.5], atol=1e-6)
    assert res.converged and res.nfev > len(seeds)


def test_multistart_respects_bounds():
    res = nelder_mead_multistart(lambda p: (p[0] + 1) ** 2 + (p[1] - 5) ** 2, [(0.5, 0.5)], [(0, 3), (0, 3)])
    np.testing.assert_allclose(res.x, [0, 3], atol=1e-6)
