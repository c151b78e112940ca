import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def stated_radius(sigma: float) -> int:
    """The ceil(6 sigma) + 2 support used by several published tolerances."""
    return math.ceil(6 * sigma) + 2


def adequate_radius(sigma: float) -> int:
    """Support missing less than 1e-15 of the discrete Gaussian mass."""
    from scspfit.kernels import tail_radius
    return tail_radius(sigma, 1e-15)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import acceptance_log
    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(acceptance_log.LINES):
            terminalreporter.write_line(acceptance_log.LINES[n])
