import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from pfci.graph import Dag

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# acceptance criteria append "CRITERION k: PASS/FAIL ..." lines here
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def random_dag(rng, p, prob=0.4, low=0.5, high=1.5):
    """Random forward DAG on a random node order with weights in +-[low, high]."""
    order = rng.permutation(p)
    A = np.zeros((p, p), dtype=bool)
    for a in range(p):
        for b in range(a + 1, p):
            if rng.random() < prob:
                A[order[a], order[b]] = True
    W = np.where(A, rng.uniform(low, high, (p, p)) * rng.choice([-1.0, 1.0], (p, p)), 0.0)
    return Dag(A, W)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
