import numpy as np
import pytest

from invgates.schedules import Schedule
from invgates.spectral import SingleQubitParams

_CRITERIA = []


@pytest.fixture
def criterion():
    """Record a pass/fail line for the acceptance report."""

    def record(number, title, passed, detail=""):
        _CRITERIA.append((number, title, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(_CRITERIA):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number}. {title}" + (f" ({detail})" if detail else ""))


def random_tabulated(rng, n_nodes=5, start=None, scale=1.5):
    nodes = np.linspace(0.0, 1.0, n_nodes)
    values = rng.uniform(-scale, scale, n_nodes)
    if start is not None:
        values[0] = start
    return Schedule.tabulated(nodes, values)


def random_params(rng, tau=None):
    return SingleQubitParams(
        theta=random_tabulated(rng),
        varphi=random_tabulated(rng, start=0.0),
        phi=random_tabulated(rng),
        tau=float(rng.uniform(0.2, 5.0)) if tau is None else tau,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20171001)
