import numpy as np
import pytest

from qflmc.model import ModelSpec, generate_dataset


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def paper_data():
    return generate_dataset(ModelSpec(), np.random.default_rng(7))


@pytest.fixture
def small_data(rng):
    spec = ModelSpec(m=3, theta_star=(0.5, -1.0, 0.25), n_total=40, K=4)
    return generate_dataset(spec, rng)


_CRITERIA = []


@pytest.fixture
def criterion():
    """Record an acceptance criterion outcome and fail the test if it did not pass."""

    def record(number, name, passed, detail):
        _CRITERIA.append((number, name, bool(passed), detail))
        assert passed, f"criterion {number} ({name}) failed: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, passed, detail in sorted(_CRITERIA):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number}. {name}: {detail}")
