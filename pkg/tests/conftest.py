import numpy as np
import pytest

from rydrab import IntegratorConfig, SystemParams


@pytest.fixture(scope="session")
def rab():
    return SystemParams.rab()


@pytest.fixture(scope="session")
def broken():
    return SystemParams.broken()


@pytest.fixture(scope="session")
def rab_cfg(rab):
    return IntegratorConfig.for_params(rab)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture(scope="session")
def acceptance_log():
    """Collects one (criterion, passed, detail) line per acceptance check."""
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
