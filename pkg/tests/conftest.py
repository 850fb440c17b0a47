"""Shared pytest plumbing: expensive fixtures and the acceptance summary."""
import pytest

from entscale import chain

_CRITERIA = {}


@pytest.fixture(scope="session")
def xy_cross_12():
    """One 12-site chain for the whole run; the dense eigensystem is cached
    on the instance, so only the first user pays for it."""
    h = chain.build_hamiltonian("xy_cross", n=12)
    h.eigensystem()
    return h


def record_criterion(number, passed, detail):
    line = f"CRITERION {number}: {'PASS' if passed else 'FAIL'} ({detail})"
    _CRITERIA[number] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[number])
