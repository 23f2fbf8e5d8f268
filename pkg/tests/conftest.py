"""Shared fixtures: factor tables at the standard scales, the bundled
zero set, and the acceptance-gate summary block."""

import pytest

from oscillax.table import TableMode, build_table
from oscillax.zeros import builtin_zeros_path, load_zeros

# one line per acceptance criterion, echoed after the test summary
GATE_LINES = []


@pytest.fixture(scope="session")
def gate():
    def record(line):
        GATE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if not GATE_LINES:
        return
    terminalreporter.section("acceptance gate")
    for line in sorted(GATE_LINES):
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def zeros5200():
    return load_zeros(builtin_zeros_path())


@pytest.fixture(scope="session")
def omega_table_small():
    return build_table(4000, TableMode.OMEGA)


@pytest.fixture(scope="session")
def omega_table_1e6():
    return build_table(10**6, TableMode.OMEGA)


@pytest.fixture(scope="session")
def parity_table_1e6():
    return build_table(10**6, TableMode.PARITY_NMO)


@pytest.fixture(scope="session")
def parity_omega_table_1e6():
    return build_table(10**6, TableMode.PARITY_OMEGA)


@pytest.fixture(scope="session")
def omega_table_1e8():
    return build_table(10**8, TableMode.OMEGA)
