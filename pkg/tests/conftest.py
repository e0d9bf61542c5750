import pytest

from iaegalerkin.problem import builtin_example1, builtin_polynomial
from iaegalerkin.quadrature import gauss_rule


@pytest.fixture(scope="session")
def example1():
    return builtin_example1()


@pytest.fixture(scope="session")
def polynomial():
    return builtin_polynomial()


def auto_rule(n):
    return gauss_rule(max(2 * n, 10))


ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
