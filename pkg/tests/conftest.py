import pytest

from arknit import fixtures


@pytest.fixture(scope="session")
def F5():
    return fixtures.field(5)


@pytest.fixture(scope="session")
def A2():
    return fixtures.linear_a(2)


@pytest.fixture(scope="session")
def A3():
    return fixtures.linear_a(3)


@pytest.fixture(scope="session")
def D4():
    return fixtures.d4()


@pytest.fixture(scope="session")
def DN():
    return fixtures.dual_numbers(3)



def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
