import sys

import pytest

from cheshire.states import make_postselected, make_preselected


@pytest.fixture(scope="session")
def psi():
    return make_preselected()


@pytest.fixture(scope="session")
def phi1():
    return make_postselected("phi1")


@pytest.fixture(scope="session")
def phi2():
    return make_postselected("phi2")



def pytest_terminal_summary(terminalreporter):
    mod = next(
        (m for m in list(sys.modules.values())
         if getattr(m, "__file__", "") and m.__file__.endswith("test_acceptance.py")),
        None,
    )
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number][1])
