import pytest
from hypothesis import HealthCheck, settings

from tcdmaps import graph_from_grassmannian
from tcdmaps.lattice import desargues_graph

settings.register_profile(
    "exact",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("exact")


@pytest.fixture(scope="session")
def desargues():
    return desargues_graph()


@pytest.fixture(scope="session")
def g35():
    return graph_from_grassmannian(3, 5)


_ACCEPTANCE = []


@pytest.fixture(scope="session")
def acceptance_lines():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
