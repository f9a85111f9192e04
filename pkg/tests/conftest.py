import pytest

from collateral.params import derive, nominal_params


@pytest.fixture(scope="session")
def cp50():
    """Coupling-value circuit: C_q = C_R / 50, E_J = 50 E_C, zero flux."""
    return nominal_params(ej_over_ec=50.0)


@pytest.fixture(scope="session")
def cp70():
    """Flux-sweep circuit: C_q = C_R / 50, E_J = 70 E_C."""
    return nominal_params(ej_over_ec=70.0)


@pytest.fixture(scope="session")
def dp70(cp70):
    return derive(cp70)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
