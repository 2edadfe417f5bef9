import pytest

from zetamax import dickman, dirichlet


@pytest.fixture(scope="session")
def table60():
    """Shared rho table on [0, 60] at tol 1e-12 (the acceptance-grade table)."""
    return dickman.build_rho_table(60.0, 1e-12)


@pytest.fixture(scope="session")
def table12():
    return dickman.build_rho_table(12.0, 1e-12)


@pytest.fixture(scope="session")
def chi5():
    return dirichlet.build_character_table(5)


@pytest.fixture(scope="session")
def chi7():
    return dirichlet.build_character_table(7)


@pytest.fixture(scope="session")
def chi101():
    return dirichlet.build_character_table(101)
