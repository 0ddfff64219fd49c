import pytest


@pytest.fixture(scope="session")
def dd_base():
    from k3mono.singular import base_point

    return base_point()


@pytest.fixture(scope="session")
def dd_roots(dd_base):
    from k3mono.singular import verify_singular_points

    return verify_singular_points(dd_base)


@pytest.fixture(scope="session")
def six_certificates():
    """All six certified loops at default settings; shared because the
    transport is by far the most expensive stage of the suite."""
    from k3mono.monodromy import run_all

    return run_all()
