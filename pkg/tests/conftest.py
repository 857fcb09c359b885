import pytest

from osig.groups import get_backend, seeded_rng


@pytest.fixture(scope="session")
def toy():
    return get_backend("toy")


@pytest.fixture(scope="session")
def prod():
    return get_backend("production")


@pytest.fixture(params=["toy", "production"], scope="session")
def bk(request):
    return get_backend(request.param)


@pytest.fixture
def rng(request):
    return seeded_rng(0, request.node.name)
