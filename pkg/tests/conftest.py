import pytest

from matcorrect.ring import RingContext


@pytest.fixture
def mod7():
    return RingContext(7)


@pytest.fixture
def mod1m():
    return RingContext(1_000_003)


@pytest.fixture
def wrap64():
    return RingContext(0)


@pytest.fixture(params=[5, 97, 1_000_003, (1 << 61) - 1, 0], ids=lambda m: f"mod{m}")
def any_ctx(request):
    return RingContext(request.param)
