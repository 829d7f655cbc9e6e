import pytest
import rothpy as rp


def pytest_addoption(parser):
    parser.addoption("--slow", action="store_true",
        help="run acceptance-scale tests on large grids and corpora")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--slow"):
        # --slow given in cli: do not skip slow tests
        pass
    else:
        skip_slow = pytest.mark.skip(reason="need --slow option to run")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip_slow)


@pytest.fixture()
def small():
    # h = 1/64, 4h = 2^-4
    return rp.grid.TorusConfig(L=4.0, N=2**8)


@pytest.fixture()
def medium():
    # h = 1/256, 4h = 2^-6
    return rp.grid.TorusConfig(L=4.0, N=2**10)


@pytest.fixture()
def t2():
    return rp.curves.Curve.monomial(2)
