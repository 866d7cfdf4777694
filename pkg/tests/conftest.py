import pytest

import graphminimax as gm


@pytest.fixture(scope="session")
def path64_eig():
    return gm.eigendecompose(gm.build_path(64))


@pytest.fixture(scope="session")
def grid8_eig():
    return gm.eigendecompose(gm.build_grid([8, 8]))


@pytest.fixture(scope="session")
def path2048_eig():
    return gm.eigendecompose(gm.build_path(2048))


@pytest.fixture(scope="session")
def grid32_eig():
    return gm.eigendecompose(gm.build_grid([32, 32]))
