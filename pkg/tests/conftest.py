import pytest

from hnnlinear import suite


@pytest.fixture(scope="session")
def curated():
    return suite.curated()
