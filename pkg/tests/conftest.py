import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import corpus


@pytest.fixture(scope="session")
def models():
    return corpus.all_models()


@pytest.fixture(scope="session")
def heisenberg():
    return corpus.heisenberg()


@pytest.fixture(scope="session")
def quadric_c7():
    return corpus.quadric_c7()


@pytest.fixture(scope="session")
def d2_quadric():
    return corpus.d2_quadric()
