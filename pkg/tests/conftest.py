import random
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from app.kernels.tori_galois import build_fixture  # noqa: E402

FIXTURES = ROOT / "fixtures"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs the whole acceptance suite")


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def quadratic10():
    return build_fixture([-10, 0, 1])


@pytest.fixture(scope="session")
def s3_cubic():
    return build_fixture([-1, -1, 0, 1])


@pytest.fixture(scope="session")
def c3_cubic():
    return build_fixture([-1, -3, 0, 1])


@pytest.fixture(autouse=True)
def single_worker(monkeypatch):
    monkeypatch.setenv("TORUSINV_THREADS", "1")
