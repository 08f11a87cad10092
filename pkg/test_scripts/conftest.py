import os
import sys

import pytest

# Add the parent directory to the path so the top-level modules import
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from finite_groups import cyclic_group, direct_product, symmetric_group  # noqa: E402
from settings import Settings, reset_settings  # noqa: E402


@pytest.fixture
def settings():
    return Settings()


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    for name in ("COHOMFORGE_MAX_BASIS", "COHOMFORGE_MAX_COCHAIN_COORDS", "COHOMFORGE_THREADS",
                 "COHOMFORGE_LOG_LEVEL", "COHOMFORGE_LOG_FILE"):
        monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def c2():
    return cyclic_group(2)


@pytest.fixture
def c3():
    return cyclic_group(3)


@pytest.fixture
def klein():
    return direct_product(cyclic_group(2), cyclic_group(2))


@pytest.fixture
def s3():
    return symmetric_group(3)
