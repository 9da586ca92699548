# tests/conftest.py

import mpmath as mp
import pytest

from app.config import get_settings
from app.core.numeric import EvalConfig
from app.core.relations import clear_systems


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Settings with a temporary cache directory, rebuilt for every test."""
    monkeypatch.setenv("CMZV_CACHE_DIR", str(tmp_path / "cache"))
    get_settings.cache_clear()
    clear_systems()
    yield get_settings()
    get_settings.cache_clear()
    clear_systems()


@pytest.fixture(autouse=True)
def reference_precision():
    """Reference values in tests are computed at 50 digits."""
    with mp.workdps(50):
        yield


@pytest.fixture
def cache_dir(isolated_settings):
    return isolated_settings.cache_dir


@pytest.fixture
def cfg():
    return EvalConfig.from_settings(digits=30)


@pytest.fixture
def low_cfg():
    return EvalConfig.from_settings(digits=20)


@pytest.fixture
def cfg40():
    return EvalConfig.from_settings(digits=40)
