import pytest

from utils.settings import get_settings


@pytest.fixture(autouse=True)
def fresh_settings():
    """CLI flags write into the cached settings object"""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
