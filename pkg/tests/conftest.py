"""Shared fixtures: every test runs with isolated settings and cache."""

import pytest

from pynnls import cache, settings


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Point the config file and cache at a temporary directory."""
    config_dir = tmp_path / "config"
    config_dir.mkdir()
    monkeypatch.setattr(
        settings, "_get_config_path", lambda: config_dir / "config.json"
    )
    for name in ("PYNNLS_TOLERANCES", "PYNNLS_CACHE_PATH", "PYNNLS_T_CONVENTION"):
        monkeypatch.delenv(name, raising=False)
    cache_dir = tmp_path / "cache"
    cache_dir.mkdir()
    settings._reset_session(cache_path=str(cache_dir))
    cache._session_cache_remove()
    yield
    settings._reset_session()
    cache._session_cache_remove()
