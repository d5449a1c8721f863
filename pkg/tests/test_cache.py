"""Tests for the session and file cache layers."""

from pathlib import Path
from unittest.mock import patch

import pandas as pd

import pynnls.cache as cache_mod
from pynnls.cache import (
    cache_data,
    clear_cache,
    get_cache_metadata,
    get_cached_data,
    list_cache,
    remove_from_cache,
    session_cache_get,
    session_cache_set,
)
from pynnls.settings import get_cache_path


def make_frame():
    return pd.DataFrame({"k": [-1.0, 0.0, 1.0], "r1": [0.1j, 0.2, 0.1j]})


class TestSessionCachePrimitives:
    def test_get_returns_none_on_miss(self):
        assert session_cache_get("nope") is None

    def test_frames_are_copied_both_ways(self):
        frame = make_frame()
        session_cache_set("key", frame)
        frame.loc[0, "k"] = 99.0
        first = session_cache_get("key")
        first.loc[1, "k"] = 99.0
        assert session_cache_get("key")["k"].tolist() == [-1.0, 0.0, 1.0]

    def test_remove_invalidates_session_keys(self):
        session_cache_set("a", 1)
        with patch.object(cache_mod, "get_cache_path", return_value="/nonexistent"):
            remove_from_cache(["a"])
        assert session_cache_get("a") is None


class TestFileCache:
    def test_round_trip_with_metadata(self):
        cache_data("rgrid_x", {"r1": [1, 2]}, metadata={"kind": "reflection_grid"})
        assert get_cached_data("rgrid_x") == {"r1": [1, 2]}
        assert get_cache_metadata("rgrid_x") == {"kind": "reflection_grid"}

    def test_missing_entry(self):
        assert get_cached_data("absent") is None
        assert get_cache_metadata("absent") is None

    def test_corrupted_entry_dropped(self):
        path = Path(get_cache_path()) / "broken.pkl"
        path.write_bytes(b"not a pickle")
        assert get_cached_data("broken") is None
        assert not path.exists()

    def test_listing_reads_sidecars(self):
        cache_data("one", 1, metadata={"kind": "reflection_grid", "n": 5})
        cache_data("two", 2)
        listing = list_cache()
        assert sorted(listing["cache_key"]) == ["one", "two"]
        row = listing.set_index("cache_key").loc["one"]
        assert row["n"] == 5

    def test_remove_specific_key_and_sidecar(self):
        cache_data("one", 1, metadata={"kind": "x"})
        remove_from_cache(["one"])
        assert get_cached_data("one") is None
        assert not (Path(get_cache_path()) / "one.meta.json").exists()

    def test_clear(self):
        cache_data("one", 1)
        cache_data("two", 2)
        session_cache_set("one", 1)
        clear_cache()
        assert list_cache().empty
        assert session_cache_get("one") is None
