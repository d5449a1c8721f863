"""
Two-level cache for reflection grids and other costly results.

Entries live in memory for the session and as ``<key>.pkl`` files under the
cache path, each with an optional ``<key>.meta.json`` sidecar describing the
inputs (potential fingerprint, k-range, sample count).
"""

import json
import logging
import pickle
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Tuple

import pandas as pd

from .settings import get_cache_path

logger = logging.getLogger(__name__)

LISTING_COLUMNS = ["cache_key", "file_path", "size_mb", "created", "modified"]

_session_cache: Dict[str, Any] = {}


def _detached(value: Any) -> Any:
    # frames are copied on the way in and out
    return value.copy() if isinstance(value, pd.DataFrame) else value


def session_cache_get(cache_key: str) -> Optional[Any]:
    return _detached(_session_cache.get(cache_key))


def session_cache_set(cache_key: str, value: Any) -> Any:
    _session_cache[cache_key] = _detached(value)
    return value


def _session_cache_remove(cache_keys: Optional[Iterable[str]] = None) -> None:
    """Drop the given keys from the session layer, or all of them if None."""
    if cache_keys is None:
        _session_cache.clear()
        return
    for cache_key in cache_keys:
        _session_cache.pop(cache_key, None)


def _entry_paths(cache_key: str) -> Tuple[Path, Path]:
    root = Path(get_cache_path())
    return root / f"{cache_key}.pkl", root / f"{cache_key}.meta.json"


def get_cached_data(cache_key: str) -> Optional[Any]:
    """
    Load an entry from the file cache.

    Unreadable entries are deleted and reported as missing.
    """
    data_file, _ = _entry_paths(cache_key)
    if not data_file.exists():
        return None
    try:
        with open(data_file, "rb") as f:
            return pickle.load(f)
    except Exception as e:
        logger.warning(f"Dropping unreadable cache entry {cache_key}: {e}")
        data_file.unlink(missing_ok=True)
        return None


def cache_data(cache_key: str, data: Any, metadata: Optional[dict] = None) -> None:
    """
    Write an entry to the file cache.

    Parameters
    ----------
    cache_key : str
        Entry name, usually an md5 digest of the inputs.
    data : Any
        Picklable result.
    metadata : dict, optional
        JSON-serialisable description written to the sidecar.
    """
    data_file, meta_file = _entry_paths(cache_key)
    try:
        data_file.parent.mkdir(parents=True, exist_ok=True)
        with open(data_file, "wb") as f:
            pickle.dump(data, f)
        if metadata is not None:
            meta_file.write_text(json.dumps(metadata, default=str))
    except Exception as e:
        logger.warning(f"Could not cache {cache_key}: {e}")
        return
    logger.debug(f"Cached {cache_key} in {data_file.parent}")


def get_cache_metadata(cache_key: str) -> Optional[dict]:
    _, meta_file = _entry_paths(cache_key)
    try:
        return json.loads(meta_file.read_text())
    except (OSError, ValueError):
        return None


def list_cache() -> pd.DataFrame:
    """
    List the file cache.

    Returns
    -------
    pd.DataFrame
        One row per entry with cache_key, file_path, size_mb, created and
        modified, followed by every field of its metadata sidecar (kind,
        kmin, kmax, n, the potential fingerprint, ...).

    Examples
    --------
    >>> import pynnls
    >>> listing = pynnls.list_cache()
    >>> list(listing.columns[:2])
    ['cache_key', 'file_path']
    """
    root = Path(get_cache_path())
    if not root.exists():
        return pd.DataFrame(columns=LISTING_COLUMNS)

    rows = []
    for data_file in sorted(root.glob("*.pkl")):
        stat = data_file.stat()
        row = {
            "cache_key": data_file.stem,
            "file_path": str(data_file),
            "size_mb": round(stat.st_size / 2**20, 3),
            "created": pd.Timestamp.fromtimestamp(stat.st_ctime),
            "modified": pd.Timestamp.fromtimestamp(stat.st_mtime),
        }
        row.update(get_cache_metadata(data_file.stem) or {})
        rows.append(row)
    if not rows:
        return pd.DataFrame(columns=LISTING_COLUMNS)
    return pd.DataFrame(rows)


def _delete_entry(cache_key: str) -> bool:
    data_file, meta_file = _entry_paths(cache_key)
    if not data_file.exists():
        return False
    try:
        data_file.unlink()
        meta_file.unlink(missing_ok=True)
    except OSError as e:
        logger.warning(f"Failed to remove cache entry {cache_key}: {e}")
        return False
    return True


def remove_from_cache(
    cache_keys: Optional[Iterable[str]] = None, all_cache: bool = False
) -> int:
    """
    Remove entries from both cache layers.

    Parameters
    ----------
    cache_keys : iterable of str, optional
        Entries to remove. Ignored when ``all_cache`` is True.
    all_cache : bool, default False
        Remove every entry.

    Returns
    -------
    int
        Number of files removed from disk.
    """
    if all_cache:
        _session_cache_remove()
    elif cache_keys:
        cache_keys = list(cache_keys)
        _session_cache_remove(cache_keys)
    else:
        logger.info("No cache keys given; nothing removed")
        return 0

    root = Path(get_cache_path())
    if not root.exists():
        return 0
    if all_cache:
        cache_keys = [data_file.stem for data_file in root.glob("*.pkl")]

    removed = 0
    for cache_key in cache_keys:
        if _delete_entry(cache_key):
            removed += 1
        elif not all_cache:
            logger.info(f"Cache key not found: {cache_key}")
    logger.info(f"Removed {removed} cached entries from {root}")
    return removed


def clear_cache() -> int:
    """Remove every cached entry; same as ``remove_from_cache(all_cache=True)``."""
    return remove_from_cache(all_cache=True)
