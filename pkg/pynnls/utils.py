"""
Utility functions for pynnls: input validation and tabular output.
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Union

import numpy as np
import pandas as pd

from .errors import ConfigError

FLOAT_FORMAT = "%.17g"


def validate_sigma(sigma: Any) -> int:
    """
    Validate the sign of the nonlinearity.

    Raises
    ------
    ConfigError
        If sigma is not +1 or -1.
    """
    if sigma not in (1, -1):
        raise ConfigError(f"sigma must be +1 or -1, got {sigma!r}", key="sigma")
    return int(sigma)


def validate_positive(value: Any, name: str) -> float:
    """Validate a strictly positive finite number."""
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number, got {value!r}", key=name)
    if not (value > 0 and math.isfinite(value)):
        raise ConfigError(f"{name} must be positive and finite, got {value}", key=name)
    return value


def validate_symmetric_grid(x: np.ndarray) -> None:
    """
    Check that x is uniform, symmetric about 0 and has an odd node count.

    Raises
    ------
    ConfigError
        Describing which property fails.
    """
    n = len(x)
    if n < 3 or n % 2 == 0:
        raise ConfigError(
            f"grid needs an odd number (>= 3) of nodes so x = 0 is a node, got {n}",
            key="n",
        )
    L = x[-1]
    if not L > 0:
        raise ConfigError("grid must increase from -L to L with L > 0", key="L")
    if np.max(np.abs(x + x[::-1])) > 1e-10 * L:
        raise ConfigError("grid is not symmetric about x = 0", key="x")
    steps = np.diff(x)
    if np.max(np.abs(steps - steps.mean())) > 1e-8 * steps.mean():
        raise ConfigError("grid spacing is not uniform", key="x")


def validate_increasing(values: Iterable[float], name: str) -> List[float]:
    """Validate a non-empty, strictly increasing list of numbers."""
    values = [float(v) for v in values]
    if not values:
        raise ConfigError(f"{name} must not be empty", key=name)
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError(f"{name} must be strictly increasing", key=name)
    return values


def require_keys(doc: Dict[str, Any], keys: Iterable[str], context: str) -> None:
    """Raise ConfigError naming the first missing key."""
    for key in keys:
        if key not in doc:
            raise ConfigError(f"Missing key '{key}' in {context}", key=key)


def parse_complex(value: Any, name: str) -> complex:
    """
    Read a complex number from a JSON value.

    Accepts a number or a ``[re, im]`` pair.
    """
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError(f"{name} must be a number or [re, im] pair", key=name)
        try:
            return complex(float(value[0]), float(value[1]))
        except (TypeError, ValueError):
            raise ConfigError(f"{name} must hold numbers", key=name)
    if isinstance(value, bool):
        raise ConfigError(f"{name} must be a number", key=name)
    try:
        return complex(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number or [re, im] pair", key=name)


def complex_pairs(values: Iterable[complex]) -> List[List[float]]:
    """Serialise complex numbers as ``[re, im]`` pairs."""
    return [[float(np.real(v)), float(np.imag(v))] for v in values]


def split_complex(frame: pd.DataFrame, columns: Iterable[str]) -> pd.DataFrame:
    """Replace complex columns by ``re_<name>`` / ``im_<name>`` pairs in place order."""
    out = {}
    columns = set(columns)
    for name in frame.columns:
        if name in columns:
            values = frame[name].to_numpy(dtype=complex)
            out[f"re_{name}"] = values.real
            out[f"im_{name}"] = values.imag
        else:
            out[name] = frame[name].to_numpy()
    return pd.DataFrame(out)


def write_csv(frame: pd.DataFrame, path: Union[str, Path]) -> Path:
    """
    Write a table with 17 significant digits and '\\n' line endings.

    Complex columns are split into real and imaginary parts first.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    complex_columns = [c for c in frame.columns if np.iscomplexobj(frame[c].to_numpy())]
    if complex_columns:
        frame = split_complex(frame, complex_columns)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def _json_default(value: Any):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def write_json(doc: Dict[str, Any], path: Union[str, Path]) -> Path:
    """Write a JSON document with sorted keys (deterministic output)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as f:
        json.dump(doc, f, indent=2, sort_keys=True, default=_json_default)
        f.write("\n")
    return path
