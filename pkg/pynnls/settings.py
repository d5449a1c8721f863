"""
User settings and configuration for pynnls.

Numerical tolerances, the cache location and the T(z) index convention are
resolved in the order session value, environment variable, config file
(``~/.pynnls/config.json``), built-in default.
"""

import copy
import os
import json
import logging
from pathlib import Path
from typing import Optional, Dict, Any

from .errors import ConfigError

logger = logging.getLogger(__name__)


DEFAULT_TOLERANCES: Dict[str, float] = {
    # Volterra / Picard iteration
    "picard_tol": 1e-12,
    "picard_max_iter": 200,
    "bound_slack": 1.1,
    # spectral singularities and zero search
    "zero_denominator": 1e-12,
    "zero_residual": 1e-10,
    "min_cell": 1e-4,
    "winding_slack": 0.1,
    "min_pole_height": 1e-3,
    "mirror_match": 1e-8,
    "complex_step": 1e-6,
    "min_derivative": 1e-6,
    "threshold_gap": 1e-9,
    "pole_hit": 1e-12,
    # special functions
    "gamma_pole": 1e-12,
    "cut_distance": 1e-14,
    "log_zero": 1e-300,
    # phase function quadrature
    "vanishing_jump": 1e-12,
    "quad_abs": 1e-10,
    "quad_limit": 400,
    "nu_truncation": 1e-12,
    "max_grid_spacing": 0.01,
    # reflectionless system
    "condition_max": 1e12,
    "exponent_max": 700.0,
    # dispersive term
    "zero_reflection": 1e-13,
    "zero_nu": 1e-10,
    # PDE oracle
    "boundary_mass": 1e-8,
    "boundary_fraction": 0.05,
}

T_CONVENTIONS = ("delta_plus", "spectrum")

# Global variables to store settings
_TOLERANCES: Dict[str, float] = {}
_CACHE_PATH = None
_T_CONVENTION = None
_FILE_LAYER: Dict[str, Any] = {}
_ENV_TOLERANCES: Dict[str, Any] = {}


# Config file location
def _get_config_path() -> Path:
    """Get the path to the config file."""
    return Path.home() / ".pynnls" / "config.json"


def _file_layer() -> Dict[str, Any]:
    """
    Parsed config file, read once per session.

    The result is shared; callers must not modify it. ``_save_config`` and
    ``_reset_session`` drop it, so edits made to the file by hand are seen
    from the next session on.
    """
    try:
        config_path = _get_config_path()
    except (OSError, RuntimeError):
        return {}
    if _FILE_LAYER.get("path") == config_path:
        return _FILE_LAYER["config"]
    config: Dict[str, Any] = {}
    if config_path.exists():
        try:
            with open(config_path, "r") as f:
                config = json.load(f)
        except (json.JSONDecodeError, IOError) as e:
            logger.warning(f"Ignoring unreadable config file {config_path}: {e}")
        if not isinstance(config, dict):
            config = {}
    _FILE_LAYER.update(path=config_path, config=config)
    return config


def _load_config() -> Dict[str, Any]:
    """Load configuration from file."""
    return copy.deepcopy(_file_layer())


def _save_config(config: Dict[str, Any]) -> None:
    """Save configuration to file."""
    config_path = _get_config_path()
    _FILE_LAYER.clear()
    try:
        config_path.parent.mkdir(parents=True, exist_ok=True, mode=0o700)
        with open(config_path, "w") as f:
            json.dump(config, f, indent=2)
        config_path.chmod(0o600)
    except IOError as e:
        logger.warning(f"Could not save config file: {e}")


def _coerce_tolerance(name: str, value: Any) -> float:
    if name not in DEFAULT_TOLERANCES:
        raise ConfigError(
            f"Unknown tolerance '{name}'",
            key=name,
            suggestion=f"Known tolerances: {', '.join(sorted(DEFAULT_TOLERANCES))}",
        )
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"Tolerance '{name}' must be a number", key=name)
    if not value > 0:
        raise ConfigError(f"Tolerance '{name}' must be positive, got {value}", key=name)
    if name in ("picard_max_iter", "quad_limit"):
        value = int(value)
    return value


def _parse_env_tolerances() -> Dict[str, float]:
    """Parse PYNNLS_TOLERANCES (``name=value,name=value``)."""
    raw = os.environ.get("PYNNLS_TOLERANCES", "")
    if _ENV_TOLERANCES.get("raw") == raw:
        return _ENV_TOLERANCES["parsed"]
    overrides = {}
    for item in filter(None, (part.strip() for part in raw.split(","))):
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(
                f"PYNNLS_TOLERANCES entry '{item}' is not of the form name=value",
                key="PYNNLS_TOLERANCES",
            )
        overrides[name.strip()] = _coerce_tolerance(name.strip(), value)
    _ENV_TOLERANCES.update(raw=raw, parsed=overrides)
    return overrides


def get_tolerance(name: str) -> float:
    """
    Get the active value of a numerical tolerance.

    Parameters
    ----------
    name : str
        Registry name, e.g. ``"picard_tol"``.

    Returns
    -------
    float
        Session override, else environment, else config file, else default.

    Raises
    ------
    ConfigError
        If ``name`` is not a known tolerance.
    """
    if name not in DEFAULT_TOLERANCES:
        _coerce_tolerance(name, 1.0)
    if name in _TOLERANCES:
        return _TOLERANCES[name]

    env = _parse_env_tolerances()
    if name in env:
        return env[name]

    config_tols = _file_layer().get("tolerances", {})
    if name in config_tols:
        return _coerce_tolerance(name, config_tols[name])

    return DEFAULT_TOLERANCES[name]


def set_tolerance(name: str, value: float, install: bool = False) -> None:
    """
    Override a numerical tolerance.

    Parameters
    ----------
    name : str
        Registry name.
    value : float
        New positive value.
    install : bool, default False
        If True, saves the override persistently for future sessions.

    Examples
    --------
    >>> import pynnls
    >>> pynnls.set_tolerance("picard_tol", 1e-13)
    """
    value = _coerce_tolerance(name, value)
    _TOLERANCES[name] = value

    if install:
        config = _load_config()
        config.setdefault("tolerances", {})[name] = value
        _save_config(config)
        print(f"Tolerance {name} = {value} set and saved persistently.")
    else:
        logger.debug(f"Tolerance {name} = {value} set for current session")


def reset_tolerances() -> None:
    """Drop every session override (environment and config still apply)."""
    _TOLERANCES.clear()


def tolerance_snapshot() -> Dict[str, float]:
    """Return every tolerance with its active value, for run manifests."""
    return {name: get_tolerance(name) for name in sorted(DEFAULT_TOLERANCES)}


def show_tolerances() -> None:
    """
    Display the active tolerances, marking session overrides.
    """
    for name, value in tolerance_snapshot().items():
        marker = " (session)" if name in _TOLERANCES else ""
        print(f"{name:20s} {value:g}{marker}")


def set_t_convention(convention: str) -> None:
    """
    Choose how the undefined symbols s_j and t_j of T(z) are indexed.

    Parameters
    ----------
    convention : {"delta_plus", "spectrum"}
        ``"delta_plus"`` indexes into the Re-ordered Delta_1^+ / Delta_2^+
        lists; ``"spectrum"`` indexes into the full Re-ordered first-quadrant
        omega list and fourth-quadrant gamma list.
    """
    global _T_CONVENTION
    if convention not in T_CONVENTIONS:
        raise ConfigError(
            f"Unknown T convention '{convention}'",
            key="t_convention",
            suggestion=f"Use one of {T_CONVENTIONS}",
        )
    _T_CONVENTION = convention


def get_t_convention() -> str:
    """Get the active T(z) index convention."""
    if _T_CONVENTION is not None:
        return _T_CONVENTION
    env = os.environ.get("PYNNLS_T_CONVENTION")
    if env in T_CONVENTIONS:
        return env
    config = _file_layer().get("t_convention")
    if config in T_CONVENTIONS:
        return config
    return "delta_plus"


def set_cache_path(cache_path: str, install: bool = False) -> None:
    """
    Set the local cache path for computed reflection grids.

    Parameters
    ----------
    cache_path : str
        Path to directory for cached results.
    install : bool, default False
        If True, saves the cache path persistently for future sessions.

    Examples
    --------
    >>> import pynnls
    >>> pynnls.set_cache_path("./nnls_cache")
    """
    global _CACHE_PATH

    cache_path = Path(cache_path).expanduser().resolve()
    cache_path.mkdir(parents=True, exist_ok=True)
    _CACHE_PATH = str(cache_path)

    if install:
        config = _load_config()
        config["cache_path"] = str(cache_path)
        _save_config(config)
        print(f"Cache path set to: {cache_path} and saved persistently.")
    else:
        logger.debug(f"Cache path set to: {cache_path} for current session")


def get_cache_path() -> str:
    """
    Get the current cache path.

    Returns
    -------
    str
        The current cache path.
    """
    global _CACHE_PATH

    if _CACHE_PATH is not None:
        return _CACHE_PATH

    env_path = os.environ.get("PYNNLS_CACHE_PATH")
    if env_path:
        _CACHE_PATH = env_path
        return _CACHE_PATH

    config_path = _file_layer().get("cache_path")
    if config_path:
        _CACHE_PATH = config_path
        return _CACHE_PATH

    default_path = Path.home() / ".pynnls_cache"
    default_path.mkdir(parents=True, exist_ok=True)
    _CACHE_PATH = str(default_path)

    return _CACHE_PATH


def show_cache_path() -> None:
    """
    Display the current cache path.
    """
    print(f"Current cache path: {get_cache_path()}")


def _reset_session(cache_path: Optional[str] = None) -> None:
    """Clear all session state (used by the CLI between commands and by tests)."""
    global _CACHE_PATH, _T_CONVENTION
    _TOLERANCES.clear()
    _CACHE_PATH = cache_path
    _T_CONVENTION = None
    _FILE_LAYER.clear()
    _ENV_TOLERANCES.clear()
