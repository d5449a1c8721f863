"""
Initial data for the nonlocal NLS equation.

A ``Potential`` is a complex field sampled on a uniform grid symmetric about
x = 0, with the sign sigma of the nonlinearity and a decay class that
decides whether scattering quantities may be continued off the real axis.
"""

import enum
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid

from .errors import ConfigError
from .utils import (
    parse_complex,
    require_keys,
    validate_positive,
    validate_sigma,
    validate_symmetric_grid,
)

logger = logging.getLogger(__name__)

POTENTIAL_KINDS = ("gaussian", "box", "sech", "samples", "reflectionless")

# default grid for synthesised reflectionless data; the spacing shrinks with
# the peak of |q|
REFLECTIONLESS_L = 20.0
REFLECTIONLESS_N = 4001
REFLECTIONLESS_SPACING = 0.01


class DecayClass(enum.Enum):
    """How fast q0 decays, which bounds how far b(k) may leave the real axis."""

    COMPACT_SUPPORT = "compact_support"
    EXPONENTIAL = "exponential"
    GENERIC = "generic"


@dataclass(frozen=True, eq=False)
class Potential:
    """
    Complex initial datum q0 sampled on x_j in [-L, L].

    Attributes
    ----------
    x : numpy.ndarray
        Uniform nodes with x_j = -x_{n-1-j}; odd count so x = 0 is a node.
    values : numpy.ndarray
        Complex samples q0(x_j).
    sigma : int
        Sign of the nonlinearity, +1 or -1.
    decay_class : DecayClass
        Decay declaration used to gate complex-k continuation.
    decay_rate : float
        Rate a in |q0(x)| <~ exp(-a|x|) for the exponential class
        (``inf`` for super-exponential decay).
    jumps : tuple of float
        Nodes where q0 jumps; their samples hold the mean of the one-sided
        limits.
    """

    x: np.ndarray
    values: np.ndarray
    sigma: int = 1
    decay_class: DecayClass = DecayClass.GENERIC
    decay_rate: float = 0.0
    label: str = "samples"
    jumps: Tuple[float, ...] = ()

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        values = np.array(self.values, dtype=complex)
        if x.shape != values.shape or x.ndim != 1:
            raise ConfigError("x and values must be 1-d arrays of equal length")
        validate_symmetric_grid(x)
        validate_sigma(self.sigma)
        x.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "sigma", int(self.sigma))
        object.__setattr__(self, "decay_class", DecayClass(self.decay_class))
        object.__setattr__(self, "jumps", tuple(float(j) for j in self.jumps))
        if self.decay_class is DecayClass.EXPONENTIAL and not self.decay_rate > 0:
            raise ConfigError("exponential decay class needs a positive decay_rate")

    @property
    def n(self) -> int:
        return len(self.x)

    @property
    def L(self) -> float:
        return float(self.x[-1])

    @property
    def h(self) -> float:
        return float(self.x[1] - self.x[0])

    def reflected_conj(self) -> np.ndarray:
        """The lower-left Lax entry -sigma * conj(q0(-x)) on the grid."""
        return -self.sigma * np.conj(self.values[::-1])

    def allows_continuation(self, k: complex) -> bool:
        """Whether b(k) may be evaluated at this complex k."""
        if k.imag == 0:
            return True
        if self.decay_class is DecayClass.COMPACT_SUPPORT:
            return True
        if self.decay_class is DecayClass.EXPONENTIAL:
            return abs(k.imag) < self.decay_rate / 2
        return False

    def is_jump(self, x: float) -> bool:
        """Whether q0 jumps at x."""
        return any(abs(x - j) <= 1e-9 * self.h for j in self.jumps)

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def norms(self) -> Dict[str, float]:
        """
        Weighted norms of q0 used by the solver diagnostics.

        Returns
        -------
        dict
            ``L1``, ``L11`` (weight 1+|x|), ``L2`` and ``L2_half``
            (L2 norm of (1+|x|)^{1/2} q0), all by the trapezoid rule.
        """
        absq = np.abs(self.values)
        weight = 1.0 + np.abs(self.x)
        return {
            "L1": float(trapezoid(absq, self.x)),
            "L11": float(trapezoid(weight * absq, self.x)),
            "L2": float(np.sqrt(trapezoid(absq**2, self.x))),
            "L2_half": float(np.sqrt(trapezoid(weight * absq**2, self.x))),
        }

    def neumann_bound(self) -> Dict[str, float]:
        """Neumann-series bounds on the Jost columns and their k-derivatives."""
        norms = self.norms()
        column = float(np.exp(norms["L1"]))
        return {"column": column, "derivative": 2.0 * norms["L11"] * column}

    def fingerprint(self) -> Dict[str, Any]:
        """JSON-safe description used in cache keys and manifests."""
        return {
            "label": self.label,
            "sigma": self.sigma,
            "n": self.n,
            "L": self.L,
            "decay_class": self.decay_class.value,
            "decay_rate": self.decay_rate,
            "jumps": list(self.jumps),
        }


def make_grid(L: float, n: int) -> np.ndarray:
    """Uniform symmetric grid of n (odd) nodes on [-L, L]."""
    validate_positive(L, "L")
    if int(n) != n or n < 3 or n % 2 == 0:
        raise ConfigError(f"n must be an odd integer >= 3, got {n}", key="n")
    x = np.linspace(-L, L, int(n))
    # enforce exact symmetry of the nodes
    return 0.5 * (x - x[::-1])


def gaussian_potential(
    amplitude: complex = 0.1,
    width: float = 1.0,
    center: float = 0.0,
    sigma: int = 1,
    L: float = 12.0,
    n: int = 4801,
) -> Potential:
    """
    Gaussian datum q0(x) = amplitude * exp(-((x - center) / width)^2).

    Examples
    --------
    >>> from pynnls.potential import gaussian_potential
    >>> q0 = gaussian_potential(0.2, L=10.0, n=2001)
    >>> q0.decay_class.value
    'exponential'
    """
    validate_positive(width, "width")
    x = make_grid(L, n)
    values = complex(amplitude) * np.exp(-(((x - center) / width) ** 2))
    return Potential(
        x,
        values,
        sigma=sigma,
        decay_class=DecayClass.EXPONENTIAL,
        decay_rate=np.inf,
        label="gaussian",
    )


def box_potential(
    amplitude: complex = 0.3,
    left: float = -1.0,
    right: float = 0.0,
    sigma: int = 1,
    L: float = 2.0,
    n: int = 8001,
) -> Potential:
    """
    Box datum q0 = amplitude on [left, right], zero elsewhere.

    Nodes that coincide with a jump carry the mean of the one-sided values so
    the trapezoid rule stays second order across the discontinuity.
    """
    if not left < right:
        raise ConfigError("box needs left < right", key="left")
    x = make_grid(L, n)
    h = x[1] - x[0]
    amplitude = complex(amplitude)
    values = np.where((x > left) & (x < right), amplitude, 0j)
    on_jump = (np.abs(x - left) < 1e-9 * h) | (np.abs(x - right) < 1e-9 * h)
    values = np.where(on_jump, 0.5 * amplitude, values)
    return Potential(
        x,
        values,
        sigma=sigma,
        decay_class=DecayClass.COMPACT_SUPPORT,
        label="box",
        jumps=(left, right),
    )


def sech_potential(
    amplitude: complex = 0.5,
    width: float = 1.0,
    sigma: int = 1,
    L: float = 30.0,
    n: int = 6001,
) -> Potential:
    """Hyperbolic-secant datum q0(x) = amplitude * sech(x / width)."""
    validate_positive(width, "width")
    x = make_grid(L, n)
    values = complex(amplitude) / np.cosh(x / width)
    return Potential(
        x,
        values,
        sigma=sigma,
        decay_class=DecayClass.EXPONENTIAL,
        decay_rate=1.0 / width,
        label="sech",
    )


def read_samples_csv(path: Union[str, Path]) -> pd.DataFrame:
    """Read (x, Re q, Im q) rows, with or without a header line."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Samples file not found: {path}", key="path")
    try:
        frame = pd.read_csv(path, header=None, comment="#")
        try:
            frame = frame.astype(float)
        except ValueError:
            # first row was a header
            frame = pd.read_csv(path, comment="#").astype(float)
    except (OSError, ValueError) as e:
        raise ConfigError(f"Unreadable samples file {path}: {e}", key="path")
    if frame.empty:
        raise ConfigError(f"Samples file {path} has no rows", key="path")
    if frame.shape[1] != 3:
        raise ConfigError(
            f"Samples CSV must have 3 columns (x, Re q, Im q), found {frame.shape[1]}",
            key="path",
        )
    frame.columns = ["x", "re_q", "im_q"]
    return frame


def _decay_from_document(doc: Dict[str, Any]):
    decay = doc.get("decay")
    if decay is None:
        return DecayClass.GENERIC, 0.0
    try:
        decay_class = DecayClass(decay.get("class", "generic"))
    except (ValueError, AttributeError):
        raise ConfigError(f"Unknown decay class in {decay!r}", key="decay")
    rate = float(decay.get("rate", 0.0))
    if decay_class is DecayClass.EXPONENTIAL and not rate > 0:
        raise ConfigError("exponential decay needs a positive 'rate'", key="decay")
    return decay_class, rate


def potential_from_dict(
    doc: Dict[str, Any], base_dir: Optional[Path] = None
) -> Potential:
    """
    Build a Potential from a JSON-style document.

    Parameters
    ----------
    doc : dict
        ``{"kind": "gaussian"|"box"|"sech"|"samples"|"reflectionless",
        parameters..., "sigma": +-1, "L": float, "n": int}``.
    base_dir : Path, optional
        Directory against which relative sample paths are resolved.

    Returns
    -------
    Potential

    Raises
    ------
    ConfigError
        Naming the offending key when the document is malformed.
    """
    if not isinstance(doc, dict):
        raise ConfigError("potential must be a JSON object", key="potential")
    require_keys(doc, ["kind"], context="potential")
    kind = doc["kind"]
    if kind not in POTENTIAL_KINDS:
        raise ConfigError(
            f"Unknown potential kind '{kind}'",
            key="kind",
            suggestion=f"Use one of {POTENTIAL_KINDS}",
        )
    sigma = doc.get("sigma", 1)
    validate_sigma(sigma)
    grid = {}
    if "L" in doc:
        grid["L"] = float(doc["L"])
    if "n" in doc:
        grid["n"] = int(doc["n"])

    try:
        if kind == "gaussian":
            return gaussian_potential(
                amplitude=parse_complex(doc.get("amplitude", 0.1), "amplitude"),
                width=float(doc.get("width", 1.0)),
                center=float(doc.get("center", 0.0)),
                sigma=sigma,
                **grid,
            )
        if kind == "box":
            return box_potential(
                amplitude=parse_complex(doc.get("amplitude", 0.3), "amplitude"),
                left=float(doc.get("left", -1.0)),
                right=float(doc.get("right", 0.0)),
                sigma=sigma,
                **grid,
            )
        if kind == "sech":
            return sech_potential(
                amplitude=parse_complex(doc.get("amplitude", 0.5), "amplitude"),
                width=float(doc.get("width", 1.0)),
                sigma=sigma,
                **grid,
            )
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"Invalid {kind} parameters: {e}", key=kind)

    decay_class, rate = _decay_from_document(doc)
    if kind == "samples":
        if "path" in doc:
            path = Path(doc["path"])
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            frame = read_samples_csv(path)
            x = frame["x"].to_numpy()
            values = frame["re_q"].to_numpy() + 1j * frame["im_q"].to_numpy()
        else:
            require_keys(doc, ["x", "values"], context="samples potential")
            try:
                x = np.asarray(doc["x"], dtype=float)
            except (TypeError, ValueError) as e:
                raise ConfigError(f"Sample nodes must be numbers: {e}", key="x")
            if not isinstance(doc["values"], (list, tuple)):
                raise ConfigError("Sample values must be a list", key="values")
            values = np.array(
                [parse_complex(v, "values") for v in doc["values"]], dtype=complex
            )
        if x.ndim != 1 or x.size == 0:
            raise ConfigError("Sample nodes must be a non-empty list", key="x")
        return Potential(
            x,
            values,
            sigma=sigma,
            decay_class=decay_class,
            decay_rate=rate,
            jumps=tuple(float(j) for j in doc.get("jumps", ())),
        )

    # reflectionless: synthesise the multi-soliton field at t = 0
    from .soliton import ReflectionlessData, q_sol_grid
    from .spectrum import DiscreteSpectrum

    if "spectrum_path" in doc:
        path = Path(doc["spectrum_path"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        try:
            with open(path) as f:
                spec_doc = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Malformed JSON in {path}: {e}", key="spectrum_path")
        except OSError as e:
            raise ConfigError(
                f"Cannot read spectrum file {path}: {e}",
                key="spectrum_path",
                suggestion="Relative paths are resolved against the config file",
            )
    else:
        require_keys(doc, ["spectrum"], context="reflectionless potential")
        spec_doc = doc["spectrum"]
    if not isinstance(spec_doc, dict):
        raise ConfigError("spectrum must be a JSON object", key="spectrum")
    spec_doc = dict(spec_doc)
    spec_doc.setdefault("sigma", sigma)
    spectrum = DiscreteSpectrum.from_dict(spec_doc)
    data = ReflectionlessData.from_spectrum(spectrum)
    t = float(doc.get("t", 0.0))
    L = grid.get("L", REFLECTIONLESS_L)
    x = make_grid(L, grid.get("n", REFLECTIONLESS_N))
    values = q_sol_grid(data, x, t)
    if "n" not in grid:
        n = reflectionless_grid_size(L, float(np.max(np.abs(values), initial=0.0)))
        if n > x.size:
            logger.info(f"Refining reflectionless grid to n = {n}")
            x = make_grid(L, n)
            values = q_sol_grid(data, x, t)
    heights = [abs(z.imag) for z in np.concatenate([data.poles1, data.poles2])]
    rate = 2.0 * min(heights) if heights else np.inf
    return Potential(
        x,
        values,
        sigma=spectrum.sigma,
        decay_class=DecayClass.EXPONENTIAL,
        decay_rate=rate,
        label="reflectionless",
    )


def reflectionless_grid_size(L: float, peak: float) -> int:
    """
    Default node count for a synthesised reflectionless datum on [-L, L].

    The spacing is ``REFLECTIONLESS_SPACING / max(1, peak)`` so that tall
    multi-soliton fields keep the same number of nodes per unit of |q|.
    """
    spacing = REFLECTIONLESS_SPACING / max(1.0, peak)
    n = int(np.ceil(2.0 * L / spacing - 1e-9)) + 1
    return max(n + (n % 2 == 0), REFLECTIONLESS_N)


def load_potential(path: Union[str, Path]) -> Potential:
    """Read a potential document from a JSON file."""
    path = Path(path)
    try:
        with open(path) as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Malformed JSON in {path}: {e}", key=str(path))
    except OSError as e:
        raise ConfigError(f"Cannot read {path}: {e}", key=str(path))
    return potential_from_dict(doc, base_dir=path.parent)
