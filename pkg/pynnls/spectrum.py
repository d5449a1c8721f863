"""
Discrete spectrum: zeros of a1 (upper half-plane) and a2 (lower half-plane),
their norming constants, and the classification of poles against the
stationary point -xi.
"""

import cmath
import functools
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    BoundaryZero,
    ConfigError,
    ContinuationInvalid,
    InconsistentData,
    MultiplicityError,
    NearDegenerateDerivative,
    OnThresholdError,
    PartitionError,
    PoleHit,
)
from .potential import Potential
from .scattering import (
    JostSide,
    _jost_at_node,
    a1_analytic,
    a1_function,
    a2_analytic,
    a2_function,
    complex_derivative,
    scattering_sample,
)
from .settings import get_t_convention, get_tolerance
from .utils import complex_pairs, parse_complex, validate_sigma

logger = logging.getLogger(__name__)

# off-centre split fractions tried in turn when a cut line grazes a zero
_SPLIT_FRACTIONS = (0.5123, 0.4137, 0.5871, 0.3519)
_INITIAL_EDGE_POINTS = 16
_MAX_EDGE_DEPTH = 14
_MAX_ARG_STEP = math.pi / 4


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned rectangle [re_min, re_max] x [im_min, im_max]."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"degenerate rectangle {self}")

    @property
    def center(self) -> complex:
        return complex(
            0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max)
        )

    @property
    def size(self) -> float:
        return max(self.re_max - self.re_min, self.im_max - self.im_min)

    def corners(self) -> List[complex]:
        """Corners in counter-clockwise order starting bottom-left."""
        return [
            complex(self.re_min, self.im_min),
            complex(self.re_max, self.im_min),
            complex(self.re_max, self.im_max),
            complex(self.re_min, self.im_max),
        ]

    def contains(self, z: complex, margin: float = 0.0) -> bool:
        return (
            self.re_min - margin <= z.real <= self.re_max + margin
            and self.im_min - margin <= z.imag <= self.im_max + margin
        )

    def split(self, fraction: float = 0.5) -> Tuple["Rectangle", "Rectangle"]:
        """Cut across the longer side at the given fraction."""
        if self.re_max - self.re_min >= self.im_max - self.im_min:
            cut = self.re_min + fraction * (self.re_max - self.re_min)
            return (
                Rectangle(self.re_min, cut, self.im_min, self.im_max),
                Rectangle(cut, self.re_max, self.im_min, self.im_max),
            )
        cut = self.im_min + fraction * (self.im_max - self.im_min)
        return (
            Rectangle(self.re_min, self.re_max, self.im_min, cut),
            Rectangle(self.re_min, self.re_max, cut, self.im_max),
        )

    def conjugate(self) -> "Rectangle":
        """Mirror image under z -> conj(z)."""
        return Rectangle(self.re_min, self.re_max, -self.im_max, -self.im_min)


# --------------------------------------------------------------------------
# Argument principle
# --------------------------------------------------------------------------


def _edge_increment(f, a: complex, b: complex, tol: float) -> float:
    """Total argument change of f along the segment a -> b."""
    points = [a + (b - a) * s for s in np.linspace(0.0, 1.0, _INITIAL_EDGE_POINTS + 1)]
    total = 0.0
    for start, end in zip(points, points[1:]):
        stack = [(start, end, 0)]
        while stack:
            za, zb, depth = stack.pop()
            fa, fb = f(za), f(zb)
            for z, value in ((za, fa), (zb, fb)):
                if abs(value) <= tol:
                    raise BoundaryZero(f"|f({z})| = {abs(value):.2e} on the contour")
            step = cmath.phase(fb / fa)
            if abs(step) > _MAX_ARG_STEP:
                if depth >= _MAX_EDGE_DEPTH:
                    raise BoundaryZero(
                        f"argument jumps by {step:.2f} between {za} and {zb}"
                    )
                mid = 0.5 * (za + zb)
                # right half first so the left half is processed first
                stack.append((mid, zb, depth + 1))
                stack.append((za, mid, depth + 1))
            else:
                total += step
    return total


def winding_number(
    f: Callable[[complex], complex], region: Rectangle, tol: Optional[float] = None
) -> int:
    """
    Number of zeros of f inside ``region`` by the argument principle.

    Raises
    ------
    BoundaryZero
        If a zero lies on or near the boundary, detected either as a tiny
        |f| on the contour or as a winding integral that is not within
        ``winding_slack`` of an integer.
    """
    tol = get_tolerance("zero_residual") if tol is None else tol
    corners = region.corners()
    total = sum(
        _edge_increment(f, a, b, tol)
        for a, b in zip(corners, corners[1:] + corners[:1])
    )
    winding = total / (2.0 * math.pi)
    nearest = round(winding)
    if abs(winding - nearest) > get_tolerance("winding_slack"):
        raise BoundaryZero(f"winding integral {winding:.3f} is not an integer")
    return int(nearest)


def _newton(f, z0: complex, tol: float, max_iter: int = 60) -> Optional[complex]:
    z = z0
    for _ in range(max_iter):
        value = f(z)
        if abs(value) <= tol:
            return z
        derivative = complex_derivative(f, z)
        if derivative == 0:
            return None
        z = z - value / derivative
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return None
    return z if abs(f(z)) <= tol else None


def _search(
    f, region: Rectangle, count: int, tol: float, min_cell: float
) -> List[complex]:
    if count == 0:
        return []
    if count == 1:
        z = _newton(f, region.center, tol)
        if z is not None and region.contains(z, margin=1e-9):
            return [z]
    if region.size < min_cell:
        if count >= 2:
            raise MultiplicityError(region.center, count, region.size)
        z = _newton(f, region.center, tol, max_iter=200)
        if z is None:
            raise BoundaryZero(
                f"Newton failed in the minimal cell around {region.center}"
            )
        return [z]

    for fraction in _SPLIT_FRACTIONS:
        try:
            halves = region.split(fraction)
            counts = [winding_number(f, half, tol) for half in halves]
        except BoundaryZero:
            continue
        if sum(counts) != count:
            continue
        zeros = []
        for half, sub_count in zip(halves, counts):
            zeros.extend(_search(f, half, sub_count, tol, min_cell))
        return zeros
    raise BoundaryZero(f"could not split {region} without touching a zero")


def locate_zeros(
    f: Callable[[complex], complex],
    region: Rectangle,
    tol: Optional[float] = None,
    min_cell: Optional[float] = None,
) -> List[complex]:
    """
    All zeros of an analytic function inside a rectangle.

    Parameters
    ----------
    f : callable
        Analytic function handle z -> f(z).
    region : Rectangle
        Search rectangle; its boundary must stay clear of zeros.
    tol : float, optional
        Residual |f(z)| accepted by the Newton polish (``zero_residual``).
    min_cell : float, optional
        Smallest cell size before a multi-zero cell is declared a
        multiplicity failure (``min_cell``).

    Returns
    -------
    list of complex
        Zeros ordered by real part; their number equals the winding number
        of f around the region.

    Raises
    ------
    BoundaryZero
        If a zero sits too close to a contour.
    MultiplicityError
        If a cell with two or more zeros cannot be split further.

    Examples
    --------
    >>> from pynnls.spectrum import Rectangle, locate_zeros
    >>> f = lambda z: (z - (1 + 0.5j)) * (z + 3)
    >>> zeros = locate_zeros(f, Rectangle(0, 2, 0.1, 1))
    >>> abs(zeros[0] - (1 + 0.5j)) < 1e-10
    True
    """
    tol = get_tolerance("zero_residual") if tol is None else tol
    min_cell = get_tolerance("min_cell") if min_cell is None else min_cell

    @functools.lru_cache(maxsize=None)
    def cached(z: complex) -> complex:
        return complex(f(z))

    total = winding_number(cached, region, tol)
    zeros = _search(cached, region, total, tol, min_cell)
    if len(zeros) != total:
        raise BoundaryZero(
            f"found {len(zeros)} zeros but the winding number is {total}"
        )
    evaluations = cached.cache_info().currsize
    logger.debug(f"{total} zeros in {region} after {evaluations} evaluations")
    return sorted(zeros, key=lambda z: (z.real, z.imag))


# --------------------------------------------------------------------------
# Discrete spectrum
# --------------------------------------------------------------------------


def _mirror(z: complex) -> complex:
    return -np.conj(z)


def _sorted_by_re(points: np.ndarray, *values: np.ndarray):
    order = np.argsort(points.real, kind="stable")
    return (points[order],) + tuple(v[order] for v in values)


def _is_self_mirror(z: complex) -> bool:
    return abs(z.real) <= get_tolerance("mirror_match") * max(1.0, abs(z))


def mirror_complete(
    points: Sequence[complex], b_values: Sequence[complex], sigma: int
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Close a pole list under z -> -conj(z) with consistent connection coefficients.

    The nonlocal reduction forces b(-conj z) = sigma / conj(b(z)); a pole on
    the imaginary axis is its own mirror and needs sigma = +1 and |b| = 1.

    Raises
    ------
    InconsistentData
        If a self-mirror pole violates its constraint.
    """
    out_points, out_b = [], []
    for z, b in zip(points, b_values):
        z, b = complex(z), complex(b)
        if _is_self_mirror(z):
            if sigma != 1 or abs(abs(b) - 1.0) > 1e-8:
                raise InconsistentData(
                    f"pole {z} on the imaginary axis needs sigma = +1 and |b| = 1, "
                    f"got sigma = {sigma}, |b| = {abs(b):.6g}"
                )
            out_points.append(complex(0.0, z.imag))
            out_b.append(b)
            continue
        if b == 0:
            raise InconsistentData(f"connection coefficient at {z} is zero")
        out_points.extend([z, _mirror(z)])
        out_b.extend([b, sigma / np.conj(b)])
    return np.array(out_points, dtype=complex), np.array(out_b, dtype=complex)


def reflectionless_constants(
    omegas: np.ndarray,
    b_omega: np.ndarray,
    gammas: np.ndarray,
    btilde_gamma: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Norming constants of reflectionless data, where a1 = prod(k - w)/prod(k - g).

    Returns
    -------
    (c, d)
        c_n = b(w_n)/a1'(w_n) and d_m = btilde(g_m)/a2'(g_m).

    Raises
    ------
    InconsistentData
        If the pole counts differ (a1 would not tend to 1).
    """
    if len(omegas) != len(gammas):
        raise InconsistentData(
            f"reflectionless data needs as many zeros of a1 ({len(omegas)}) as of "
            f"a2 ({len(gammas)})"
        )
    c = np.empty(len(omegas), dtype=complex)
    for i, w in enumerate(omegas):
        others = np.delete(omegas, i)
        derivative = np.prod(w - others) / np.prod(w - gammas)
        c[i] = b_omega[i] / derivative
    d = np.empty(len(gammas), dtype=complex)
    for j, g in enumerate(gammas):
        others = np.delete(gammas, j)
        derivative = np.prod(g - others) / np.prod(g - omegas)
        d[j] = btilde_gamma[j] / derivative
    return c, d


@dataclass(eq=False)
class DiscreteSpectrum:
    """
    Mirror-closed zero sets of a1 and a2 with their norming constants.

    Attributes
    ----------
    omegas, c : numpy.ndarray
        Zeros of a1 (Im > 0), ascending in Re, and c_n = b(w_n)/a1'(w_n).
    gammas, d : numpy.ndarray
        Zeros of a2 (Im < 0), ascending in Re, and
        d_m = -sigma conj(b(-conj g_m))/a2'(g_m).
    sigma : int
        Sign of the nonlinearity.
    b_omega, btilde_gamma : numpy.ndarray, optional
        Connection coefficients the constants were built from.
    """

    omegas: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    c: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    gammas: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    d: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    sigma: int = 1
    b_omega: Optional[np.ndarray] = None
    btilde_gamma: Optional[np.ndarray] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        validate_sigma(self.sigma)
        self.omegas = np.asarray(self.omegas, dtype=complex)
        self.c = np.asarray(self.c, dtype=complex)
        self.gammas = np.asarray(self.gammas, dtype=complex)
        self.d = np.asarray(self.d, dtype=complex)
        if self.omegas.shape != self.c.shape or self.gammas.shape != self.d.shape:
            raise ConfigError("each pole needs exactly one norming constant", key="c")
        if np.any(self.omegas.imag <= 0):
            raise ConfigError(
                "zeros of a1 must lie in the upper half-plane", key="omegas"
            )
        if np.any(self.gammas.imag >= 0):
            raise ConfigError(
                "zeros of a2 must lie in the lower half-plane", key="gammas"
            )
        extras_w, extras_g = (), ()
        if self.b_omega is not None:
            extras_w = (np.asarray(self.b_omega, complex),)
        if self.btilde_gamma is not None:
            extras_g = (np.asarray(self.btilde_gamma, complex),)
        sorted_w = _sorted_by_re(self.omegas, self.c, *extras_w)
        sorted_g = _sorted_by_re(self.gammas, self.d, *extras_g)
        self.omegas, self.c = sorted_w[:2]
        self.gammas, self.d = sorted_g[:2]
        if extras_w:
            self.b_omega = sorted_w[2]
        if extras_g:
            self.btilde_gamma = sorted_g[2]

    def __len__(self) -> int:
        return len(self.omegas) + len(self.gammas)

    def is_empty(self) -> bool:
        return len(self) == 0

    def mirror_residual(self) -> float:
        """Largest distance from a mirrored pole to the pole set (0 if closed)."""
        worst = 0.0
        for points in (self.omegas, self.gammas):
            for z in points:
                worst = max(worst, float(np.min(np.abs(points - _mirror(z)))))
        return worst

    @classmethod
    def from_connection_coefficients(
        cls,
        omegas: Sequence[complex],
        b_omega: Sequence[complex],
        gammas: Sequence[complex],
        btilde_gamma: Sequence[complex],
        sigma: int = 1,
    ) -> "DiscreteSpectrum":
        """
        Reflectionless spectrum from representative poles and b-values.

        Parameters
        ----------
        omegas : sequence of complex
            Zeros of a1 with Re >= 0 (mirrors are added).
        b_omega : sequence of complex
            b(w) at each of them.
        gammas : sequence of complex
            Zeros of a2 with Re >= 0 (mirrors are added).
        btilde_gamma : sequence of complex
            btilde(g) at each of them.
        sigma : int
            Sign of the nonlinearity.
        """
        validate_sigma(sigma)
        w, bw = mirror_complete(omegas, b_omega, sigma)
        g, bg = mirror_complete(gammas, btilde_gamma, sigma)
        c, d = reflectionless_constants(w, bw, g, bg)
        return cls(w, c, g, d, sigma=sigma, b_omega=bw, btilde_gamma=bg)

    def to_dict(self) -> Dict[str, Any]:
        doc = {
            "sigma": self.sigma,
            "omegas": complex_pairs(self.omegas),
            "c": complex_pairs(self.c),
            "gammas": complex_pairs(self.gammas),
            "d": complex_pairs(self.d),
        }
        if self.b_omega is not None:
            doc["b_omega"] = complex_pairs(self.b_omega)
        if self.btilde_gamma is not None:
            doc["btilde_gamma"] = complex_pairs(self.btilde_gamma)
        if self.metadata:
            doc["metadata"] = self.metadata
        return doc

    @classmethod
    def from_dict(cls, doc: Dict[str, Any]) -> "DiscreteSpectrum":
        """
        Read a spectrum document.

        With ``c``/``d`` present the pole lists are taken as complete;
        otherwise ``b_omega``/``btilde_gamma`` give connection coefficients
        at representative poles and the reflectionless constants are built.
        """
        if not isinstance(doc, dict):
            raise ConfigError("spectrum must be a JSON object", key="spectrum")
        sigma = doc.get("sigma", 1)
        validate_sigma(sigma)

        def read(name):
            return [parse_complex(v, name) for v in doc.get(name, [])]

        omegas, gammas = read("omegas"), read("gammas")
        if "c" in doc or "d" in doc:
            spectrum = cls(omegas, read("c"), gammas, read("d"), sigma=sigma)
            if spectrum.mirror_residual() > get_tolerance("mirror_match"):
                raise ConfigError(
                    "pole lists with explicit constants must be closed under "
                    "z -> -conj(z)",
                    key="omegas",
                )
            return spectrum
        if "b_omega" not in doc and omegas:
            raise ConfigError("Missing key 'c' or 'b_omega' in spectrum", key="c")
        if "btilde_gamma" not in doc and gammas:
            raise ConfigError("Missing key 'd' or 'btilde_gamma' in spectrum", key="d")
        return cls.from_connection_coefficients(
            omegas, read("b_omega"), gammas, read("btilde_gamma"), sigma=sigma
        )

    def to_json(self, path: Union[str, Path]) -> None:
        from .utils import write_json

        write_json(self.to_dict(), path)

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> "DiscreteSpectrum":
        path = Path(path)
        try:
            with open(path) as f:
                doc = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Malformed JSON in {path}: {e}", key=str(path))
        return cls.from_dict(doc)


def _connection_at_zero(q0: Potential, z: complex, upper: bool) -> complex:
    """
    Connection coefficient at a zero from the parallel analytic columns.

    At a zero w of a1, [Psi_1]_1(0, w) = b(w) [Psi_2]_2(0, w); at a zero g of
    a2, [Psi_1]_2(0, g) = btilde(g) [Psi_2]_1(0, g).
    """
    center = q0.n // 2
    left_col, right_col = (0, 1) if upper else (1, 0)
    p1, _ = _jost_at_node(q0, z, JostSide.LEFT, center, (left_col,))
    p2, _ = _jost_at_node(q0, z, JostSide.RIGHT, center, (right_col,))
    numerator, denominator = p1[:, left_col], p2[:, right_col]
    i = int(np.argmax(np.abs(denominator)))
    ratio = numerator[i] / denominator[i]
    parallel = abs(numerator[1 - i] - ratio * denominator[1 - i])
    logger.debug(f"connection coefficient at {z}: {ratio} (parallelism {parallel:.2e})")
    return complex(ratio)


def _b_by_continuation(q0: Potential, z: complex, upper: bool) -> complex:
    """b(z) (or btilde(z)) from the full scattering matrix at complex z."""
    if not q0.allows_continuation(z):
        raise ContinuationInvalid(
            z, "not a zero of a1/a2 and the decay class forbids continuation of b"
        )
    sample = scattering_sample(q0, z)
    return sample.b if upper else sample.btilde


def norming_constants(q0: Potential, zeros: Sequence[complex]) -> DiscreteSpectrum:
    """
    Norming constants at given zeros of a1 (Im > 0) and a2 (Im < 0).

    Parameters
    ----------
    q0 : Potential
        Initial datum.
    zeros : sequence of complex
        Zeros in either half-plane; missing mirrors -conj(z) are added.

    Returns
    -------
    DiscreteSpectrum
        With c_n = b(w_n)/a1'(w_n) and d_m = btilde(g_m)/a2'(g_m), where
        btilde(g) = -sigma conj(b(-conj g)).

    Raises
    ------
    NearDegenerateDerivative
        If |a1'| or |a2'| is below ``min_derivative``.
    ContinuationInvalid
        If a point is not a zero and b cannot be continued there.
    """
    match = get_tolerance("mirror_match")
    points: List[complex] = []
    for z in map(complex, zeros):
        for candidate in (z, _mirror(z)):
            if not any(abs(candidate - p) <= match * max(1.0, abs(p)) for p in points):
                points.append(candidate)

    min_derivative = get_tolerance("min_derivative")
    residual_tol = math.sqrt(get_tolerance("zero_residual"))
    a1 = a1_function(q0)
    a2 = a2_function(q0)

    omegas, c, b_omega = [], [], []
    gammas, d, btilde = [], [], []
    for z in points:
        upper = z.imag > 0
        f = a1 if upper else a2
        derivative = complex_derivative(f, z)
        if abs(derivative) < min_derivative:
            raise NearDegenerateDerivative(z, derivative)
        if abs(f(z)) <= residual_tol:
            coefficient = _connection_at_zero(q0, z, upper)
        else:
            logger.warning(f"|a({z})| = {abs(f(z)):.2e}: using continued b")
            coefficient = _b_by_continuation(q0, z, upper)
        if upper:
            omegas.append(z)
            b_omega.append(coefficient)
            c.append(coefficient / derivative)
        else:
            gammas.append(z)
            btilde.append(coefficient)
            d.append(coefficient / derivative)

    return DiscreteSpectrum(
        omegas, c, gammas, d, sigma=q0.sigma, b_omega=b_omega, btilde_gamma=btilde
    )


def find_spectrum(
    q0: Potential,
    k_max: float = 4.0,
    region: Optional[Rectangle] = None,
    tol: Optional[float] = None,
) -> DiscreteSpectrum:
    """
    Locate the discrete spectrum of q0 and its norming constants.

    Parameters
    ----------
    q0 : Potential
        Initial datum.
    k_max : float, default 4.0
        Default search rectangle [0.01, k_max]^2 in the first quadrant (and
        its conjugate for a2); mirrors are generated, not searched.
    region : Rectangle, optional
        Custom upper half-plane rectangle (e.g. straddling the imaginary
        axis); found mirror pairs are merged.
    tol : float, optional
        Newton residual (``zero_residual``).

    Returns
    -------
    DiscreteSpectrum
    """
    if q0.is_zero():
        return DiscreteSpectrum(sigma=q0.sigma)
    if region is None:
        region = Rectangle(0.01, k_max, 0.01, k_max)
    min_height = get_tolerance("min_pole_height")

    found = []
    for f, rect in ((a1_function(q0), region), (a2_function(q0), region.conjugate())):
        for z in locate_zeros(f, rect, tol=tol):
            if abs(z.imag) < min_height:
                logger.warning(f"rejecting near-real zero {z} (|Im| < {min_height})")
                continue
            found.append(z)

    spectrum = norming_constants(q0, found)
    spectrum.metadata.update(
        {"region": [region.re_min, region.re_max, region.im_min, region.im_max]}
    )
    logger.info(
        f"Discrete spectrum: {len(spectrum.omegas)} zeros of a1, "
        f"{len(spectrum.gammas)} zeros of a2"
    )
    return spectrum


# --------------------------------------------------------------------------
# Delta partition and T(z)
# --------------------------------------------------------------------------


@dataclass(eq=False)
class DeltaPartition:
    """
    Poles split by the stationary point -xi.

    ``delta1``/``delta2`` hold the poles with Re z > -xi, split by the sign
    of Re z into the ``_plus``/``_minus`` parts (all ascending in Re).
    ``delta`` is the set of w-type poles that dominate on the ray.
    """

    xi: float
    delta1: np.ndarray
    delta2: np.ndarray
    delta1_plus: np.ndarray
    delta1_minus: np.ndarray
    delta2_plus: np.ndarray
    delta2_minus: np.ndarray
    delta: np.ndarray
    omegas_first_quadrant: np.ndarray
    gammas_fourth_quadrant: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        doc = {
            name: complex_pairs(getattr(self, name))
            for name in (
                "delta1_plus",
                "delta1_minus",
                "delta2_plus",
                "delta2_minus",
                "delta",
            )
        }
        doc["xi"] = self.xi
        doc["metadata"] = self.metadata
        return doc


def _re_i_theta(z: complex, xi: float) -> float:
    return float(-(4.0 * z * xi + 2.0 * z * z).imag)


def _h_bound(spec: DiscreteSpectrum, delta1: np.ndarray, delta2: np.ndarray, xi: float):
    outside1 = [z for z in spec.omegas if not np.any(np.isclose(delta1, z))]
    outside2 = [z for z in spec.gammas if not np.any(np.isclose(delta2, z))]
    candidates = [_re_i_theta(z, xi) for z in outside1]
    candidates += [-_re_i_theta(z, xi) for z in outside2]
    m = len(delta2)
    candidates += [-_re_i_theta(z, xi) for z in delta1[:m]]
    candidates += [_re_i_theta(z, xi) for z in delta2[:m]]
    return min(candidates) if candidates else math.inf


def classify(spec: DiscreteSpectrum, xi: float) -> DeltaPartition:
    """
    Partition the spectrum against the stationary point -xi.

    Parameters
    ----------
    spec : DiscreteSpectrum
        Mirror-closed spectrum.
    xi : float
        Ray parameter x/(4t).

    Returns
    -------
    DeltaPartition
        Delta_1 = {w : Re w > -xi}, Delta_2 = {g : Re g > -xi} with their
        sign-of-Re halves, and Delta: the Re-ordered Delta_1^+ without its
        |Delta_2^-| lowest and (|Delta_2^+| - |Delta_2^-|) highest members,
        together with their mirrors in Delta_1 (Delta = Delta_1 when Delta_2
        is empty). ``metadata`` flags the ordering inequality assumed without
        loss of generality and records the exponential rate bound h.

    Raises
    ------
    OnThresholdError
        If some pole has Re z within ``threshold_gap`` of -xi.
    """
    xi = float(xi)
    gap = get_tolerance("threshold_gap")
    for z in np.concatenate([spec.omegas, spec.gammas]):
        if abs(z.real + xi) <= gap:
            raise OnThresholdError(complex(z), xi)

    def part(points):
        points = np.sort_complex(np.asarray(points, dtype=complex))
        points = points[np.argsort(points.real, kind="stable")]
        inside = points[points.real > -xi]
        return inside, inside[inside.real > 0], inside[inside.real < 0]

    delta1, d1p, d1m = part(spec.omegas)
    delta2, d2p, d2m = part(spec.gammas)

    if len(delta2) == 0:
        delta = delta1.copy()
        truncated = False
    else:
        lo = len(d2m)
        hi = len(d1p) - len(d2p) + len(d2m)
        truncated = hi > len(d1p) or hi < lo
        chosen = d1p[lo : max(lo, min(hi, len(d1p)))]
        mirrors = [_mirror(z) for z in chosen]
        mirrors = [
            m
            for m in mirrors
            if np.any(np.abs(delta1 - m) <= get_tolerance("mirror_match"))
        ]
        delta = np.array(
            sorted(list(chosen) + mirrors, key=lambda z: z.real), dtype=complex
        )

    wlog = (len(d1p) - len(d1m) > len(d2p) - len(d2m)) and (len(d1m) > len(d2m))
    first = spec.omegas[spec.omegas.real > 0]
    fourth = spec.gammas[spec.gammas.real > 0]
    return DeltaPartition(
        xi=xi,
        delta1=delta1,
        delta2=delta2,
        delta1_plus=d1p,
        delta1_minus=d1m,
        delta2_plus=d2p,
        delta2_minus=d2m,
        delta=delta,
        omegas_first_quadrant=first[np.argsort(first.real, kind="stable")],
        gammas_fourth_quadrant=fourth[np.argsort(fourth.real, kind="stable")],
        metadata={
            "wlog_inequality_holds": bool(wlog),
            "delta_index_range_clamped": bool(truncated),
            "h_bound": _h_bound(spec, delta1, delta2, xi),
            "decaying_rate_report": [
                {"pole": [z.real, z.imag], "re_i_theta": _re_i_theta(z, xi)}
                for z in np.concatenate([spec.omegas, spec.gammas])
            ],
        },
    )


def blaschke_T(
    z: complex, part: DeltaPartition, convention: Optional[str] = None
) -> complex:
    """
    The finite Blaschke-type product T(z) built from the Delta-partition.

    T(z) = prod_{n=0}^{|D2+|-|D2-|-1} (z - s_{|D1+|-n}) / (z - t_{|D2+|-n})
           * prod_{n=1}^{|D2-|} (z - w_n)(z + conj w_n) / ((z - g_n)(z + conj g_n))

    with 1-based indices. Under the ``"delta_plus"`` convention s_j, w_j
    index the Re-ordered Delta_1^+ and t_j, g_j the Re-ordered Delta_2^+;
    under ``"spectrum"`` they index the first-quadrant zeros of a1 and the
    fourth-quadrant zeros of a2.

    Raises
    ------
    PoleHit
        If z is within ``pole_hit`` of a denominator root.
    PartitionError
        If an index falls outside the list it addresses.
    """
    convention = convention or get_t_convention()
    if convention == "delta_plus":
        s_list, t_list = part.delta1_plus, part.delta2_plus
    else:
        s_list, t_list = part.omegas_first_quadrant, part.gammas_fourth_quadrant

    n1p, n2p, n2m = len(part.delta1_plus), len(part.delta2_plus), len(part.delta2_minus)
    z = complex(z)
    tol = get_tolerance("pole_hit")

    def pick(points, index, name):
        if not 1 <= index <= len(points):
            raise PartitionError(
                f"T(z) needs {name}_{index} but only {len(points)} are available "
                f"under the '{convention}' convention"
            )
        return complex(points[index - 1])

    def divide(value, pole):
        if abs(z - pole) <= tol:
            raise PoleHit(z, pole)
        return value / (z - pole)

    value = 1.0 + 0j
    for n in range(0, n2p - n2m):
        s = pick(s_list, n1p - n, "s")
        t = pick(t_list, n2p - n, "t")
        value = divide(value * (z - s), t)
    for n in range(1, n2m + 1):
        w = pick(s_list, n, "omega")
        g = pick(t_list, n, "gamma")
        value = value * (z - w) * (z + np.conj(w))
        value = divide(divide(value, g), -np.conj(g))
    return complex(value)
