"""
Direct scattering for the nonlocal NLS Lax pair.

Jost solutions Psi_1 (normalised at x -> -inf) and Psi_2 (x -> +inf) solve

    Psi_x = -ik [sigma_3, Psi] + Q Psi,   Q = [[0, q0(x)], [-sigma conj(q0(-x)), 0]]

through their Volterra equations, discretised with the composite trapezoid
rule and solved column by column with Picard iteration. Scattering data are
read off at x = 0.
"""

import enum
import hashlib
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid
from scipy.interpolate import CubicSpline
from scipy.signal import lfilter

from .cache import cache_data, get_cached_data, session_cache_get, session_cache_set
from .errors import ContinuationInvalid, NoConvergence, ZeroDenominator
from .potential import Potential
from .progress import ProgressIndicator
from .settings import get_tolerance, tolerance_snapshot

logger = logging.getLogger(__name__)

# largest |growth exponent| allowed in a non-analytic column
_MAX_GROWTH = 600.0


class JostSide(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True, eq=False)
class JostMatrix:
    """Jost matrix Psi_j(x; k) at a single point."""

    value: np.ndarray
    side: JostSide
    k: complex
    x: float

    @property
    def det(self) -> complex:
        v = self.value
        return complex(v[0, 0] * v[1, 1] - v[0, 1] * v[1, 0])


@dataclass(frozen=True)
class ScatteringSample:
    """
    Scattering data at one spectral point.

    The ``*_mirror`` fields hold a1, a2 and b at -conj(k), which enter r2 and
    the symmetry checks; ``jost_max`` is the largest Jost entry met while
    solving, for the Neumann-bound diagnostic.
    """

    k: complex
    a1: complex
    a2: complex
    b: complex
    btilde: complex
    r1: complex
    r2: complex
    a1_mirror: complex = complex("nan")
    a2_mirror: complex = complex("nan")
    b_mirror: complex = complex("nan")
    jost_max: float = float("nan")

    @property
    def det_residual(self) -> float:
        return abs(self.a1 * self.a2 - self.btilde * self.b - 1.0)

    def to_dict(self) -> Dict[str, complex]:
        return asdict(self)


# --------------------------------------------------------------------------
# Volterra solver
# --------------------------------------------------------------------------


def _trapezoid_recurrence(g: np.ndarray, h: float, rho: complex) -> np.ndarray:
    """
    Cumulative trapezoid sums I_j of a kernel with geometric phase factor.

    I_0 = 0 and I_{j+1} = rho * (I_j + h/2 g_j) + h/2 g_{j+1}, which is the
    trapezoid rule for int_{x_0}^{x_j} exp(kappa (y - x_j)) g(y) dy with
    rho = exp(-kappa h). Run as a first-order IIR filter.
    """
    if len(g) == 1:
        return np.zeros(1, dtype=complex)
    half = 0.5 * h
    y, _ = lfilter(
        np.array([half, rho * half], dtype=complex),
        np.array([1.0, -rho], dtype=complex),
        g.astype(complex),
        zi=np.array([-half * g[0]], dtype=complex),
    )
    return y


def _solve_column(
    q_upper: np.ndarray,
    r_lower: np.ndarray,
    h: float,
    k: complex,
    column: int,
    tol: float,
    max_iter: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Picard iteration for one Jost column, integrated from index 0 onward.

    The arrays are ordered away from the normalisation end; for the right
    Jost solution the caller passes them reversed and a negative step h.
    """
    n = len(q_upper)
    # kappa_{i,c} = ik (s_i - s_c), s = (1, -1)
    if column == 0:
        rho_top, rho_bottom = 1.0, np.exp(2j * k * h)
        u1, u2 = np.ones(n, dtype=complex), np.zeros(n, dtype=complex)
    else:
        rho_top, rho_bottom = np.exp(-2j * k * h), 1.0
        u1, u2 = np.zeros(n, dtype=complex), np.ones(n, dtype=complex)
    base1, base2 = u1.copy(), u2.copy()

    update = np.inf
    for iteration in range(1, max_iter + 1):
        new1 = base1 + _trapezoid_recurrence(q_upper * u2, h, rho_top)
        new2 = base2 + _trapezoid_recurrence(r_lower * new1, h, rho_bottom)
        scale = max(1.0, float(np.max(np.abs(new1))), float(np.max(np.abs(new2))))
        update = max(np.max(np.abs(new1 - u1)), np.max(np.abs(new2 - u2))) / scale
        u1, u2 = new1, new2
        if update <= tol:
            logger.debug(f"column {column} at k={k}: {iteration} Picard iterations")
            return u1, u2
        if not np.isfinite(update):
            break
    raise NoConvergence(max_iter, float(update))


def _analytic_half_plane(side: JostSide, column: int) -> int:
    """Sign of Im k on which the column extends analytically."""
    if side is JostSide.LEFT:
        return 1 if column == 0 else -1
    return -1 if column == 0 else 1


def _check_column(q0: Potential, k: complex, side: JostSide, column: int) -> None:
    if k.imag == 0 or np.sign(k.imag) == _analytic_half_plane(side, column):
        return
    if not q0.allows_continuation(k):
        raise ContinuationInvalid(
            k,
            f"column {column + 1} of the {side.value} Jost solution needs "
            f"decay_class permitting |Im k| = {abs(k.imag):.3g} "
            f"({q0.decay_class.value})",
        )
    if 2.0 * abs(k.imag) * q0.L > _MAX_GROWTH:
        raise ContinuationInvalid(k, "exponential growth exceeds floating range")


def _one_sided_end(values: np.ndarray) -> np.ndarray:
    """Replace the last entry by its quadratic extrapolation from the others."""
    values = np.array(values)
    if len(values) >= 4:
        values[-1] = 3.0 * values[-2] - 3.0 * values[-3] + values[-4]
    return values


def _segment(q0: Potential, side: JostSide, stop: int, stride: int):
    """
    Potential entries and step for the integration segment ending at node stop.

    A jump at the end node takes the one-sided limit from inside the segment.
    """
    if side is JostSide.LEFT:
        sl = slice(0, stop + 1, stride)
        h = stride * q0.h
    else:
        sl = slice(q0.n - 1, stop - 1 if stop > 0 else None, -stride)
        h = -stride * q0.h
    q_upper = q0.values[sl]
    r_lower = q0.reflected_conj()[sl]
    end = float(q0.x[stop])
    if q0.is_jump(end):
        q_upper = _one_sided_end(q_upper)
    if q0.is_jump(-end):
        r_lower = _one_sided_end(r_lower)
    return q_upper, r_lower, h


def _column_values(
    q0: Potential, k: complex, side: JostSide, column: int, stop: int, stride: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Column entries along the segment, ordered away from the normalisation end."""
    q_upper, r_lower, h = _segment(q0, side, stop, stride)
    return _solve_column(
        q_upper,
        r_lower,
        h,
        k,
        column,
        get_tolerance("picard_tol"),
        int(get_tolerance("picard_max_iter")),
    )


def _can_extrapolate(q0: Potential, side: JostSide, index: int) -> bool:
    length = index if side is JostSide.LEFT else q0.n - 1 - index
    return length >= 4 and length % 2 == 0


def _jost_at_node(
    q0: Potential, k: complex, side: JostSide, index: int, columns: Sequence[int]
) -> Tuple[np.ndarray, float]:
    """
    Jost matrix at grid node ``index``, Richardson-extrapolated in h.

    Returns the matrix (NaN in unrequested columns) and the largest entry
    modulus seen along the integration segment.
    """
    value = np.full((2, 2), np.nan, dtype=complex)
    largest = 0.0
    extrapolate = _can_extrapolate(q0, side, index)
    for column in columns:
        u1, u2 = _column_values(q0, k, side, column, index, 1)
        largest = max(largest, float(np.max(np.abs(u1))), float(np.max(np.abs(u2))))
        fine = np.array([u1[-1], u2[-1]])
        if extrapolate:
            c1, c2 = _column_values(q0, k, side, column, index, 2)
            coarse = np.array([c1[-1], c2[-1]])
            value[:, column] = (4.0 * fine - coarse) / 3.0
        else:
            value[:, column] = fine
    return value, largest


def _node_index(q0: Potential, x: float) -> Optional[int]:
    if x < q0.x[0] - 1e-12 * q0.L or x > q0.x[-1] + 1e-12 * q0.L:
        raise ValueError(f"x = {x} lies outside the grid [-{q0.L}, {q0.L}]")
    index = int(round((x - q0.x[0]) / q0.h))
    index = min(max(index, 0), q0.n - 1)
    if abs(q0.x[index] - x) <= 1e-9 * q0.h:
        return index
    return None


def _jost(
    q0: Potential, k: complex, x: float, side: JostSide, columns: Sequence[int]
) -> JostMatrix:
    k = complex(k)
    for column in columns:
        _check_column(q0, k, side, column)

    index = _node_index(q0, x)
    if index is not None:
        value, largest = _jost_at_node(q0, k, side, index, columns)
    else:
        # off-node: cubic interpolation of the whole-grid solution
        value = np.full((2, 2), np.nan, dtype=complex)
        largest = 0.0
        end = q0.n - 1 if side is JostSide.LEFT else 0
        order = slice(None) if side is JostSide.LEFT else slice(None, None, -1)
        for column in columns:
            u1, u2 = _column_values(q0, k, side, column, end, 1)
            entries = np.vstack([u1, u2])[:, order]
            largest = max(largest, float(np.max(np.abs(entries))))
            spline = CubicSpline(q0.x, entries, axis=1)
            value[:, column] = spline(x)

    if k.imag == 0 and len(columns) == 2:
        bound = get_tolerance("bound_slack") * q0.neumann_bound()["column"]
        if largest > bound:
            logger.warning(
                f"Jost entries reach {largest:.4g}, above the Neumann bound "
                f"{bound:.4g} at k = {k}"
            )
    return JostMatrix(value, side, k, float(x))


def jost_left(
    q0: Potential, k: complex, x: float, columns: Sequence[int] = (0, 1)
) -> JostMatrix:
    """
    Left Jost solution Psi_1(x; k), normalised to I at x -> -inf.

    Parameters
    ----------
    q0 : Potential
        Initial datum.
    k : complex
        Spectral parameter. Column 1 extends to Im k > 0, column 2 to
        Im k < 0; the other column needs a decay class that permits it.
    x : float
        Evaluation point inside the grid.
    columns : sequence of int, default (0, 1)
        Columns to compute; the others are NaN.

    Returns
    -------
    JostMatrix

    Raises
    ------
    NoConvergence
        If Picard iteration hits ``picard_max_iter``.
    ContinuationInvalid
        If a requested column cannot be continued to complex k.

    Examples
    --------
    >>> import pynnls
    >>> q0 = pynnls.gaussian_potential(0.2, L=8.0, n=1601)
    >>> abs(pynnls.jost_left(q0, 0.5, 0.0).det - 1) < 1e-9
    True
    """
    return _jost(q0, k, x, JostSide.LEFT, columns)


def jost_right(
    q0: Potential, k: complex, x: float, columns: Sequence[int] = (0, 1)
) -> JostMatrix:
    """
    Right Jost solution Psi_2(x; k), normalised to I at x -> +inf.

    Column 1 extends to Im k < 0 and column 2 to Im k > 0; see ``jost_left``.
    """
    return _jost(q0, k, x, JostSide.RIGHT, columns)


# --------------------------------------------------------------------------
# Scattering coefficients
# --------------------------------------------------------------------------


def _coefficients(q0: Potential, k: complex) -> Tuple[Dict[str, complex], float]:
    """a1, a2, b, btilde at k from both Jost matrices at x = 0."""
    center = q0.n // 2
    p1, big1 = _jost_at_node(q0, k, JostSide.LEFT, center, (0, 1))
    p2, big2 = _jost_at_node(q0, k, JostSide.RIGHT, center, (0, 1))
    coefficients = {
        "a1": p1[0, 0] * p2[1, 1] - p1[1, 0] * p2[0, 1],
        "a2": p2[0, 0] * p1[1, 1] - p2[1, 0] * p1[0, 1],
        "b": p2[0, 0] * p1[1, 0] - p2[1, 0] * p1[0, 0],
        "btilde": p1[0, 1] * p2[1, 1] - p1[1, 1] * p2[0, 1],
    }
    return {name: complex(v) for name, v in coefficients.items()}, max(big1, big2)


def _check_k(q0: Potential, k: complex) -> complex:
    k = complex(k)
    if k.imag != 0 and not q0.allows_continuation(k):
        raise ContinuationInvalid(
            k, f"b(k) is only defined on the real axis for {q0.decay_class.value} data"
        )
    if 2.0 * abs(k.imag) * q0.L > _MAX_GROWTH:
        raise ContinuationInvalid(k, "exponential growth exceeds floating range")
    return k


def _assemble(
    q0: Potential, k: complex, here: Dict[str, complex], mirror: Dict[str, complex], big
) -> ScatteringSample:
    threshold = get_tolerance("zero_denominator")
    if k.imag == 0:
        for which in ("a1", "a2"):
            if abs(here[which]) < threshold:
                raise ZeroDenominator(k, which, here[which])
    return ScatteringSample(
        k=k,
        a1=here["a1"],
        a2=here["a2"],
        b=here["b"],
        btilde=here["btilde"],
        r1=here["b"] / here["a1"],
        r2=complex(np.conj(mirror["b"]) / here["a2"]),
        a1_mirror=mirror["a1"],
        a2_mirror=mirror["a2"],
        b_mirror=mirror["b"],
        jost_max=big,
    )


def scattering_sample(q0: Potential, k: complex) -> ScatteringSample:
    """
    Scattering coefficients a1, a2, b, btilde and reflection coefficients at k.

    Parameters
    ----------
    q0 : Potential
        Initial datum.
    k : complex
        Real spectral point, or complex when ``q0.decay_class`` permits.

    Returns
    -------
    ScatteringSample
        With r1 = b/a1 and r2 = conj(b(-conj k))/a2.

    Raises
    ------
    ZeroDenominator
        If |a1| or |a2| falls below ``zero_denominator`` at real k.
    ContinuationInvalid
        For complex k without sufficient decay.

    Examples
    --------
    >>> import pynnls
    >>> q0 = pynnls.box_potential(0.0)
    >>> s = pynnls.scattering_sample(q0, 2.0)
    >>> s.a1, s.r1
    ((1+0j), 0j)
    """
    k = _check_k(q0, k)
    here, big = _coefficients(q0, k)
    mirror_k = -np.conj(k)
    mirror = here if mirror_k == k else _coefficients(q0, mirror_k)[0]
    return _assemble(q0, k, here, mirror, big)


def a1_analytic(q0: Potential, k: complex) -> complex:
    """a1(k) from the analytic columns only; valid on Im k >= 0 for any decay."""
    k = complex(k)
    if k.imag < 0:
        raise ContinuationInvalid(k, "a1 is analytic in the upper half-plane only")
    center = q0.n // 2
    p1, _ = _jost_at_node(q0, k, JostSide.LEFT, center, (0,))
    p2, _ = _jost_at_node(q0, k, JostSide.RIGHT, center, (1,))
    return complex(p1[0, 0] * p2[1, 1] - p1[1, 0] * p2[0, 1])


def a2_analytic(q0: Potential, k: complex) -> complex:
    """a2(k) from the analytic columns only; valid on Im k <= 0 for any decay."""
    k = complex(k)
    if k.imag > 0:
        raise ContinuationInvalid(k, "a2 is analytic in the lower half-plane only")
    center = q0.n // 2
    p1, _ = _jost_at_node(q0, k, JostSide.LEFT, center, (1,))
    p2, _ = _jost_at_node(q0, k, JostSide.RIGHT, center, (0,))
    return complex(p2[0, 0] * p1[1, 1] - p2[1, 0] * p1[0, 1])


def a1_function(q0: Potential) -> Callable[[complex], complex]:
    """Handle z -> a1(z) for zero searches in the upper half-plane."""
    return lambda z: a1_analytic(q0, z)


def a2_function(q0: Potential) -> Callable[[complex], complex]:
    """Handle z -> a2(z) for zero searches in the lower half-plane."""
    return lambda z: a2_analytic(q0, z)


def complex_derivative(
    f: Callable[[complex], complex], z: complex, step: Optional[float] = None
) -> complex:
    """
    Derivative of an analytic function by a four-point complex-step stencil.

    f'(z) ~ [f(z+h) - f(z-h) - i(f(z+ih) - f(z-ih))] / (4h), error O(h^4).
    """
    h = get_tolerance("complex_step") if step is None else step
    z = complex(z)
    return (f(z + h) - f(z - h) - 1j * (f(z + 1j * h) - f(z - 1j * h))) / (4.0 * h)


# --------------------------------------------------------------------------
# Reflection grids
# --------------------------------------------------------------------------


@dataclass
class ReflectionGrid:
    """
    Scattering samples on a uniform real k-grid with attached diagnostics.

    Behaves like the list of its samples.
    """

    samples: List[ScatteringSample]
    sigma: int
    diagnostics: Dict[str, float] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self) -> Iterator[ScatteringSample]:
        return iter(self.samples)

    def __getitem__(self, index):
        return self.samples[index]

    def _column(self, name: str) -> np.ndarray:
        return np.array([getattr(s, name) for s in self.samples])

    @property
    def k(self) -> np.ndarray:
        return self._column("k").real

    @property
    def r1(self) -> np.ndarray:
        return self._column("r1")

    @property
    def r2(self) -> np.ndarray:
        return self._column("r2")

    def to_frame(self) -> pd.DataFrame:
        """One row per sample, with the invariant residuals as extra columns."""
        frame = pd.DataFrame(
            {
                "k": self.k,
                "a1": self._column("a1"),
                "a2": self._column("a2"),
                "b": self._column("b"),
                "btilde": self._column("btilde"),
                "r1": self.r1,
                "r2": self.r2,
            }
        )
        residuals = invariant_residuals(self)
        for name, values in residuals.items():
            frame[f"residual_{name}"] = values
        return frame

    def interpolants(self) -> Tuple[CubicSpline, CubicSpline]:
        """Complex cubic splines of r1 and r2 over the k-grid."""
        return CubicSpline(self.k, self.r1), CubicSpline(self.k, self.r2)


def invariant_residuals(grid: ReflectionGrid) -> Dict[str, np.ndarray]:
    """
    Per-sample residuals of the algebraic identities of the scattering data.

    Returns
    -------
    dict
        ``det`` (a1 a2 - btilde b - 1), ``btilde_symmetry``
        (btilde(k) + sigma conj(b(-k))), ``a1_symmetry`` / ``a2_symmetry``
        (a_j(k) - conj(a_j(-k))) and ``transmission``
        (1 + sigma r1 r2 - 1/(a1 a2)).
    """
    sigma = grid.sigma

    def col(name):
        return grid._column(name)

    a1, a2, b, bt = col("a1"), col("a2"), col("b"), col("btilde")
    r1, r2 = col("r1"), col("r2")
    return {
        "det": np.abs(a1 * a2 - bt * b - 1.0),
        "btilde_symmetry": np.abs(bt + sigma * np.conj(col("b_mirror"))),
        "a1_symmetry": np.abs(a1 - np.conj(col("a1_mirror"))),
        "a2_symmetry": np.abs(a2 - np.conj(col("a2_mirror"))),
        "transmission": np.abs(1.0 + sigma * r1 * r2 - 1.0 / (a1 * a2)),
    }


def check_invariants(grid: ReflectionGrid, tol: float = 1e-8) -> Dict[str, Dict]:
    """
    Pass/fail report for each scattering invariant over the grid.

    Returns
    -------
    dict
        ``{name: {"max_residual": float, "passed": bool}}``; includes the
        Neumann bound check on the Jost entries.
    """
    report = {}
    for name, values in invariant_residuals(grid).items():
        worst = float(np.max(values)) if len(values) else 0.0
        report[name] = {"max_residual": worst, "passed": bool(worst <= tol)}
    bound = grid.diagnostics.get("neumann_bound", np.inf)
    worst = float(np.max(grid._column("jost_max"))) if len(grid) else 0.0
    report["neumann_bound"] = {
        "max_residual": worst - bound,
        "passed": bool(worst <= bound),
    }
    return report


def _grid_cache_key(q0: Potential, kmin: float, kmax: float, n: int) -> str:
    digest = hashlib.md5()
    digest.update(np.ascontiguousarray(q0.x).tobytes())
    digest.update(np.ascontiguousarray(q0.values).tobytes())
    key = (q0.sigma, q0.jumps, kmin, kmax, n, tolerance_snapshot())
    digest.update(repr(key).encode())
    return f"rgrid_{digest.hexdigest()}"


def _grid_diagnostics(q0: Potential, samples: List[ScatteringSample]) -> Dict:
    k = np.array([s.k.real for s in samples])
    r1 = np.array([s.r1 for s in samples])
    r2 = np.array([s.r2 for s in samples])
    jump = np.abs(1.0 + q0.sigma * r1 * r2)
    derivative = np.gradient(r1, k) if len(k) > 1 else np.zeros_like(r1)
    h1 = float(np.sqrt(trapezoid(np.abs(r1) ** 2 + np.abs(derivative) ** 2, k)))
    norms = q0.norms()
    return {
        "r1_h1_norm": h1,
        "max_abs_r1": float(np.max(np.abs(r1))),
        "max_abs_r2": float(np.max(np.abs(r2))),
        "min_abs_jump": float(np.min(jump)),
        "neumann_bound": get_tolerance("bound_slack") * q0.neumann_bound()["column"],
        **{f"q0_{name}": value for name, value in norms.items()},
    }


def reflection_grid(
    q0: Potential,
    kmin: float,
    kmax: float,
    n: int,
    threads: int = 1,
    use_cache: bool = False,
    quiet: bool = True,
) -> ReflectionGrid:
    """
    Scattering samples on a uniform real k-grid.

    Parameters
    ----------
    q0 : Potential
        Initial datum.
    kmin, kmax : float
        Grid end points, kmin < kmax.
    n : int
        Number of samples, n >= 2.
    threads : int, default 1
        Worker threads for the independent k evaluations.
    use_cache : bool, default False
        If True, reuse a stored grid for identical inputs and tolerances.
    quiet : bool, default True
        When False, show a progress indicator.

    Returns
    -------
    ReflectionGrid
        Samples plus diagnostics: discrete H1 norm of r1, max |r1|, |r2|,
        min |1 + sigma r1 r2|, the Neumann bound and the norms of q0.

    Raises
    ------
    ZeroDenominator
        Carrying the offending k.
    """
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")
    if not kmin < kmax:
        raise ValueError(f"kmin must be below kmax, got {kmin} >= {kmax}")
    n = int(n)

    cache_key = _grid_cache_key(q0, kmin, kmax, n)
    if use_cache:
        cached = session_cache_get(cache_key)
        if cached is None:
            cached = get_cached_data(cache_key)
        if cached is not None:
            logger.info(f"Reflection grid loaded from cache ({cache_key})")
            return session_cache_set(cache_key, cached)

    ks = np.linspace(kmin, kmax, n)
    symmetric = np.allclose(ks, -ks[::-1], rtol=0, atol=1e-12 * max(1.0, kmax))
    targets = list(ks) if symmetric else list(ks) + list(-ks)

    progress = None
    if not quiet:
        progress = ProgressIndicator(f"Scattering {len(targets)} k-points")
        progress.start()

    def evaluate(k):
        return _coefficients(q0, complex(k))

    results = []

    def collect(outcomes):
        # only the calling thread touches the progress line
        for result in outcomes:
            results.append(result)
            if progress is not None:
                progress.update()

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            collect(pool.map(evaluate, targets))
    else:
        collect(map(evaluate, targets))

    samples = []
    for i, k in enumerate(ks):
        here, big = results[i]
        mirror = results[n - 1 - i][0] if symmetric else results[n + i][0]
        samples.append(_assemble(q0, complex(k), here, mirror, big))

    if progress is not None:
        progress.finish(f"Scattered {n} k-points")

    grid = ReflectionGrid(samples, q0.sigma, _grid_diagnostics(q0, samples))
    logger.info(
        f"Reflection grid on [{kmin}, {kmax}] ({n} points): "
        f"max|r1| = {grid.diagnostics['max_abs_r1']:.3e}, "
        f"H1(r1) = {grid.diagnostics['r1_h1_norm']:.3e}"
    )
    if use_cache:
        cache_data(
            cache_key,
            grid,
            metadata={
                "kind": "reflection_grid",
                "kmin": kmin,
                "kmax": kmax,
                "n": n,
                **q0.fingerprint(),
            },
        )
        session_cache_set(cache_key, grid)
    return grid
