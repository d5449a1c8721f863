"""
Phase function, log-density nu and the partial transmission function delta.

Along the ray x = 4 xi t the phase theta(k) = 4 k xi + 2 k^2 has its
stationary point at k = -xi. delta removes the jump 1 + sigma r1 r2 of the
Riemann-Hilbert problem on the half-line (-inf, -xi] and factorises as

    delta(k) = (xi + k)^{i nu(-xi)} exp(chi(k)).
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional

import numpy as np
from scipy.integrate import quad, trapezoid

from .errors import (
    AssumptionViolation,
    ConfigError,
    OnCutError,
    QuadratureFailure,
    VanishingJump,
)
from .scattering import ReflectionGrid
from .specfun import BranchSpec, branch_power, complex_log_principal
from .settings import get_tolerance
from .utils import validate_sigma

logger = logging.getLogger(__name__)

NU_IM_BAND = (-0.25, 0.5)


def theta(k: complex, xi: float) -> complex:
    """Phase 4 k xi + 2 k^2; stationary at k = -xi."""
    return 4.0 * k * xi + 2.0 * k * k


def nu(k: float, r1: complex, r2: complex, sigma: int) -> complex:
    """
    Log-density nu(k) = -(1/2pi) Log(1 + sigma r1(k) r2(k)).

    Parameters
    ----------
    k : float
        Real spectral point (reported in errors only).
    r1, r2 : complex
        Reflection coefficients at k.
    sigma : int
        Sign of the nonlinearity.

    Returns
    -------
    complex
        Principal-branch value.

    Raises
    ------
    VanishingJump
        If |1 + sigma r1 r2| is below ``vanishing_jump``.
    AssumptionViolation
        If Im nu lies outside (-1/4, 1/2).

    Examples
    --------
    >>> from pynnls.phase import nu
    >>> nu(0.0, 0.0, 0.3, 1)
    0j
    """
    jump = 1.0 + sigma * complex(r1) * complex(r2)
    if abs(jump) <= get_tolerance("vanishing_jump"):
        raise VanishingJump(k, jump)
    value = -complex_log_principal(jump) / (2.0 * math.pi)
    if not NU_IM_BAND[0] < value.imag < NU_IM_BAND[1]:
        raise AssumptionViolation(value.imag, f"at k = {k}")
    return value


def _nu_array(r1: np.ndarray, r2: np.ndarray, sigma: int) -> np.ndarray:
    jump = 1.0 + sigma * np.asarray(r1) * np.asarray(r2)
    tiny = np.abs(jump) <= get_tolerance("vanishing_jump")
    if np.any(tiny):
        raise VanishingJump(float("nan"), complex(jump[np.argmax(tiny)]))
    # +0.0 maps negative zero imaginary parts onto the upper edge of the cut
    return -np.log(jump + 0.0j) / (2.0 * math.pi)


@dataclass(frozen=True, eq=False)
class PhaseContext:
    """
    Everything delta needs along one ray.

    Attributes
    ----------
    xi : float
        Ray parameter x/(4t).
    sigma : int
        Sign of the nonlinearity.
    nu_at_xi : complex
        nu(-xi).
    delta0 : complex
        exp(chi(-xi)).
    s_min : float
        Lower end of the truncated nu-window; |nu| < ``nu_truncation`` below.
    nu_function : callable
        Vectorised s -> nu(s) on [s_min, -xi].
    r1_function, r2_function : callable, optional
        Interpolated reflection coefficients when built from a grid.
    """

    xi: float
    sigma: int
    nu_at_xi: complex
    s_min: float
    nu_function: Callable[[np.ndarray], np.ndarray]
    r1_function: Optional[Callable] = None
    r2_function: Optional[Callable] = None
    delta0: complex = field(default=complex("nan"))

    def __post_init__(self):
        if not NU_IM_BAND[0] < self.nu_at_xi.imag < NU_IM_BAND[1]:
            raise AssumptionViolation(self.nu_at_xi.imag, f"at -xi = {-self.xi}")
        if not self.s_min < -self.xi:
            raise ConfigError("nu-window must extend below -xi", key="s_min")
        if cmath.isnan(self.delta0):
            object.__setattr__(self, "delta0", cmath.exp(_chi(-self.xi, self)))
        if abs(self.delta0) == 0:
            raise ConfigError("delta0 vanished", key="delta0")

    @property
    def window(self):
        return (self.s_min, -self.xi - 1.0, -self.xi)

    def r1_at_stationary_point(self) -> complex:
        return complex(self.r1_function(-self.xi)) if self.r1_function else 0j

    def r2_at_stationary_point(self) -> complex:
        return complex(self.r2_function(-self.xi)) if self.r2_function else 0j

    @classmethod
    def from_function(
        cls,
        nu_function: Callable[[np.ndarray], np.ndarray],
        xi: float,
        s_min: float,
        sigma: int = 1,
    ) -> "PhaseContext":
        """Context for an explicit density nu, vanishing below ``s_min``."""
        validate_sigma(sigma)
        nu0 = complex(np.asarray(nu_function(np.array([-xi])))[0])
        return cls(float(xi), sigma, nu0, float(s_min), nu_function)

    @classmethod
    def from_grid(
        cls, grid: ReflectionGrid, xi: float, allow_truncation: bool = False
    ) -> "PhaseContext":
        """
        Context from computed reflection coefficients.

        nu is evaluated from cubic splines of r1, r2. The window is truncated
        at the first grid node from the left where |nu| exceeds
        ``nu_truncation``.

        Parameters
        ----------
        grid : ReflectionGrid
            Reflection coefficients on a real k-grid.
        xi : float
            Ray parameter; the window ends at the stationary point -xi.
        allow_truncation : bool, default False
            Accept a grid whose left end still carries |nu| above
            ``nu_truncation``, cutting the integral off at ``grid.k[0]``.

        Raises
        ------
        ConfigError
            If -xi is outside the grid, |nu(k_min)| exceeds ``nu_truncation``
            without ``allow_truncation``, or the grid spacing exceeds
            ``max_grid_spacing`` over the window.
        """
        xi = float(xi)
        k = grid.k
        if not (k[0] < -xi - 1.0 and -xi <= k[-1]):
            raise ConfigError(
                f"reflection grid [{k[0]}, {k[-1]}] does not cover the window "
                f"below -xi = {-xi}",
                key="kmin",
            )
        r1_spline, r2_spline = grid.interpolants()
        sigma = grid.sigma

        nu_nodes = np.abs(_nu_array(grid.r1, grid.r2, sigma))
        above = np.nonzero((nu_nodes >= get_tolerance("nu_truncation")) & (k < -xi))[0]
        if len(above) == 0:
            s_min = -xi - 1.0
        else:
            first = int(above[0])
            if first == 0:
                message = (
                    f"|nu(k_min)| = {nu_nodes[0]:.2e} exceeds the truncation "
                    f"threshold {get_tolerance('nu_truncation'):.0e}"
                )
                if not allow_truncation:
                    raise ConfigError(
                        message,
                        key="kmin",
                        suggestion="Extend the reflection grid to the left or "
                        "pass allow_truncation=True",
                    )
                logger.warning(f"{message}; truncating the window at k_min")
            s_min = min(float(k[max(first - 1, 0)]), -xi - 1.0)

        inside = (k >= s_min) & (k <= -xi)
        spacing = float(np.max(np.diff(k[inside]))) if inside.sum() > 1 else np.inf
        if spacing > get_tolerance("max_grid_spacing") * (1 + 1e-9):
            raise ConfigError(
                f"grid spacing {spacing:.3g} over the nu-window exceeds "
                f"{get_tolerance('max_grid_spacing')}",
                key="n",
                suggestion="Use a finer reflection grid",
            )

        def nu_function(s):
            return _nu_array(r1_spline(s), r2_spline(s), sigma)

        nu0 = nu(-xi, r1_spline(-xi), r2_spline(-xi), sigma)
        ctx = cls(xi, sigma, nu0, s_min, nu_function, r1_spline, r2_spline)
        logger.debug(
            f"Phase context at xi = {xi}: nu(-xi) = {nu0}, delta0 = {ctx.delta0}, "
            f"window [{s_min}, {-xi}]"
        )
        return ctx

    def to_dict(self) -> Dict[str, Any]:
        return {
            "xi": self.xi,
            "sigma": self.sigma,
            "nu_at_xi": [self.nu_at_xi.real, self.nu_at_xi.imag],
            "delta0": [self.delta0.real, self.delta0.imag],
            "window": [self.s_min, -self.xi],
        }


def _on_cut(k: complex, xi: float) -> bool:
    tol = get_tolerance("cut_distance") * max(1.0, abs(k))
    return k.real < -xi and abs(k.imag) <= tol


def _cauchy(f: Callable[[float], complex], a: float, b: float, k: complex) -> complex:
    """
    int_a^b f(s)/(s - k) ds for k possibly close to [a, b].

    f(s0), with s0 the point of [a, b] nearest to Re k, is subtracted and
    integrated in closed form; the bounded remainder goes to adaptive
    quadrature, real and imaginary parts separately.
    """
    s0 = min(max(k.real, a), b)
    f0 = complex(f(s0))

    def remainder(s):
        return (complex(f(s)) - f0) / (s - k)

    options = {
        "epsabs": get_tolerance("quad_abs"),
        "limit": int(get_tolerance("quad_limit")),
        "full_output": 1,
    }
    if a < s0 < b:
        options["points"] = [s0]

    parts = []
    for project in (np.real, np.imag):
        result = quad(lambda s: float(project(remainder(s))), a, b, **options)
        if len(result) > 3:
            raise QuadratureFailure(f"on [{a:.6g}, {b:.6g}] at k = {k}: {result[3]}")
        parts.append(result[0])

    value = complex(parts[0], parts[1])
    if f0 != 0:
        value += f0 * (complex_log_principal(b - k) - complex_log_principal(a - k))
    return value


def _chi(k: complex, ctx: PhaseContext) -> complex:
    k = complex(k)
    s_min, a, b = ctx.window
    nu0 = ctx.nu_at_xi

    def nu_scalar(s):
        return complex(np.asarray(ctx.nu_function(np.array([s])))[0])

    endpoint = -1j * nu0 * complex_log_principal(ctx.xi + k + 1.0) if nu0 != 0 else 0j
    middle = 1j * _cauchy(lambda s: nu_scalar(s) - nu0, a, b, k)
    tail = 1j * _cauchy(nu_scalar, s_min, a, k) if s_min < a else 0j
    return endpoint + middle + tail


def chi(k: complex, ctx: PhaseContext) -> complex:
    """
    Regularised log-integral chi(k) of the partial transmission function.

    chi(k) = -i nu(-xi) Log(xi + k + 1)
             + i int_{-xi-1}^{-xi} (nu(s) - nu(-xi))/(s - k) ds
             + i int_{-inf}^{-xi-1} nu(s)/(s - k) ds

    Parameters
    ----------
    k : complex
        Evaluation point off the cut (-inf, -xi); the end point -xi itself
        is allowed.
    ctx : PhaseContext
        Ray data.

    Returns
    -------
    complex

    Raises
    ------
    OnCutError
        If k lies on the cut.
    QuadratureFailure
        If adaptive quadrature misses ``quad_abs`` within ``quad_limit``
        subintervals.
    """
    k = complex(k)
    if _on_cut(k, ctx.xi):
        raise OnCutError(k, f"chi has a jump on (-inf, {-ctx.xi}]")
    return _chi(k, ctx)


def delta(k: complex, ctx: PhaseContext) -> complex:
    """
    Partial transmission function delta(k) = (xi + k)^{i nu(-xi)} exp(chi(k)).

    delta is analytic off (-inf, -xi], tends to 1 at infinity and satisfies
    delta_+ = delta_- (1 + sigma r1 r2) on the cut.

    Raises
    ------
    OnCutError
        If k lies on the cut or at the branch point -xi.
    """
    k = complex(k)
    spec = BranchSpec(cut_anchor=complex(-ctx.xi), cut_direction=-1 + 0j)
    power = branch_power(k, 1j * ctx.nu_at_xi, spec)
    return power * cmath.exp(chi(k, ctx))


def delta_jump(s: float, ctx: PhaseContext, eps: float = 1e-5) -> complex:
    """
    delta(s + i0)/delta(s - i0) at a cut point s < -xi.

    Evaluated at distance ``eps`` and ``eps/2`` from the cut and
    Richardson-extrapolated linearly in eps.
    """
    if not s < -ctx.xi:
        raise ValueError(f"s = {s} is not on the cut (-inf, {-ctx.xi})")

    def ratio(e):
        return delta(complex(s, e), ctx) / delta(complex(s, -e), ctx)

    return 2.0 * ratio(0.5 * eps) - ratio(eps)


def log_delta_direct(k: complex, ctx: PhaseContext, n_points: int = 400001) -> complex:
    """
    i int_{s_min}^{-xi} nu(s)/(s - k) ds by the fixed-step trapezoid rule.

    Equals Log of delta(k) up to 2 pi i; used to cross-check ``chi`` away
    from the cut.
    """
    s = np.linspace(ctx.s_min, -ctx.xi, int(n_points))
    values = np.asarray(ctx.nu_function(s)) / (s - complex(k))
    return 1j * trapezoid(values, s)


def holder_ratio(r: float, phi: float, ctx: PhaseContext) -> float:
    """
    Local Hoelder quotient of delta at the stationary point.

    Returns |delta(k) - delta0 (xi + k)^{i nu(-xi)}| / r^{1/2 - Im nu(-xi)}
    at xi + k = r e^{i phi}, which stays bounded as r -> 0 for |phi| <= pi/4.
    """
    k = -ctx.xi + r * cmath.exp(1j * phi)
    spec = BranchSpec(cut_anchor=complex(-ctx.xi), cut_direction=-1 + 0j)
    local = ctx.delta0 * branch_power(k, 1j * ctx.nu_at_xi, spec)
    return abs(delta(k, ctx) - local) / r ** (0.5 - ctx.nu_at_xi.imag)
