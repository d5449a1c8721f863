"""
Leading dispersive term of the long-time asymptotics along a ray.

Near the stationary point -xi the Riemann-Hilbert problem is modelled by the
parabolic cylinder problem in z = sqrt(8t)(xi + k); its large-z expansion
gives beta_12, which yields the radiation term t^{Im nu} beta~_12 / sqrt(2t).
"""

import cmath
import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Tuple

from .errors import AssumptionViolation, InconsistentData, ZeroReflection
from .phase import NU_IM_BAND, PhaseContext
from .scattering import ReflectionGrid
from .soliton import ReflectionlessData, q_sol
from .specfun import BranchSpec, branch_power, reciprocal_gamma
from .spectrum import DeltaPartition, DiscreteSpectrum
from .settings import get_tolerance
from .utils import validate_positive

logger = logging.getLogger(__name__)

_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class DispersiveTerm:
    """
    Modulation parameters, model coefficients and the resulting field term.

    ``value`` is t^{Im nu} beta12_tilde / sqrt(2t); ``declared_order`` is the
    exponent of the error bound and is never added to ``value``.
    """

    t: float
    xi: float
    nu_at_xi: complex
    r_xi: complex
    r_xi_check: complex
    beta12_tilde: complex
    beta21_tilde: complex
    value: complex
    declared_order: float

    def to_dict(self) -> Dict[str, Any]:
        doc = asdict(self)
        for name, item in doc.items():
            if isinstance(item, complex):
                doc[name] = [item.real, item.imag]
        return doc


def modulation(
    ctx: PhaseContext, r1_at: complex, r2_at: complex, sigma: int, t: float
) -> Tuple[complex, complex]:
    """
    Modulation parameters of the local model at the stationary point.

    r_xi       = r1(-xi) delta0^-2 (8t)^{i nu(-xi)} e^{-4it xi^2}
    r_xi_check = sigma r2(-xi) delta0^2 (8t)^{-i nu(-xi)} e^{4it xi^2}

    Parameters
    ----------
    ctx : PhaseContext
        Ray data (xi, nu(-xi), delta0).
    r1_at, r2_at : complex
        Reflection coefficients at -xi.
    sigma : int
        Sign of the nonlinearity.
    t : float
        Time, t > 0.

    Returns
    -------
    tuple of complex
        (r_xi, r_xi_check).
    """
    t = validate_positive(t, "t")
    growth = branch_power(8.0 * t, 1j * ctx.nu_at_xi, BranchSpec.principal())
    phase = cmath.exp(-4j * t * ctx.xi**2)
    r_xi = complex(r1_at) * ctx.delta0**-2 * growth * phase
    r_xi_check = sigma * complex(r2_at) * ctx.delta0**2 / growth / phase
    return r_xi, r_xi_check


def _zero_reflection_guard(value: complex, ctx: PhaseContext, name: str) -> None:
    if abs(value) > get_tolerance("zero_reflection"):
        return
    if abs(ctx.nu_at_xi) < get_tolerance("zero_nu"):
        raise ZeroReflection(f"{name} vanishes at xi = {ctx.xi}")
    raise InconsistentData(
        f"{name} = {value} vanishes while nu(-xi) = {ctx.nu_at_xi} does not"
    )


def beta_tilde(
    ctx: PhaseContext, modulation_pair: Tuple[complex, complex], t: float
) -> Tuple[complex, complex]:
    """
    Rescaled model coefficients beta~_12 and beta~_21.

    beta_12 = sqrt(2 pi) e^{-pi nu/2} e^{i pi/4} / (r_xi Gamma(-i nu)),
    beta_21 = -sqrt(2 pi) e^{-pi nu/2} e^{-i pi/4} / (r_xi_check Gamma(i nu)),
    beta~_12 = t^{-Im nu} beta_12 and beta~_21 = t^{Im nu} beta_21, with
    nu = nu(-xi). Both moduli are independent of t.

    Raises
    ------
    ZeroReflection
        If a modulation parameter vanishes together with nu(-xi); the
        caller substitutes a zero term.
    InconsistentData
        If a modulation parameter vanishes while nu(-xi) does not.
    """
    t = validate_positive(t, "t")
    r_xi, r_xi_check = modulation_pair
    _zero_reflection_guard(r_xi, ctx, "r_xi")
    _zero_reflection_guard(r_xi_check, ctx, "r_xi_check")

    nu0 = ctx.nu_at_xi
    damping = cmath.exp(-0.5 * math.pi * nu0)
    eighth = cmath.exp(0.25j * math.pi)
    beta12 = _SQRT_TWO_PI * damping * eighth * reciprocal_gamma(-1j * nu0) / r_xi
    beta21 = -_SQRT_TWO_PI * damping / eighth * reciprocal_gamma(1j * nu0) / r_xi_check
    return t ** (-nu0.imag) * beta12, t ** nu0.imag * beta21


def error_order(nu_im: float) -> float:
    """
    Exponent of the error term of the long-time expansion.

    Returns
    -------
    float
        -1 + 2 nu_im on (1/6, 1/2), -3/4 + nu_im/2 on (0, 1/6] and -3/4 on
        (-1/4, 0].

    Raises
    ------
    AssumptionViolation
        If nu_im lies outside (-1/4, 1/2).

    Examples
    --------
    >>> from pynnls.dispersive import error_order
    >>> error_order(0.25)
    -0.5
    """
    nu_im = float(nu_im)
    if not NU_IM_BAND[0] < nu_im < NU_IM_BAND[1]:
        raise AssumptionViolation(nu_im)
    if nu_im > 1.0 / 6.0:
        return -1.0 + 2.0 * nu_im
    if nu_im > 0.0:
        return -0.75 + 0.5 * nu_im
    return -0.75


def dispersive_term(
    ctx: PhaseContext, r1_at: complex, r2_at: complex, t: float
) -> DispersiveTerm:
    """The radiation term at time t, zero under the zero-reflection convention."""
    t = validate_positive(t, "t")
    pair = modulation(ctx, r1_at, r2_at, ctx.sigma, t)
    try:
        b12, b21 = beta_tilde(ctx, pair, t)
        value = t**ctx.nu_at_xi.imag * b12 / math.sqrt(2.0 * t)
    except ZeroReflection:
        logger.debug(f"zero reflection at xi = {ctx.xi}: dispersive term set to 0")
        b12 = b21 = value = 0j
    return DispersiveTerm(
        t=t,
        xi=ctx.xi,
        nu_at_xi=ctx.nu_at_xi,
        r_xi=pair[0],
        r_xi_check=pair[1],
        beta12_tilde=complex(b12),
        beta21_tilde=complex(b21),
        value=complex(value),
        declared_order=error_order(ctx.nu_at_xi.imag),
    )


@dataclass(frozen=True)
class AsymptoticField:
    """Soliton part, dispersive part and their sum at one (x, t)."""

    x: float
    t: float
    xi: float
    q_sol: complex
    dispersive: DispersiveTerm

    @property
    def value(self) -> complex:
        return self.q_sol + self.dispersive.value

    @property
    def declared_order(self) -> float:
        return self.dispersive.declared_order

    def to_row(self) -> Dict[str, Any]:
        return {
            "x": self.x,
            "t": self.t,
            "xi": self.xi,
            "q_sol": self.q_sol,
            "dispersive": self.dispersive.value,
            "q_asym": self.value,
            "declared_order": self.declared_order,
        }


def asymptotic_q(
    spec: DiscreteSpectrum,
    part: Optional[DeltaPartition],
    ctx: PhaseContext,
    grid: Optional[ReflectionGrid],
    x: float,
    t: float,
) -> AsymptoticField:
    """
    Long-time approximation q_sol(x, t) + t^{Im nu} beta~_12 / sqrt(2t).

    Parameters
    ----------
    spec : DiscreteSpectrum
        Discrete spectrum of the initial datum.
    part : DeltaPartition, optional
        Partition of ``spec`` at the ray; checked against ``ctx.xi``.
    ctx : PhaseContext
        Ray data; ``ctx.xi`` must equal x/(4t).
    grid : ReflectionGrid, optional
        Source of r1(-xi), r2(-xi); defaults to the interpolants in ``ctx``.
    x, t : float
        Evaluation point, t > 0.

    Returns
    -------
    AsymptoticField
        The soliton part uses the delta-modified constants
        c_n delta(w_n)^-2 and d_m delta(g_m)^2.

    Raises
    ------
    ValueError
        If x/(4t) differs from the ray of ``ctx``.
    """
    t = validate_positive(t, "t")
    xi = x / (4.0 * t)
    if abs(xi - ctx.xi) > 1e-12 * max(1.0, abs(xi)):
        raise ValueError(f"x/(4t) = {xi} does not lie on the ray xi = {ctx.xi}")
    if part is not None and part.xi != ctx.xi:
        raise ValueError(f"partition at xi = {part.xi} does not match xi = {ctx.xi}")

    if grid is not None:
        r1_spline, r2_spline = grid.interpolants()
        r1_at, r2_at = complex(r1_spline(-xi)), complex(r2_spline(-xi))
    else:
        r1_at, r2_at = ctx.r1_at_stationary_point(), ctx.r2_at_stationary_point()

    data = ReflectionlessData.modified_by_delta(spec, ctx)
    soliton = q_sol(data, x, t) if not data.is_empty() else 0j
    term = dispersive_term(ctx, r1_at, r2_at, t)
    return AsymptoticField(float(x), t, xi, soliton, term)
