"""
Decay-fit harness: power-law and exponential fits, and the comparison of the
split-step field with the long-time approximation along a ray.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.stats import linregress

from .dispersive import asymptotic_q, error_order
from .pdeoracle import EvolutionState, evolve
from .phase import PhaseContext
from .potential import Potential
from .scattering import ReflectionGrid
from .spectrum import DiscreteSpectrum, classify
from .utils import validate_increasing

logger = logging.getLogger(__name__)


def _positive_samples(t, values):
    t = np.asarray(t, dtype=float)
    values = np.abs(np.asarray(values))
    keep = values > 0
    if keep.sum() < 2:
        raise ValueError("need at least two non-zero samples to fit")
    return t[keep], values[keep]


def fit_power_law(t: Sequence[float], values: Sequence[complex]) -> Dict[str, float]:
    """
    Least-squares fit |values| ~ C t^p in log-log coordinates.

    Returns
    -------
    dict
        ``exponent`` p, ``prefactor`` C, ``stderr`` of p and ``r_squared``.

    Examples
    --------
    >>> from pynnls.harness import fit_power_law
    >>> fit = fit_power_law([1, 10, 100], [2.0, 0.2, 0.02])
    >>> round(fit["exponent"], 12)
    -1.0
    """
    t, values = _positive_samples(t, values)
    fit = linregress(np.log(t), np.log(values))
    return {
        "exponent": float(fit.slope),
        "prefactor": float(np.exp(fit.intercept)),
        "stderr": float(fit.stderr),
        "r_squared": float(fit.rvalue**2),
    }


def fit_exponential_rate(
    t: Sequence[float], values: Sequence[complex]
) -> Dict[str, float]:
    """
    Least-squares fit |values| ~ C exp(-h t).

    Returns
    -------
    dict
        ``rate`` h (positive for decay), ``prefactor`` C and ``stderr``.
    """
    t, values = _positive_samples(t, values)
    fit = linregress(t, np.log(values))
    return {
        "rate": float(-fit.slope),
        "prefactor": float(np.exp(fit.intercept)),
        "stderr": float(fit.stderr),
    }


def _exponent_or_floor(t, values) -> float:
    try:
        return fit_power_law(t, values)["exponent"]
    except ValueError:
        return float("-inf")


@dataclass
class RayComparison:
    """Per-time table along one ray and the fitted decay exponents."""

    xi: float
    frame: pd.DataFrame
    report: Dict[str, Any] = field(default_factory=dict)


def compare_ray(
    q0: Potential,
    grid: ReflectionGrid,
    spectrum: DiscreteSpectrum,
    xi: float,
    times: Sequence[float],
    dt: float,
    n: int,
    L: float,
    state: Optional[EvolutionState] = None,
    quiet: bool = True,
    allow_truncation: bool = False,
) -> RayComparison:
    """
    Compare the split-step field with the long-time approximation on x = 4 xi t.

    Parameters
    ----------
    q0 : Potential
        Initial datum.
    grid : ReflectionGrid
        Reflection coefficients of q0 (fine enough for the phase context).
    spectrum : DiscreteSpectrum
        Discrete spectrum of q0.
    xi : float
        Ray parameter.
    times : sequence of float
        Increasing sample times, all positive.
    dt, n, L : float, int, float
        Split-step parameters.
    state : EvolutionState, optional
        Precomputed evolution carrying snapshots at ``times``; evolved here
        when missing.
    quiet : bool, default True
        Progress output of the evolution.
    allow_truncation : bool, default False
        Passed to :meth:`PhaseContext.from_grid`.

    Returns
    -------
    RayComparison
        Frame columns t, x, q_pde, q_asym, q_sol, dispersive, abs_q_pde,
        error; report with the fitted amplitude exponent, the expected
        -1/2 + Im nu(-xi), the fitted error exponent and the declared order.
    """
    times = validate_increasing(times, "times")
    if times[0] <= 0:
        raise ValueError("comparison times must be positive")

    ctx = PhaseContext.from_grid(grid, xi, allow_truncation=allow_truncation)
    part = classify(spectrum, xi) if len(spectrum) else None
    if state is None or any(t not in state.snapshots for t in times):
        state = evolve(q0, times[-1], dt, n=n, L=L, snapshot_times=times, quiet=quiet)

    rows = []
    for t in times:
        x = 4.0 * xi * t
        snapshot = EvolutionState(state.snapshots[t], state.L, t, state.sigma)
        q_pde = complex(snapshot.sample(x)[0])
        approx = asymptotic_q(spectrum, part, ctx, grid, x, t)
        rows.append(
            {
                "t": t,
                "x": x,
                "q_pde": q_pde,
                "q_asym": approx.value,
                "q_sol": approx.q_sol,
                "dispersive": approx.dispersive.value,
                "abs_q_pde": abs(q_pde),
                "error": abs(q_pde - approx.value),
            }
        )
    frame = pd.DataFrame(rows)

    # an identically vanishing column has exponent -inf
    amplitude = _exponent_or_floor(frame["t"], frame["abs_q_pde"])
    error = _exponent_or_floor(frame["t"], frame["error"])
    declared = error_order(ctx.nu_at_xi.imag)
    report = {
        "xi": xi,
        "phase": ctx.to_dict(),
        "amplitude_exponent": amplitude,
        "expected_amplitude_exponent": -0.5 + ctx.nu_at_xi.imag,
        "error_exponent": error,
        "declared_order": declared,
        "quasi_power_drift": max(e["quasi_power_drift"] for e in state.log),
    }
    logger.info(
        f"Ray xi = {xi}: amplitude exponent {amplitude:.4f} "
        f"(expected {report['expected_amplitude_exponent']:.4f}), "
        f"error exponent {error:.4f} (declared {declared:.4f})"
    )
    return RayComparison(xi, frame, report)
