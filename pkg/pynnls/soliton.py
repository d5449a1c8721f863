"""
Reflectionless Riemann-Hilbert problem: residue system, multi-soliton field
q_sol and its reduction q^Delta to the poles that dominate along a ray.

With zero reflection M_sol is rational,

    M_sol(k) = I + sum_n [alpha_n, 0]/(k - w_n) + sum_m [0, beta_m]/(k - g_m),

and the residue conditions become a dense linear system for the vectors
alpha_n, beta_m.
"""

import cmath
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np
import scipy.linalg

from .errors import OverflowRegime, SingularSystem
from .phase import PhaseContext, delta
from .settings import get_tolerance
from .spectrum import DeltaPartition, DiscreteSpectrum, blaschke_T
from .utils import complex_pairs, validate_sigma

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class ReflectionlessData:
    """
    Poles and constants of a reflectionless Riemann-Hilbert problem.

    Attributes
    ----------
    poles1, c_hat : numpy.ndarray
        Poles w_n of the first column (Im > 0) and their constants.
    poles2, d_hat : numpy.ndarray
        Poles g_m of the second column (Im < 0) and their constants.
    sigma : int
        Sign of the nonlinearity.
    """

    poles1: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    c_hat: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    poles2: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    d_hat: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    sigma: int = 1

    def __post_init__(self):
        validate_sigma(self.sigma)
        self.poles1 = np.asarray(self.poles1, dtype=complex)
        self.c_hat = np.asarray(self.c_hat, dtype=complex)
        self.poles2 = np.asarray(self.poles2, dtype=complex)
        self.d_hat = np.asarray(self.d_hat, dtype=complex)
        shapes_match = (
            self.poles1.shape == self.c_hat.shape
            and self.poles2.shape == self.d_hat.shape
        )
        if not shapes_match:
            raise ValueError("each pole needs exactly one constant")
        if np.any(self.poles1.imag <= 0) or np.any(self.poles2.imag >= 0):
            raise ValueError("poles1 must lie in C+ and poles2 in C-")

    @classmethod
    def from_spectrum(cls, spec: DiscreteSpectrum) -> "ReflectionlessData":
        """Data with the plain norming constants of ``spec``."""
        return cls(spec.omegas, spec.c, spec.gammas, spec.d, spec.sigma)

    @classmethod
    def from_connection_coefficients(
        cls,
        omegas: Sequence[complex],
        b_omega: Sequence[complex],
        gammas: Sequence[complex],
        btilde_gamma: Sequence[complex],
        sigma: int = 1,
    ) -> "ReflectionlessData":
        """
        Consistent reflectionless data from representative poles and b-values.

        Mirrors are added with b(-conj z) = sigma/conj(b(z)) and the constants
        follow from a1 = prod(k - w)/prod(k - g).

        Raises
        ------
        InconsistentData
            If the pole counts differ or a pole on the imaginary axis breaks
            its self-mirror constraint.
        """
        spec = DiscreteSpectrum.from_connection_coefficients(
            omegas, b_omega, gammas, btilde_gamma, sigma=sigma
        )
        return cls.from_spectrum(spec)

    @classmethod
    def modified_by_delta(
        cls, spec: DiscreteSpectrum, ctx: PhaseContext
    ) -> "ReflectionlessData":
        """Data with constants c_n delta(w_n)^-2 and d_m delta(g_m)^2."""
        c = [c_n * delta(w, ctx) ** -2 for w, c_n in zip(spec.omegas, spec.c)]
        d = [d_m * delta(g, ctx) ** 2 for g, d_m in zip(spec.gammas, spec.d)]
        return cls(spec.omegas, c, spec.gammas, d, spec.sigma)

    def is_empty(self) -> bool:
        return len(self.poles1) == 0 and len(self.poles2) == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sigma": self.sigma,
            "poles1": complex_pairs(self.poles1),
            "c_hat": complex_pairs(self.c_hat),
            "poles2": complex_pairs(self.poles2),
            "d_hat": complex_pairs(self.d_hat),
        }


@dataclass(eq=False)
class ResidueSolution:
    """Residue vectors alpha_n (rows of ``alpha``) and beta_m (rows of ``beta``)."""

    alpha: np.ndarray
    beta: np.ndarray
    x: float
    t: float
    condition: float = 1.0
    residual: float = 0.0

    @property
    def alpha1(self) -> np.ndarray:
        return self.alpha[:, 0]

    @property
    def alpha2(self) -> np.ndarray:
        return self.alpha[:, 1]

    @property
    def beta1(self) -> np.ndarray:
        return self.beta[:, 0]

    @property
    def beta2(self) -> np.ndarray:
        return self.beta[:, 1]


def _exponential(z: complex, exponent: complex) -> complex:
    if exponent.real > get_tolerance("exponent_max"):
        raise OverflowRegime(z, exponent.real)
    return cmath.exp(exponent)


def _driving_terms(data: ReflectionlessData, x: float, t: float):
    """c_n e^{2it theta(w_n)} and d_m e^{-2it theta(g_m)}, t theta = kx + 2k^2 t."""
    C = np.array(
        [
            c * _exponential(w, 2j * w * x + 4j * w * w * t)
            for w, c in zip(data.poles1, data.c_hat)
        ],
        dtype=complex,
    )
    D = np.array(
        [
            d * _exponential(g, -2j * g * x - 4j * g * g * t)
            for g, d in zip(data.poles2, data.d_hat)
        ],
        dtype=complex,
    )
    return C, D


def solve_residues(data: ReflectionlessData, x: float, t: float) -> ResidueSolution:
    """
    Solve the residue conditions of M_sol at (x, t).

    The unknowns satisfy

        alpha_p = C_p (e2 + sum_m beta_m / (w_p - g_m))
        beta_q  = D_q (e1 + sum_n alpha_n / (g_q - w_n))

    with C_p = c_p e^{2it theta(w_p)} and D_q = d_q e^{-2it theta(g_q)}. Both
    vector components share the matrix I - K and are solved with one LU
    factorisation.

    Parameters
    ----------
    data : ReflectionlessData
        Poles and constants (empty sets allowed).
    x, t : float
        Space and time.

    Returns
    -------
    ResidueSolution

    Raises
    ------
    SingularSystem
        If the condition number exceeds ``condition_max``.
    OverflowRegime
        If an exponential would overflow.
    """
    N, M = len(data.poles1), len(data.poles2)
    if N + M == 0:
        empty = np.zeros((0, 2), dtype=complex)
        return ResidueSolution(empty, empty.copy(), x, t)

    C, D = _driving_terms(data, x, t)
    w, g = data.poles1, data.poles2
    A = np.eye(N + M, dtype=complex)
    if N and M:
        A[:N, N:] = -C[:, None] / (w[:, None] - g[None, :])
        A[N:, :N] = -D[:, None] / (g[:, None] - w[None, :])

    rhs = np.zeros((N + M, 2), dtype=complex)
    rhs[N:, 0] = D
    rhs[:N, 1] = C

    # diagonal similarity scaling removes the e^{+-2 Im(z) x} imbalance
    B, (scale, _) = scipy.linalg.matrix_balance(A, permute=False, separate=True)
    scaled_rhs = rhs / scale[:, None]
    condition = float(np.linalg.cond(B))
    if not np.isfinite(condition) or condition > get_tolerance("condition_max"):
        raise SingularSystem(condition)
    y = scipy.linalg.lu_solve(scipy.linalg.lu_factor(B), scaled_rhs)
    residual = float(np.max(np.abs(B @ y - scaled_rhs)))
    u = y * scale[:, None]
    logger.debug(
        f"Residue system at x = {x}, t = {t}: size {N + M}, cond {condition:.2e}, "
        f"residual {residual:.1e}"
    )
    return ResidueSolution(u[:N], u[N:], x, t, condition, residual)


def q_sol(data: ReflectionlessData, x: float, t: float) -> complex:
    """
    Multi-soliton field q_sol(x, t) = 2i sum_m beta_m^(1).

    Examples
    --------
    >>> from pynnls.soliton import ReflectionlessData, q_sol
    >>> data = ReflectionlessData.from_connection_coefficients(
    ...     [0.5j], [1.0], [-0.5j], [-1.0]
    ... )
    >>> abs(q_sol(data, 0.0, 0.0) + 1.0) < 1e-12
    True
    """
    solution = solve_residues(data, x, t)
    return complex(2j * np.sum(solution.beta1))


def q_sol_grid(data: ReflectionlessData, x: np.ndarray, t: float) -> np.ndarray:
    """q_sol at every point of ``x`` for one time."""
    return np.array([q_sol(data, float(xj), t) for xj in np.asarray(x)], dtype=complex)


def msol_matrix(
    data: ReflectionlessData,
    x: float,
    t: float,
    k: complex,
    solution: Optional[ResidueSolution] = None,
) -> np.ndarray:
    """M_sol(x, t; k) assembled from the residue vectors."""
    solution = solution or solve_residues(data, x, t)
    value = np.eye(2, dtype=complex)
    if len(data.poles1):
        value[:, 0] += np.sum(solution.alpha / (k - data.poles1)[:, None], axis=0)
    if len(data.poles2):
        value[:, 1] += np.sum(solution.beta / (k - data.poles2)[:, None], axis=0)
    return value


def msol_first_moment(solution: ResidueSolution) -> np.ndarray:
    """M_sol^(1), the 1/k coefficient of M_sol at infinity."""
    moment = np.zeros((2, 2), dtype=complex)
    moment[:, 0] = np.sum(solution.alpha, axis=0)
    moment[:, 1] = np.sum(solution.beta, axis=0)
    return moment


def _regular_column(
    data: ReflectionlessData, solution: ResidueSolution, k: complex, column: int
) -> np.ndarray:
    """Column of M_sol(k) whose poles lie in the other half-plane from k."""
    value = np.zeros(2, dtype=complex)
    value[column] = 1.0
    if column == 0 and len(data.poles1):
        value += np.sum(solution.alpha / (k - data.poles1)[:, None], axis=0)
    if column == 1 and len(data.poles2):
        value += np.sum(solution.beta / (k - data.poles2)[:, None], axis=0)
    return value


def residue_check(
    data: ReflectionlessData, x: float, t: float, radius: float = 1e-4
) -> float:
    """
    Largest deviation of the residues of M_sol from the prescribed ones.

    The residue at each pole is measured as the mean of (k - z) M_sol(k) over
    four points k = z + radius * i^j, which removes the regular part up to
    O(radius^4), and compared with the rank-one residue the jump data
    prescribe: c e^{2it theta(w)} [M_2(w), 0] at w and
    d e^{-2it theta(g)} [0, M_1(g)] at g.
    """
    solution = solve_residues(data, x, t)
    C, D = _driving_terms(data, x, t)
    offsets = radius * np.array([1, 1j, -1, -1j])
    worst = 0.0
    for column, poles, factors in ((0, data.poles1, C), (1, data.poles2, D)):
        for z, factor in zip(poles, factors):
            measured = np.mean(
                [h * msol_matrix(data, x, t, z + h, solution) for h in offsets], axis=0
            )
            prescribed = np.zeros((2, 2), dtype=complex)
            regular = _regular_column(data, solution, z, 1 - column)
            prescribed[:, column] = factor * regular
            worst = max(worst, float(np.max(np.abs(measured - prescribed))))
    return worst


def q_delta(
    spec: DiscreteSpectrum, part: DeltaPartition, ctx: PhaseContext, x: float, t: float
) -> complex:
    """
    Field q^Delta of the Delta-reduced reflectionless data.

    The reduced data keep only the w-type poles of Delta, with constants
    c_n T(w_n)^2 delta(w_n)^-2, and no g-type poles.

    Returns
    -------
    complex
        q_sol of the reduced data. With no second-column poles the
        reconstruction 2i sum beta^(1) is an empty sum.
    """
    return q_sol(delta_reduced_data(spec, part, ctx), x, t)


def delta_reduced_data(
    spec: DiscreteSpectrum, part: DeltaPartition, ctx: PhaseContext
) -> ReflectionlessData:
    """Reflectionless data {w_n, c_n T(w_n)^2 delta(w_n)^-2 : w_n in Delta}."""
    match = get_tolerance("mirror_match")
    poles, constants = [], []
    for w in part.delta:
        index = int(np.argmin(np.abs(spec.omegas - w)))
        if abs(spec.omegas[index] - w) > match * max(1.0, abs(w)):
            raise ValueError(f"Delta pole {w} is not a zero of a1 in the spectrum")
        T = blaschke_T(w, part)
        poles.append(w)
        constants.append(spec.c[index] * T**2 * delta(w, ctx) ** -2)
    return ReflectionlessData(poles, constants, sigma=spec.sigma)
