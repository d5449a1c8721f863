"""
pynnls: inverse scattering and long-time asymptotics for the nonlocal NLS equation.

This package computes the scattering data of a decaying initial datum for
i q_t + q_xx + 2 sigma q^2(x,t) conj(q(-x,t)) = 0, locates its discrete
spectrum, builds the reflectionless (soliton) fields and the leading
dispersive term along rays x = 4 xi t, and checks them against a split-step
Fourier integrator.
"""

__version__ = "0.1.0"
__author__ = "pynnls developers"

from .errors import (
    NNLSError,
    ConfigError,
    BoundaryLeak,
    SingularSystem,
    ZeroDenominator,
)
from .specfun import (
    BranchSpec,
    complex_gamma,
    reciprocal_gamma,
    complex_log_principal,
    branch_log,
    branch_power,
)
from .potential import (
    DecayClass,
    Potential,
    make_grid,
    gaussian_potential,
    box_potential,
    sech_potential,
    potential_from_dict,
    load_potential,
)
from .scattering import (
    JostSide,
    jost_left,
    jost_right,
    scattering_sample,
    a1_analytic,
    a2_analytic,
    a1_function,
    a2_function,
    ReflectionGrid,
    invariant_residuals,
    check_invariants,
    reflection_grid,
)
from .spectrum import (
    Rectangle,
    winding_number,
    locate_zeros,
    DiscreteSpectrum,
    norming_constants,
    find_spectrum,
    DeltaPartition,
    classify,
    blaschke_T,
)
from .phase import (
    theta,
    nu,
    PhaseContext,
    chi,
    delta,
    delta_jump,
    log_delta_direct,
    holder_ratio,
)
from .soliton import (
    ReflectionlessData,
    solve_residues,
    q_sol,
    q_sol_grid,
    msol_matrix,
    msol_first_moment,
    residue_check,
    q_delta,
)
from .dispersive import (
    modulation,
    beta_tilde,
    error_order,
    dispersive_term,
    asymptotic_q,
)
from .pdeoracle import (
    EvolutionState,
    step,
    evolve,
    quasi_power,
    pde_residual,
    free_gaussian,
)
from .harness import fit_power_law, fit_exponential_rate, compare_ray
from .settings import (
    get_tolerance,
    set_tolerance,
    reset_tolerances,
    tolerance_snapshot,
    show_tolerances,
    set_t_convention,
    get_t_convention,
    set_cache_path,
    get_cache_path,
)
from .cache import list_cache, remove_from_cache, clear_cache

__all__ = [
    "NNLSError",
    "ConfigError",
    "BoundaryLeak",
    "SingularSystem",
    "ZeroDenominator",
    "BranchSpec",
    "complex_gamma",
    "reciprocal_gamma",
    "complex_log_principal",
    "branch_log",
    "branch_power",
    "DecayClass",
    "Potential",
    "make_grid",
    "gaussian_potential",
    "box_potential",
    "sech_potential",
    "potential_from_dict",
    "load_potential",
    "JostSide",
    "jost_left",
    "jost_right",
    "scattering_sample",
    "a1_analytic",
    "a2_analytic",
    "a1_function",
    "a2_function",
    "ReflectionGrid",
    "invariant_residuals",
    "check_invariants",
    "reflection_grid",
    "Rectangle",
    "winding_number",
    "locate_zeros",
    "DiscreteSpectrum",
    "norming_constants",
    "find_spectrum",
    "DeltaPartition",
    "classify",
    "blaschke_T",
    "theta",
    "nu",
    "PhaseContext",
    "chi",
    "delta",
    "delta_jump",
    "log_delta_direct",
    "holder_ratio",
    "ReflectionlessData",
    "solve_residues",
    "q_sol",
    "q_sol_grid",
    "msol_matrix",
    "msol_first_moment",
    "residue_check",
    "q_delta",
    "modulation",
    "beta_tilde",
    "error_order",
    "dispersive_term",
    "asymptotic_q",
    "EvolutionState",
    "step",
    "evolve",
    "quasi_power",
    "pde_residual",
    "free_gaussian",
    "fit_power_law",
    "fit_exponential_rate",
    "compare_ray",
    "get_tolerance",
    "set_tolerance",
    "reset_tolerances",
    "tolerance_snapshot",
    "show_tolerances",
    "set_t_convention",
    "get_t_convention",
    "set_cache_path",
    "get_cache_path",
    "list_cache",
    "remove_from_cache",
    "clear_cache",
]
