"""Exception hierarchy for pynnls.

Every failure raised by the numerical pipeline derives from ``NNLSError`` so
callers (and the CLI exit-code mapping) can catch the whole family at once.
"""

from typing import Optional


class NNLSError(Exception):
    """Base exception for pynnls with an optional remediation hint."""

    def __init__(self, message: str, suggestion: Optional[str] = None):
        super().__init__(message)
        self.suggestion = suggestion

    def __str__(self):
        msg = super().__str__()
        if self.suggestion:
            msg += f"\n💡 Suggestion: {self.suggestion}"
        return msg


class ConfigError(NNLSError, ValueError):
    """Raised for malformed configuration or potential ingestion input."""

    def __init__(self, message: str, key: Optional[str] = None, suggestion=None):
        super().__init__(message, suggestion=suggestion)
        self.key = key


# --- special functions -----------------------------------------------------


class PoleError(NNLSError):
    """Raised when the gamma function is evaluated at a non-positive integer."""

    def __init__(self, z: complex):
        super().__init__(f"Gamma function has a pole at z = {z}")
        self.z = z


class OnCutError(NNLSError):
    """Raised when a multivalued function is evaluated on its branch cut."""

    def __init__(self, w: complex, details: str = ""):
        super().__init__(
            f"Argument {w} lies on the branch cut{': ' + details if details else ''}",
            suggestion="Evaluate slightly above or below the cut",
        )
        self.w = w


class ZeroArgument(NNLSError):
    """Raised when the logarithm is asked for log(0)."""

    def __init__(self, w: complex):
        super().__init__(f"Logarithm of zero requested (|w| = {abs(w):.3e})")
        self.w = w


# --- direct scattering -----------------------------------------------------


class NoConvergence(NNLSError):
    """Raised when the Picard iteration hits its iteration cap."""

    def __init__(self, iterations: int, residual: float):
        super().__init__(
            f"Picard iteration did not converge after {iterations} iterations "
            f"(last update {residual:.3e})",
            suggestion="Reduce the potential amplitude or raise picard_max_iter",
        )
        self.iterations = iterations
        self.residual = residual


class ContinuationInvalid(NNLSError):
    """Raised when a quantity is requested off the real axis without decay."""

    def __init__(self, k: complex, details: str = ""):
        super().__init__(
            f"Cannot continue to k = {k}{': ' + details if details else ''}",
            suggestion="Declare a compact_support or exponential decay class",
        )
        self.k = k


class ZeroDenominator(NNLSError):
    """Raised when a1 or a2 vanishes on the real axis (spectral singularity)."""

    def __init__(self, k: complex, which: str, value: complex):
        super().__init__(
            f"|{which}({k})| = {abs(value):.3e} is below the spectral-singularity "
            "threshold",
            suggestion="Potentials with real zeros of a1 or a2 are not supported",
        )
        self.k = k
        self.which = which
        self.value = value


# --- discrete spectrum -----------------------------------------------------


class BoundaryZero(NNLSError):
    """Raised when a zero sits on or too close to a search contour."""

    def __init__(self, details: str):
        super().__init__(
            f"Zero too close to the contour: {details}",
            suggestion="Shift or enlarge the search rectangle",
        )


class MultiplicityError(NNLSError):
    """Raised when a cluster of zeros cannot be separated."""

    def __init__(self, center: complex, count: int, size: float):
        super().__init__(
            f"{count} zeros in a cell of size {size:.1e} around {center}; "
            "only simple zeros are supported"
        )
        self.center = center
        self.count = count


class NearDegenerateDerivative(NNLSError):
    """Raised when a'(z) is too small for a reliable norming constant."""

    def __init__(self, z: complex, value: complex):
        super().__init__(f"|a'({z})| = {abs(value):.3e} is nearly degenerate")
        self.z = z
        self.value = value


class OnThresholdError(NNLSError):
    """Raised when a pole's real part coincides with the stationary point."""

    def __init__(self, z: complex, xi: float):
        super().__init__(
            f"Pole {z} has Re z at the stationary point -xi = {-xi}",
            suggestion="Choose a ray xi away from -Re z",
        )
        self.z = z
        self.xi = xi


class PoleHit(NNLSError):
    """Raised when T(z) is evaluated at a root of its denominator."""

    def __init__(self, z: complex, pole: complex):
        super().__init__(f"T evaluated at its pole {pole} (z = {z})")
        self.z = z
        self.pole = pole


class PartitionError(NNLSError):
    """Raised when the Delta-partition cannot supply the indices T needs."""


# --- phase -------------------------------------------------------------------


class VanishingJump(NNLSError):
    """Raised when 1 + sigma*r1*r2 vanishes."""

    def __init__(self, k: float, value: complex):
        super().__init__(f"|1 + sigma*r1*r2| = {abs(value):.3e} at k = {k}")
        self.k = k
        self.value = value


class AssumptionViolation(NNLSError):
    """Raised when Im nu leaves the admissible band (-1/4, 1/2)."""

    def __init__(self, value: float, details: str = ""):
        super().__init__(
            f"Im nu = {value} lies outside (-1/4, 1/2)"
            f"{': ' + details if details else ''}"
        )
        self.value = value


class QuadratureFailure(NNLSError):
    """Raised when adaptive quadrature cannot reach its tolerance."""

    def __init__(self, message: str):
        super().__init__(
            f"Quadrature failed: {message}",
            suggestion="Refine the scattering grid or loosen quad_abs",
        )


# --- reflectionless problem --------------------------------------------------


class SingularSystem(NNLSError):
    """Raised when the residue system is numerically singular."""

    def __init__(self, condition: float):
        super().__init__(f"Residue system condition number {condition:.3e}")
        self.condition = condition


class OverflowRegime(NNLSError):
    """Raised when a residue exponential would overflow."""

    def __init__(self, z: complex, exponent: float):
        super().__init__(
            f"exp(2it theta) at pole {z} has real exponent {exponent:.1f}",
            suggestion="Evaluate at smaller |x| or t",
        )
        self.z = z
        self.exponent = exponent


# --- dispersive term ---------------------------------------------------------


class ZeroReflection(NNLSError):
    """Sentinel raised when the modulation parameter vanishes."""


class InconsistentData(NNLSError):
    """Raised when input data contradicts itself."""


# --- PDE oracle --------------------------------------------------------------


class BoundaryLeak(NNLSError):
    """Raised when the evolved field reaches the periodic boundary."""

    def __init__(self, t: float, edge_max: float):
        super().__init__(
            f"|q| = {edge_max:.3e} near the domain edge at t = {t}",
            suggestion="Enlarge L or shorten t_end",
        )
        self.t = t
        self.edge_max = edge_max
