"""Tests for the complex gamma function and branch-controlled logarithms."""

import cmath
import math

import mpmath
import numpy as np
import pytest

from pynnls.errors import OnCutError, PoleError, ZeroArgument
from pynnls.specfun import (
    BranchSpec,
    branch_log,
    branch_power,
    complex_gamma,
    complex_log_principal,
    reciprocal_gamma,
)


def gamma_reference(z):
    """High-precision gamma value from mpmath."""
    return complex(mpmath.gamma(mpmath.mpc(z.real, z.imag)))


class TestComplexGamma:
    """Lanczos gamma against mpmath and classical identities."""

    @pytest.mark.parametrize(
        "z", [0.5, 1.0, 2.5, 3 + 4j, -2.5 + 0.3j, 0.1 - 7j, 10 + 1j, -0.5]
    )
    def test_matches_mpmath(self, z):
        z = complex(z)
        expected = gamma_reference(z)
        assert abs(complex_gamma(z) - expected) <= 1e-12 * abs(expected)

    @pytest.mark.parametrize("n", [1, 2, 3, 6, 10])
    def test_factorials(self, n):
        assert complex_gamma(n) == pytest.approx(math.factorial(n - 1), rel=1e-13)

    def test_half(self):
        assert complex_gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)

    @pytest.mark.parametrize("z", [0.3 + 0.2j, -1.7 + 0.4j, 2 - 3j])
    def test_reflection_formula(self, z):
        product = complex_gamma(z) * complex_gamma(1 - z)
        assert product == pytest.approx(math.pi / cmath.sin(math.pi * z), rel=1e-12)

    @pytest.mark.parametrize("y", [0.5, 1.0, 3.0])
    def test_modulus_on_imaginary_axis(self, y):
        # |Gamma(iy)|^2 = pi / (y sinh(pi y))
        expected = math.pi / (y * math.sinh(math.pi * y))
        assert abs(complex_gamma(1j * y)) ** 2 == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("z", [0, -1, -2, -10])
    def test_poles_raise(self, z):
        with pytest.raises(PoleError):
            complex_gamma(z)

    @pytest.mark.parametrize("z", [0, -1, -5])
    def test_reciprocal_gamma_vanishes_at_poles(self, z):
        assert reciprocal_gamma(z) == 0

    def test_reciprocal_gamma_regular_point(self):
        assert reciprocal_gamma(4) == pytest.approx(1 / 6, rel=1e-13)


class TestLogarithms:
    """Principal logarithm and logarithms with a declared cut."""

    def test_principal_log_negative_real_axis(self):
        assert complex_log_principal(-1).imag == pytest.approx(math.pi)
        assert complex_log_principal(complex(-1, -0.0)).imag == pytest.approx(math.pi)

    def test_principal_log_zero_raises(self):
        with pytest.raises(ZeroArgument):
            complex_log_principal(0)

    def test_principal_branch_matches_cmath(self):
        w = 0.3 - 2j
        assert branch_log(w, BranchSpec.principal()) == pytest.approx(cmath.log(w))

    def test_cut_along_negative_imaginary_axis(self):
        spec = BranchSpec(0j, -1j)
        # arguments run over (-pi/2, 3pi/2)
        assert branch_log(-1, spec).imag == pytest.approx(math.pi)
        assert branch_log(-1 + 1e-3j, spec).imag == pytest.approx(
            math.pi - 1e-3, abs=1e-6
        )

    def test_shifted_anchor(self):
        spec = BranchSpec(2 + 0j, -1 + 0j)
        assert branch_log(3, spec) == pytest.approx(0j, abs=1e-15)

    @pytest.mark.parametrize("w", [-1.0, -5.0, 0.0])
    def test_on_cut_raises(self, w):
        with pytest.raises(OnCutError):
            branch_log(w, BranchSpec.principal())

    def test_non_unit_direction_rejected(self):
        with pytest.raises(ValueError):
            BranchSpec(0j, 2 + 0j)


class TestBranchPower:
    """Powers through the declared branch."""

    def test_i_to_the_i(self):
        value = branch_power(1j, 1j, BranchSpec.principal())
        assert value == pytest.approx(math.exp(-math.pi / 2), rel=1e-14)

    def test_square_root_continuous_across_positive_axis_with_rotated_cut(self):
        spec = BranchSpec(0j, -1j)
        above = branch_power(1 + 1e-9j, 0.5, spec)
        below = branch_power(1 - 1e-9j, 0.5, spec)
        assert above == pytest.approx(below, abs=1e-8)

    def test_exponent_one_returns_shifted_base(self):
        spec = BranchSpec(1 + 1j, -1 + 0j)
        assert branch_power(3 + 1j, 1, spec) == 2

    def test_jump_across_cut(self):
        spec = BranchSpec.principal()
        above = branch_power(-2 + 1e-12j, 0.5, spec)
        below = branch_power(-2 - 1e-12j, 0.5, spec)
        np.testing.assert_allclose(above, 1j * math.sqrt(2), rtol=1e-10)
        np.testing.assert_allclose(below, -1j * math.sqrt(2), rtol=1e-10)
