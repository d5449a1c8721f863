"""
Tests for the zero search, discrete spectrum documents, the Delta-partition
and the Blaschke product T(z).
"""

import json

import numpy as np
import pytest

from pynnls.errors import (
    BoundaryZero,
    ConfigError,
    InconsistentData,
    OnThresholdError,
    PartitionError,
    PoleHit,
)
from pynnls.potential import gaussian_potential, potential_from_dict
from pynnls.spectrum import (
    DiscreteSpectrum,
    Rectangle,
    blaschke_T,
    classify,
    find_spectrum,
    locate_zeros,
    norming_constants,
    mirror_complete,
    reflectionless_constants,
    winding_number,
)


ONE_SOLITON = {
    "sigma": 1,
    "omegas": [[0.0, 0.5]],
    "b_omega": [1.0],
    "gammas": [[0.0, -0.5]],
    "btilde_gamma": [-1.0],
}


def _two_pair_spectrum():
    return DiscreteSpectrum.from_connection_coefficients(
        [0.5 + 1j], [2.0], [0.5 - 1j], [1.0], sigma=1
    )


def _omega_only_spectrum():
    return DiscreteSpectrum([0.5 + 1j, -0.5 + 1j], [1.0, 1.0], [], [])


class TestRectangle:
    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            Rectangle(1.0, 1.0, 0.0, 1.0)

    def test_split_longer_side(self):
        left, right = Rectangle(0.0, 4.0, 0.0, 1.0).split(0.25)
        assert left.re_max == right.re_min == 1.0
        assert left.im_max == right.im_max == 1.0

    def test_conjugate(self):
        mirrored = Rectangle(0.0, 1.0, 0.5, 2.0).conjugate()
        assert (mirrored.im_min, mirrored.im_max) == (-2.0, -0.5)

    def test_corners_counter_clockwise(self):
        corners = Rectangle(0.0, 1.0, 0.0, 1.0).corners()
        assert corners == [0j, 1 + 0j, 1 + 1j, 1j]


class TestZeroSearch:
    @staticmethod
    def cubic(z):
        return (z - (1 + 0.5j)) * (z - (1.5 + 0.7j)) * (z + 3)

    def test_winding_counts_interior_zeros(self):
        assert winding_number(self.cubic, Rectangle(0.0, 2.0, 0.1, 1.0)) == 2
        assert winding_number(self.cubic, Rectangle(-4.0, -2.0, -1.0, 1.0)) == 1
        assert winding_number(self.cubic, Rectangle(3.0, 4.0, 1.0, 2.0)) == 0

    def test_locate_zeros_sorted_by_real_part(self):
        zeros = locate_zeros(self.cubic, Rectangle(0.0, 2.0, 0.1, 1.0))
        assert len(zeros) == 2
        assert abs(zeros[0] - (1 + 0.5j)) < 1e-10
        assert abs(zeros[1] - (1.5 + 0.7j)) < 1e-10

    def test_empty_region(self):
        assert locate_zeros(self.cubic, Rectangle(3.0, 4.0, 1.0, 2.0)) == []

    def test_zero_on_contour_raises(self):
        with pytest.raises(BoundaryZero):
            winding_number(lambda z: z - 1.0, Rectangle(1.0, 2.0, -1.0, 1.0))

    def test_analytic_function_zero(self):
        zeros = locate_zeros(lambda z: np.exp(z) - 2.0, Rectangle(0.0, 1.0, -1.0, 1.0))
        assert zeros == [pytest.approx(np.log(2.0), abs=1e-10)]


class TestConstruction:
    def test_mirror_complete_adds_mirrors(self):
        points, b = mirror_complete([0.5 + 1j], [2.0], sigma=1)
        np.testing.assert_allclose(points, [0.5 + 1j, -0.5 + 1j])
        np.testing.assert_allclose(b, [2.0, 0.5])

    def test_mirror_complete_defocusing_sign(self):
        _, b = mirror_complete([0.5 + 1j], [2j], sigma=-1)
        assert b[1] == pytest.approx(-1.0 / np.conj(2j))

    @pytest.mark.parametrize("sigma,b", [(-1, 1.0), (1, 2.0)])
    def test_self_mirror_constraint(self, sigma, b):
        with pytest.raises(InconsistentData):
            mirror_complete([0.5j], [b], sigma=sigma)

    def test_zero_connection_coefficient(self):
        with pytest.raises(InconsistentData):
            mirror_complete([0.5 + 1j], [0.0], sigma=1)

    def test_one_soliton_constants(self):
        eta = 0.5
        c, d = reflectionless_constants(
            np.array([1j * eta]),
            np.array([1.0]),
            np.array([-1j * eta]),
            np.array([-1.0]),
        )
        assert c[0] == pytest.approx(2j * eta)
        assert d[0] == pytest.approx(2j * eta)

    def test_unbalanced_counts(self):
        with pytest.raises(InconsistentData):
            reflectionless_constants(
                np.array([1j]), np.array([1.0]), np.zeros(0), np.zeros(0)
            )

    def test_sorted_by_real_part(self):
        spec = _two_pair_spectrum()
        assert list(spec.omegas.real) == [-0.5, 0.5]
        assert list(spec.gammas.real) == [-0.5, 0.5]
        assert spec.mirror_residual() == pytest.approx(0.0)
        assert len(spec) == 4

    def test_b_values_follow_sort(self):
        spec = _two_pair_spectrum()
        assert spec.b_omega[spec.omegas.real > 0][0] == pytest.approx(2.0)
        assert spec.b_omega[spec.omegas.real < 0][0] == pytest.approx(0.5)

    def test_half_plane_checks(self):
        with pytest.raises(ConfigError) as exc_info:
            DiscreteSpectrum([0.5 - 1j], [1.0])
        assert exc_info.value.key == "omegas"
        with pytest.raises(ConfigError):
            DiscreteSpectrum(gammas=[0.5 + 1j], d=[1.0])

    def test_constant_count_mismatch(self):
        with pytest.raises(ConfigError):
            DiscreteSpectrum([0.5 + 1j], [1.0, 2.0])


class TestDocuments:
    def test_connection_coefficient_document(self):
        spec = DiscreteSpectrum.from_dict(
            {
                "sigma": 1,
                "omegas": [[0.0, 0.5]],
                "b_omega": [1.0],
                "gammas": [[0.0, -0.5]],
                "btilde_gamma": [-1.0],
            }
        )
        assert spec.c[0] == pytest.approx(1j)
        assert spec.d[0] == pytest.approx(1j)

    def test_round_trip_keeps_constants(self, tmp_path):
        spec = _two_pair_spectrum()
        path = tmp_path / "spectrum.json"
        spec.to_json(path)
        loaded = DiscreteSpectrum.from_json(path)
        np.testing.assert_allclose(loaded.omegas, spec.omegas)
        np.testing.assert_allclose(loaded.c, spec.c)
        np.testing.assert_allclose(loaded.d, spec.d)

    def test_explicit_constants_must_be_mirror_closed(self):
        with pytest.raises(ConfigError):
            DiscreteSpectrum.from_dict({"omegas": [[0.5, 1.0]], "c": [[1.0, 0.0]]})

    def test_missing_constants(self):
        with pytest.raises(ConfigError) as exc_info:
            DiscreteSpectrum.from_dict({"omegas": [[0.0, 0.5]]})
        assert exc_info.value.key == "c"

    def test_not_an_object(self):
        with pytest.raises(ConfigError):
            DiscreteSpectrum.from_dict([1, 2])

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "spectrum.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            DiscreteSpectrum.from_json(path)

    def test_document_is_json_serializable(self):
        json.dumps(_two_pair_spectrum().to_dict())


class TestClassify:
    def test_threshold_pole(self):
        with pytest.raises(OnThresholdError):
            classify(_two_pair_spectrum(), -0.5)

    def test_partition_sets(self):
        part = classify(_two_pair_spectrum(), 1.0)
        assert len(part.delta1) == 2 and len(part.delta2) == 2
        np.testing.assert_allclose(part.delta1_plus, [0.5 + 1j])
        np.testing.assert_allclose(part.delta1_minus, [-0.5 + 1j])
        np.testing.assert_allclose(part.delta2_minus, [-0.5 - 1j])

    def test_no_poles_right_of_threshold(self):
        part = classify(_two_pair_spectrum(), -1.0)
        assert len(part.delta1) == 0 and len(part.delta) == 0
        assert part.metadata["h_bound"] > 0

    def test_delta_equals_delta1_without_a2_zeros(self):
        spec = _omega_only_spectrum()
        np.testing.assert_allclose(classify(spec, 0.0).delta, [0.5 + 1j])
        np.testing.assert_allclose(classify(spec, 1.0).delta, [-0.5 + 1j, 0.5 + 1j])
        assert len(classify(spec, -1.0).delta) == 0

    def test_balanced_right_half_gives_empty_delta(self):
        part = classify(_two_pair_spectrum(), 0.0)
        assert len(part.delta) == 0

    def test_metadata_reports(self):
        part = classify(_two_pair_spectrum(), 0.0)
        assert "wlog_inequality_holds" in part.metadata
        assert len(part.metadata["decaying_rate_report"]) == 4
        json.dumps(part.to_dict())

    @pytest.mark.parametrize("xi", [-2.0, -1.0, 0.0, 1.0, 2.0])
    def test_input_order_does_not_matter(self, xi):
        omegas = [0.5 + 1j, -1.5 + 0.7j, 1.5 + 0.7j, -0.5 + 1j]
        gammas = [-0.5 - 1j, 0.5 - 1j]
        c = [1.0, 2.0, 3.0, 4.0]
        d = [5.0, 6.0]
        forward = DiscreteSpectrum(omegas, c, gammas, d)
        backward = DiscreteSpectrum(omegas[::-1], c[::-1], gammas[::-1], d[::-1])
        assert classify(forward, xi).to_dict() == classify(backward, xi).to_dict()


class TestBlaschke:
    def test_identity_without_a2_zeros(self):
        part = classify(_omega_only_spectrum(), 0.0)
        assert blaschke_T(0.3 + 0.2j, part) == pytest.approx(1.0)

    def test_single_quotient(self):
        part = classify(_two_pair_spectrum(), 0.0)
        z = 2.0 + 0.3j
        expected = (z - (0.5 + 1j)) / (z - (0.5 - 1j))
        assert blaschke_T(z, part) == pytest.approx(expected)
        assert blaschke_T(z, part, convention="spectrum") == pytest.approx(expected)

    def test_mirror_pair_product(self):
        part = classify(_two_pair_spectrum(), 1.0)
        w, g = 0.5 + 1j, 0.5 - 1j
        z = 2.0 + 0.3j
        expected = (z - w) * (z + np.conj(w)) / ((z - g) * (z + np.conj(g)))
        assert blaschke_T(z, part) == pytest.approx(expected)
        assert blaschke_T(0.0, part) == pytest.approx(1.0)

    def test_pole_hit(self):
        part = classify(_two_pair_spectrum(), 0.0)
        with pytest.raises(PoleHit):
            blaschke_T(0.5 - 1j, part)

    def test_index_out_of_range(self):
        spec = DiscreteSpectrum(
            [0.5 + 1j, -0.5 + 1j],
            [1.0, 1.0],
            [0.5 - 1j, -0.5 - 1j, 1.5 - 1j, -1.5 - 1j],
            [1.0] * 4,
        )
        with pytest.raises(PartitionError):
            blaschke_T(3.0, classify(spec, 0.0))


class TestFindSpectrum:
    def test_zero_potential(self):
        spec = find_spectrum(gaussian_potential(0.0, L=5.0, n=201))
        assert spec.is_empty()

    def test_weak_gaussian_has_no_first_quadrant_zeros(self):
        q0 = gaussian_potential(0.2, L=6.0, n=1201)
        spec = find_spectrum(q0, k_max=1.5)
        assert len(spec) == 0


class TestNormingConstants:
    """Direct scattering of a synthesised one-soliton datum, q0 = -sech(x)."""

    @pytest.fixture
    def recovered(self):
        q0 = potential_from_dict(
            {"kind": "reflectionless", "spectrum": ONE_SOLITON, "L": 20.0, "n": 8001}
        )
        return norming_constants(q0, [0.5j, -0.5j])

    def test_recovers_planted_constants(self, recovered):
        planted = DiscreteSpectrum.from_dict(ONE_SOLITON)
        np.testing.assert_allclose(recovered.c, planted.c, atol=1e-4)
        np.testing.assert_allclose(recovered.d, planted.d, atol=1e-4)

    def test_connection_coefficients_are_mirror_consistent(self, recovered):
        # poles on the imaginary axis are their own mirrors, forcing |b| = 1
        b, btilde = recovered.b_omega[0], recovered.btilde_gamma[0]
        assert abs(b) == pytest.approx(1.0, abs=1e-6)
        assert abs(btilde) == pytest.approx(1.0, abs=1e-6)
        assert b == pytest.approx(1.0, abs=1e-4)
        assert btilde == pytest.approx(-1.0, abs=1e-4)

    def test_empty_zero_list(self):
        spec = norming_constants(gaussian_potential(0.1, L=5.0, n=201), [])
        assert spec.is_empty()
