"""Tests for initial-data construction, ingestion and diagnostics."""

import json
import math

import numpy as np
import pandas as pd
import pytest

import pynnls
from pynnls.errors import ConfigError
from pynnls.potential import (
    REFLECTIONLESS_L,
    REFLECTIONLESS_N,
    REFLECTIONLESS_SPACING,
    DecayClass,
    Potential,
    box_potential,
    gaussian_potential,
    load_potential,
    make_grid,
    potential_from_dict,
    reflectionless_grid_size,
    sech_potential,
)
from pynnls.utils import parse_complex, validate_increasing, write_csv

ONE_SOLITON = {
    "sigma": 1,
    "omegas": [[0.0, 0.5]],
    "b_omega": [1.0],
    "gammas": [[0.0, -0.5]],
    "btilde_gamma": [-1.0],
}


class TestGrid:
    def test_symmetric_odd_grid(self):
        x = make_grid(5.0, 11)
        np.testing.assert_array_equal(x, -x[::-1])
        assert x[5] == 0.0

    @pytest.mark.parametrize("n", [10, 2, 4.5])
    def test_bad_node_counts(self, n):
        with pytest.raises(ConfigError):
            make_grid(5.0, n)

    def test_asymmetric_samples_rejected(self):
        with pytest.raises(ConfigError):
            Potential(np.linspace(-1.0, 2.0, 11), np.zeros(11))

    def test_even_samples_rejected(self):
        with pytest.raises(ConfigError):
            Potential(np.linspace(-1.0, 1.0, 10), np.zeros(10))

    def test_sigma_validated(self):
        with pytest.raises(ConfigError):
            Potential(make_grid(1.0, 11), np.zeros(11), sigma=2)


class TestBuiltInPotentials:
    """Gaussian, box and sech data."""

    def test_gaussian_norms(self):
        q0 = gaussian_potential(0.2, width=1.5, L=15.0, n=3001)
        norms = q0.norms()
        assert norms["L1"] == pytest.approx(0.2 * 1.5 * math.sqrt(math.pi), rel=1e-10)
        assert norms["L2"] == pytest.approx(
            0.2 * math.sqrt(1.5 * math.sqrt(math.pi / 2)), rel=1e-10
        )
        assert norms["L11"] > norms["L1"]

    def test_neumann_bound(self):
        q0 = gaussian_potential(0.2, L=10.0, n=2001)
        bound = q0.neumann_bound()
        assert bound["column"] == pytest.approx(math.exp(q0.norms()["L1"]))
        assert bound["derivative"] == pytest.approx(
            2 * q0.norms()["L11"] * bound["column"]
        )

    def test_box_jump_nodes_carry_mean(self):
        q0 = box_potential(0.3, left=-1.0, right=0.0, L=2.0, n=401)
        center = q0.n // 2
        assert q0.values[center] == pytest.approx(0.15)
        assert q0.values[center - 1] == pytest.approx(0.3)
        assert q0.values[center + 1] == 0
        assert q0.decay_class is DecayClass.COMPACT_SUPPORT
        assert q0.norms()["L1"] == pytest.approx(0.3, rel=1e-12)

    def test_sech_decay_rate(self):
        q0 = sech_potential(0.5, width=2.0, L=40.0, n=801)
        assert q0.decay_class is DecayClass.EXPONENTIAL
        assert q0.decay_rate == 0.5

    def test_continuation_gates(self):
        assert box_potential(L=2.0, n=401).allows_continuation(1 + 5j)
        assert sech_potential(width=1.0, L=10.0, n=401).allows_continuation(0.3j)
        assert not sech_potential(width=1.0, L=10.0, n=401).allows_continuation(0.6j)
        generic = Potential(make_grid(1.0, 11), np.zeros(11))
        assert generic.allows_continuation(2 + 0j)
        assert not generic.allows_continuation(2 + 0.1j)

    def test_reflected_conj(self):
        x = make_grid(1.0, 5)
        q0 = Potential(x, [1, 2j, 3, 4, 5j], sigma=-1)
        np.testing.assert_allclose(q0.reflected_conj(), [-5j, 4, 3, -2j, 1])

    def test_potential_is_immutable(self):
        q0 = gaussian_potential(L=5.0, n=101)
        with pytest.raises(ValueError):
            q0.values[0] = 1.0


class TestIngestion:
    """JSON documents and CSV samples."""

    def test_gaussian_document(self):
        q0 = potential_from_dict(
            {"kind": "gaussian", "amplitude": [0.1, 0.1], "L": 8.0, "n": 801}
        )
        assert q0.values[q0.n // 2] == pytest.approx(0.1 + 0.1j)
        assert q0.label == "gaussian"

    def test_unknown_kind(self):
        with pytest.raises(ConfigError) as exc:
            potential_from_dict({"kind": "triangle"})
        assert exc.value.key == "kind"

    def test_missing_kind_names_key(self):
        with pytest.raises(ConfigError) as exc:
            potential_from_dict({"amplitude": 0.1})
        assert exc.value.key == "kind"

    def test_bad_amplitude_names_key(self):
        with pytest.raises(ConfigError) as exc:
            potential_from_dict({"kind": "gaussian", "amplitude": [1, 2, 3]})
        assert exc.value.key == "amplitude"

    def test_inline_samples_with_decay(self):
        x = make_grid(2.0, 5)
        q0 = potential_from_dict(
            {
                "kind": "samples",
                "x": list(x),
                "values": [0, [0.1, 0.2], 0.3, 0.1, 0],
                "decay": {"class": "compact_support"},
            }
        )
        assert q0.decay_class is DecayClass.COMPACT_SUPPORT
        assert q0.values[1] == 0.1 + 0.2j

    def test_exponential_decay_requires_rate(self):
        x = make_grid(2.0, 5)
        with pytest.raises(ConfigError):
            potential_from_dict(
                {
                    "kind": "samples",
                    "x": list(x),
                    "values": [0, 0, 0, 0, 0],
                    "decay": {"class": "exponential"},
                }
            )

    def test_csv_samples_relative_path(self, tmp_path):
        x = make_grid(1.0, 5)
        frame = pd.DataFrame({"x": x, "re": [0, 1, 2, 1, 0], "im": [0, 0, 1, 0, 0]})
        frame.to_csv(tmp_path / "q0.csv", index=False)
        (tmp_path / "q0.json").write_text(
            json.dumps({"kind": "samples", "path": "q0.csv"})
        )
        q0 = load_potential(tmp_path / "q0.json")
        assert q0.values[2] == 2 + 1j

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_potential(path)

    def test_reflectionless_document(self):
        q0 = potential_from_dict(
            {"kind": "reflectionless", "spectrum": ONE_SOLITON, "L": 20.0, "n": 801}
        )
        x = q0.x
        expected = -1.0 / np.cosh(x)
        np.testing.assert_allclose(q0.values, expected, atol=1e-10)
        assert q0.decay_class is DecayClass.EXPONENTIAL
        assert q0.decay_rate == pytest.approx(1.0)

    def test_reflectionless_missing_spectrum_file(self, tmp_path):
        with pytest.raises(ConfigError) as exc:
            potential_from_dict(
                {"kind": "reflectionless", "spectrum_path": "nope.json"},
                base_dir=tmp_path,
            )
        assert exc.value.key == "spectrum_path"

    def test_reflectionless_malformed_spectrum_file(self, tmp_path):
        (tmp_path / "spectrum.json").write_text("[1, 2")
        with pytest.raises(ConfigError) as exc:
            potential_from_dict(
                {"kind": "reflectionless", "spectrum_path": "spectrum.json"},
                base_dir=tmp_path,
            )
        assert exc.value.key == "spectrum_path"

    def test_reflectionless_default_grid(self):
        q0 = potential_from_dict({"kind": "reflectionless", "spectrum": ONE_SOLITON})
        assert q0.n == REFLECTIONLESS_N
        assert q0.x[-1] == pytest.approx(REFLECTIONLESS_L)

    @pytest.mark.parametrize("peak", [0.0, 0.5, 1.0])
    def test_grid_size_floor(self, peak):
        assert reflectionless_grid_size(REFLECTIONLESS_L, peak) == REFLECTIONLESS_N

    @pytest.mark.parametrize("peak", [2.0, 4.0, 7.3])
    def test_grid_refines_with_peak(self, peak):
        n = reflectionless_grid_size(20.0, peak)
        assert n % 2 == 1
        assert 40.0 / (n - 1) <= REFLECTIONLESS_SPACING / peak + 1e-12

    def test_empty_csv(self, tmp_path):
        (tmp_path / "q0.csv").write_text("")
        with pytest.raises(ConfigError) as exc:
            potential_from_dict({"kind": "samples", "path": str(tmp_path / "q0.csv")})
        assert exc.value.key == "path"

    def test_non_numeric_csv(self, tmp_path):
        (tmp_path / "q0.csv").write_text("x,re,im\n0,a,b\n1,c,d\n")
        with pytest.raises(ConfigError) as exc:
            potential_from_dict({"kind": "samples", "path": str(tmp_path / "q0.csv")})
        assert exc.value.key == "path"

    @pytest.mark.parametrize(
        "doc,key",
        [
            ({"x": ["a", "b", "c"], "values": [0, 0, 0]}, "x"),
            ({"x": [], "values": []}, "x"),
            ({"x": [-1.0, 0.0, 1.0], "values": 3}, "values"),
        ],
    )
    def test_bad_inline_samples(self, doc, key):
        with pytest.raises(ConfigError) as exc:
            potential_from_dict({"kind": "samples", **doc})
        assert exc.value.key == key


class TestUtils:
    def test_parse_complex(self):
        assert parse_complex([1, -2], "z") == 1 - 2j
        assert parse_complex(0.5, "z") == 0.5
        with pytest.raises(ConfigError):
            parse_complex(True, "z")

    def test_validate_increasing(self):
        assert validate_increasing([1, 2, 3], "times") == [1.0, 2.0, 3.0]
        with pytest.raises(ConfigError):
            validate_increasing([], "times")
        with pytest.raises(ConfigError):
            validate_increasing([1, 1], "times")

    def test_csv_is_byte_reproducible(self, tmp_path):
        frame = pd.DataFrame({"t": [0.1, 1 / 3], "q": [1 + 2j, 1 / 7 - 1j]})
        first = write_csv(frame, tmp_path / "a.csv").read_bytes()
        second = write_csv(frame, tmp_path / "b.csv").read_bytes()
        assert first == second
        header, row, _ = first.decode().split("\n", 2)
        assert header == "t,re_q,im_q"
        assert row == "0.10000000000000001,1,2"
        assert b"\r" not in first

    def test_public_api_exports(self):
        for name in pynnls.__all__:
            assert hasattr(pynnls, name)
