"""
Tests for the command-line interface: exit codes, manifests and outputs.
"""

import json
from unittest.mock import patch

import pandas as pd
import pytest

from pynnls import cli
from pynnls.errors import SingularSystem

ZERO_POTENTIAL = {"kind": "gaussian", "amplitude": 0.0, "L": 5.0, "n": 201}

ONE_SOLITON = {
    "sigma": 1,
    "omegas": [[0.0, 0.5]],
    "b_omega": [1.0],
    "gammas": [[0.0, -0.5]],
    "btilde_gamma": [-1.0],
}


def write_config(tmp_path, doc):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(doc))
    return str(path)


def run_cli(tmp_path, command, doc, *extra):
    out = tmp_path / "out"
    argv = ["--quiet", command, "--config", write_config(tmp_path, doc)]
    argv += ["--out", str(out), *extra]
    return cli.main(argv), out


def read_manifest(out):
    with open(out / "manifest.json") as f:
        return json.load(f)


def _raise_file_not_found(run):
    raise FileNotFoundError(2, "No such file or directory", "missing.csv")


class TestParser:
    def test_no_command_prints_help(self, capsys):
        assert cli.main([]) == cli.EXIT_CONFIG
        assert "usage" in capsys.readouterr().out

    def test_config_is_required(self):
        with pytest.raises(SystemExit):
            cli.build_parser().parse_args(["scatter"])

    @pytest.mark.parametrize("xi,label", [(0.25, "p0_25"), (-1.0, "m1"), (0.0, "p0")])
    def test_ray_label(self, xi, label):
        assert cli._ray_label(xi) == label


class TestConfigErrors:
    def test_malformed_json(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("{not json")
        assert cli.main(["scatter", "--config", str(path)]) == cli.EXIT_CONFIG

    def test_missing_file(self, tmp_path):
        path = str(tmp_path / "missing.json")
        assert cli.main(["scatter", "--config", path]) == cli.EXIT_CONFIG

    def test_missing_potential_writes_manifest(self, tmp_path):
        code, out = run_cli(tmp_path, "scatter", {"scatter": {}})
        assert code == cli.EXIT_CONFIG
        manifest = read_manifest(out)
        assert manifest["status"] == "config_error"
        assert manifest["key"] == "potential"

    def test_empty_time_window(self, tmp_path):
        doc = {"potential": ZERO_POTENTIAL, "asymptote": {"rays": [0.5], "times": []}}
        code, out = run_cli(tmp_path, "asymptote", doc)
        assert code == cli.EXIT_CONFIG
        assert read_manifest(out)["key"] == "times"

    def test_missing_rays(self, tmp_path):
        doc = {"potential": ZERO_POTENTIAL, "compare": {"times": [1.0]}}
        code, out = run_cli(tmp_path, "compare", doc)
        assert code == cli.EXIT_CONFIG
        assert read_manifest(out)["key"] == "rays"

    @pytest.mark.parametrize("override", ["picard_tol", "no_such_tolerance=1"])
    def test_bad_tolerance_override(self, tmp_path, override):
        doc = {"potential": ZERO_POTENTIAL}
        code, _ = run_cli(tmp_path, "scatter", doc, "--tol-override", override)
        assert code == cli.EXIT_CONFIG

    def test_missing_spectrum_file(self, tmp_path):
        potential = {"kind": "reflectionless", "spectrum_path": "nope.json"}
        code, out = run_cli(tmp_path, "scatter", {"potential": potential})
        assert code == cli.EXIT_CONFIG
        manifest = read_manifest(out)
        assert manifest["status"] == "config_error"
        assert manifest["key"] == "spectrum_path"

    def test_unreadable_input_is_config_error(self, tmp_path):
        doc = {"potential": ZERO_POTENTIAL}
        with patch.dict(cli.HANDLERS, {"scatter": _raise_file_not_found}):
            code, out = run_cli(tmp_path, "scatter", doc)
        assert code == cli.EXIT_CONFIG
        assert read_manifest(out)["key"] == "missing.csv"


class TestScatter:
    def test_zero_potential(self, tmp_path):
        doc = {"potential": ZERO_POTENTIAL, "scatter": {"kmin": -1, "kmax": 1, "n": 5}}
        code, out = run_cli(tmp_path, "scatter", doc)
        assert code == cli.EXIT_OK
        manifest = read_manifest(out)
        assert manifest["status"] == "ok"
        assert manifest["outputs"] == ["reflection_grid.csv"]
        assert manifest["config"] == doc
        assert manifest["t_convention"] == "delta_plus"
        frame = pd.read_csv(out / "reflection_grid.csv")
        assert len(frame) == 5
        assert (frame["re_r1"] == 0).all()

    def test_overrides_recorded(self, tmp_path):
        doc = {
            "potential": ZERO_POTENTIAL,
            "scatter": {"n": 3},
            "tolerances": {"quad_abs": 1e-9},
            "t_convention": "spectrum",
        }
        code, out = run_cli(
            tmp_path, "scatter", doc, "--tol-override", "picard_tol=1e-11"
        )
        assert code == cli.EXIT_OK
        manifest = read_manifest(out)
        assert manifest["tolerances"]["quad_abs"] == 1e-9
        assert manifest["tolerances"]["picard_tol"] == 1e-11
        assert manifest["t_convention"] == "spectrum"

    def test_failed_invariants(self, tmp_path):
        doc = {"potential": ZERO_POTENTIAL, "scatter": {"n": 3, "invariant_tol": -1}}
        code, out = run_cli(tmp_path, "scatter", doc)
        assert code == cli.EXIT_DIAGNOSTIC
        manifest = read_manifest(out)
        assert manifest["status"] == "diagnostic_failure"
        assert "det" in manifest["failed"]

    def test_pipeline_failure(self, tmp_path):
        def failing(run):
            raise SingularSystem(1e20)

        with patch.dict(cli.HANDLERS, {"scatter": failing}):
            code, out = run_cli(tmp_path, "scatter", {"potential": ZERO_POTENTIAL})
        assert code == cli.EXIT_PIPELINE
        manifest = read_manifest(out)
        assert manifest["status"] == "failed"
        assert manifest["error_type"] == "SingularSystem"


class TestSpectrumAndSoliton:
    def test_known_spectrum(self, tmp_path):
        doc = {
            "potential": ZERO_POTENTIAL,
            "spectrum": {"known": ONE_SOLITON, "rays": [0.5, -0.5]},
        }
        code, out = run_cli(tmp_path, "spectrum", doc)
        assert code == cli.EXIT_OK
        result = read_manifest(out)["result"]
        assert result["n_poles"] == 2
        assert set(result["partitions"]) == {"0.5", "-0.5"}
        with open(out / "spectrum.json") as f:
            assert json.load(f)["c"] == [[0.0, 1.0]]

    def test_soliton_field(self, tmp_path):
        doc = {"soliton": {"spectrum": ONE_SOLITON, "L": 4.0, "n": 9, "times": [0, 1]}}
        code, out = run_cli(tmp_path, "soliton", doc)
        assert code == cli.EXIT_OK
        frame = pd.read_csv(out / "soliton.csv")
        assert len(frame) == 18
        origin = frame[(frame["t"] == 0) & (frame["x"] == 0)]
        assert origin["re_q_sol"].iloc[0] == pytest.approx(-1.0)
        residues = read_manifest(out)["result"]["residue_check"]
        assert max(residues.values()) < 1e-8

    def test_soliton_needs_spectrum(self, tmp_path):
        code, _ = run_cli(tmp_path, "soliton", {"soliton": {}})
        assert code == cli.EXIT_CONFIG


class TestEvolve:
    def test_snapshots(self, tmp_path):
        doc = {
            "potential": {"kind": "gaussian", "amplitude": 0.1, "L": 10.0, "n": 401},
            "evolve": {"t_end": 0.2, "dt": 0.01, "stride": 0.1, "n": 256, "L": 30.0},
        }
        code, out = run_cli(tmp_path, "evolve", doc)
        assert code == cli.EXIT_OK
        frame = pd.read_csv(out / "snapshots.csv")
        assert sorted(frame["t"].unique()) == pytest.approx([0.0, 0.1, 0.2])
        run = read_manifest(out)["result"]["run"]
        assert run["n"] == 256 and run["dt"] == 0.01


class TestAsymptote:
    def test_zero_potential_ray(self, tmp_path):
        doc = {
            "potential": ZERO_POTENTIAL,
            "asymptote": {
                "rays": [0.5],
                "times": [1.0, 2.0],
                "grid": {"kmin": -2.0, "kmax": 2.0, "n": 401},
            },
        }
        code, out = run_cli(tmp_path, "asymptote", doc)
        assert code == cli.EXIT_OK
        frame = pd.read_csv(out / "asymptote_xi_p0_5.csv")
        assert frame["t"].tolist() == [1.0, 2.0]
        assert frame["x"].tolist() == [2.0, 4.0]
        result = read_manifest(out)["result"]
        assert list(result["rays"]) == ["0.5"]
        assert result["spectrum"]["omegas"] == []
