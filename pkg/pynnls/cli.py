#!/usr/bin/env python3
"""
Command-line interface for pynnls.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

import pynnls as nn
from .errors import ConfigError, NNLSError
from .utils import validate_increasing, write_csv, write_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIAGNOSTIC = 3
EXIT_PIPELINE = 4

COMMANDS = ("scatter", "spectrum", "soliton", "evolve", "asymptote", "compare")

# Reflection grids used for phase contexts need spacing <= max_grid_spacing.
DEFAULT_GRID = {"kmin": -6.0, "kmax": 6.0, "n": 2401}


class DiagnosticFailure(NNLSError):
    """Raised when a computed invariant report contains failures."""

    def __init__(self, failed: List[str], report: Optional[Dict[str, Any]] = None):
        super().__init__(f"Invariant diagnostics failed: {', '.join(failed)}")
        self.failed = failed
        self.report = report or {}


@dataclass
class RunConfig:
    """
    Validated configuration document of one CLI run.

    ``doc`` is the raw JSON object; ``section(name)`` returns the
    command-specific block, ``out`` the output directory.
    """

    doc: Dict[str, Any]
    out: Path
    base_dir: Path = Path(".")
    threads: int = 1
    use_cache: bool = False
    quiet: bool = False
    outputs: List[str] = field(default_factory=list)

    @classmethod
    def from_file(cls, path: str, out: Optional[str] = None, **kwargs) -> "RunConfig":
        path = Path(path)
        try:
            with open(path) as f:
                doc = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Malformed JSON in {path}: {e}", key=str(path))
        except OSError as e:
            raise ConfigError(f"Cannot read config {path}: {e}", key="config")
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object", key="config")
        out_dir = Path(out or doc.get("out", "pynnls-out"))
        return cls(doc, out_dir, base_dir=path.parent, **kwargs)

    def section(self, name: str) -> Dict[str, Any]:
        block = self.doc.get(name, {})
        if not isinstance(block, dict):
            raise ConfigError(f"'{name}' must be a JSON object", key=name)
        return block

    def potential(self) -> "nn.Potential":
        if "potential" not in self.doc:
            raise ConfigError("config has no 'potential' block", key="potential")
        return nn.potential_from_dict(self.doc["potential"], base_dir=self.base_dir)

    def write_csv(self, frame: pd.DataFrame, name: str) -> Path:
        path = write_csv(frame, self.out / name)
        self.outputs.append(name)
        logger.info(f"Wrote {path}")
        return path


def _number(block: Dict[str, Any], key: str, default: Any, kind=float):
    value = block.get(key, default)
    try:
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"'{key}' must be a number, got {value!r}", key=key)


def _times(block: Dict[str, Any], key: str = "times") -> List[float]:
    if key not in block:
        raise ConfigError(f"missing t-window '{key}'", key=key)
    times = validate_increasing(block[key], key)
    if times[0] <= 0:
        raise ConfigError(f"'{key}' must be positive", key=key)
    return times


def _rays(block: Dict[str, Any]) -> List[float]:
    if "rays" not in block or not block["rays"]:
        raise ConfigError("missing ray list 'rays'", key="rays")
    try:
        return [float(xi) for xi in block["rays"]]
    except (TypeError, ValueError):
        raise ConfigError("'rays' must be a list of numbers", key="rays")


def _grid(run: RunConfig, q0: "nn.Potential", block: Dict[str, Any]):
    params = {**DEFAULT_GRID, **run.section("grid"), **block.get("grid", {})}
    return nn.reflection_grid(
        q0,
        _number(params, "kmin", None),
        _number(params, "kmax", None),
        _number(params, "n", None, int),
        threads=run.threads,
        use_cache=run.use_cache,
        quiet=run.quiet,
    )


def _spectrum(run: RunConfig, q0: "nn.Potential") -> "nn.DiscreteSpectrum":
    block = run.section("spectrum")
    if "known" in block:
        return nn.DiscreteSpectrum.from_dict(block["known"])
    region = None
    if "region" in block:
        try:
            region = nn.Rectangle(*[float(v) for v in block["region"]])
        except (TypeError, ValueError):
            raise ConfigError(
                "'region' must be [re_min, re_max, im_min, im_max]", key="region"
            )
    return nn.find_spectrum(q0, k_max=_number(block, "k_max", 4.0), region=region)


def _ray_label(xi: float) -> str:
    return f"{xi:+.6g}".replace("+", "p").replace("-", "m").replace(".", "_")


def cmd_scatter(run: RunConfig) -> Dict[str, Any]:
    """Reflection grid CSV and invariant report."""
    block = run.section("scatter")
    q0 = run.potential()
    params = {"kmin": -5.0, "kmax": 5.0, "n": 201, **block}
    grid = nn.reflection_grid(
        q0,
        _number(params, "kmin", None),
        _number(params, "kmax", None),
        _number(params, "n", None, int),
        threads=run.threads,
        use_cache=run.use_cache,
        quiet=run.quiet,
    )
    run.write_csv(grid.to_frame(), "reflection_grid.csv")
    report = nn.check_invariants(grid, tol=_number(block, "invariant_tol", 1e-8))
    result = {"invariants": report, "diagnostics": grid.diagnostics}
    failed = [name for name, item in report.items() if not item["passed"]]
    if failed:
        raise DiagnosticFailure(failed, result)
    return result


def cmd_spectrum(run: RunConfig) -> Dict[str, Any]:
    """Discrete spectrum JSON and the partition at each requested ray."""
    q0 = run.potential()
    spectrum = _spectrum(run, q0)
    spectrum.to_json(run.out / "spectrum.json")
    run.outputs.append("spectrum.json")
    partitions = {}
    for xi in run.section("spectrum").get("rays", []):
        partitions[str(xi)] = nn.classify(spectrum, float(xi)).to_dict()
    return {"n_poles": len(spectrum), "partitions": partitions}


def cmd_soliton(run: RunConfig) -> Dict[str, Any]:
    """Reflectionless field on an (x, t) grid from a spectrum document."""
    block = run.section("soliton")
    if "spectrum" not in block:
        raise ConfigError("soliton block needs a 'spectrum' document", key="spectrum")
    spectrum = nn.DiscreteSpectrum.from_dict(block["spectrum"])
    data = nn.ReflectionlessData.from_spectrum(spectrum)
    L = _number(block, "L", 20.0)
    x = np.linspace(-L, L, _number(block, "n", 801, int))
    times = validate_increasing(block.get("times", [0.0]), "times")

    frames, residues = [], {}
    for t in times:
        values = nn.q_sol_grid(data, x, t)
        frames.append(pd.DataFrame({"t": t, "x": x, "q_sol": values}))
        residues[str(t)] = nn.residue_check(data, 0.0, t)
    run.write_csv(pd.concat(frames, ignore_index=True), "soliton.csv")
    return {"data": data.to_dict(), "residue_check": residues}


def cmd_evolve(run: RunConfig) -> Dict[str, Any]:
    """Split-step evolution with snapshots every ``stride`` time units."""
    block = run.section("evolve")
    q0 = run.potential()
    t_end = _number(block, "t_end", None)
    dt = _number(block, "dt", 1e-3)
    stride = _number(block, "stride", t_end)
    if stride <= 0:
        raise ConfigError("'stride' must be positive", key="stride")
    snapshot_times = list(np.arange(0.0, t_end + 0.5 * stride, stride))
    state = nn.evolve(
        q0,
        t_end,
        dt,
        n=_number(block, "n", 4096, int),
        L=block.get("L"),
        snapshot_times=snapshot_times,
        quiet=run.quiet,
    )
    x = state.x
    frames = [
        pd.DataFrame({"t": t, "x": x, "q": q})
        for t, q in sorted(state.snapshots.items())
    ]
    run.write_csv(pd.concat(frames, ignore_index=True), "snapshots.csv")
    return {"run": state.run_manifest(dt)}


def cmd_asymptote(run: RunConfig) -> Dict[str, Any]:
    """Long-time approximation along each ray at the requested times."""
    block = run.section("asymptote")
    rays, times = _rays(block), _times(block)
    truncate = bool(block.get("allow_truncation", False))
    q0 = run.potential()
    grid = _grid(run, q0, block)
    spectrum = _spectrum(run, q0)

    phases = {}
    for xi in rays:
        ctx = nn.PhaseContext.from_grid(grid, xi, allow_truncation=truncate)
        part = nn.classify(spectrum, xi) if len(spectrum) else None
        rows = [
            nn.asymptotic_q(spectrum, part, ctx, grid, 4.0 * xi * t, t).to_row()
            for t in times
        ]
        run.write_csv(pd.DataFrame(rows), f"asymptote_xi_{_ray_label(xi)}.csv")
        phases[str(xi)] = ctx.to_dict()
    return {"spectrum": spectrum.to_dict(), "rays": phases}


def cmd_compare(run: RunConfig) -> Dict[str, Any]:
    """Split-step field against the long-time approximation, with decay fits."""
    block = run.section("compare")
    rays, times = _rays(block), _times(block)
    truncate = bool(block.get("allow_truncation", False))
    dt = _number(block, "dt", 1e-2)
    n = _number(block, "n", 4096, int)
    q0 = run.potential()
    L = _number(block, "L", q0.L)
    grid = _grid(run, q0, block)
    spectrum = _spectrum(run, q0)

    state = nn.evolve(
        q0, times[-1], dt, n=n, L=L, snapshot_times=times, quiet=run.quiet
    )
    reports = {}
    for xi in rays:
        comparison = nn.compare_ray(
            q0,
            grid,
            spectrum,
            xi,
            times,
            dt,
            n,
            L,
            state=state,
            allow_truncation=truncate,
        )
        run.write_csv(comparison.frame, f"compare_xi_{_ray_label(xi)}.csv")
        reports[str(xi)] = comparison.report
    return {"run": state.run_manifest(dt), "rays": reports}


HANDLERS = {
    "scatter": cmd_scatter,
    "spectrum": cmd_spectrum,
    "soliton": cmd_soliton,
    "evolve": cmd_evolve,
    "asymptote": cmd_asymptote,
    "compare": cmd_compare,
}


def _apply_overrides(run: RunConfig, overrides: List[str]) -> None:
    for name, value in run.section("tolerances").items():
        nn.set_tolerance(name, value)
    if "t_convention" in run.doc:
        nn.set_t_convention(run.doc["t_convention"])
    for item in overrides or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(
                f"--tol-override '{item}' is not of the form name=value",
                key="tol-override",
            )
        nn.set_tolerance(name.strip(), value.strip())


def _manifest(command: str, run: Optional[RunConfig], status: str, **extra):
    return {
        "pynnls_version": nn.__version__,
        "command": command,
        "status": status,
        "config": run.doc if run is not None else None,
        "tolerances": nn.tolerance_snapshot(),
        "t_convention": nn.get_t_convention(),
        "outputs": run.outputs if run is not None else [],
        **extra,
    }


def _configure_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level, format="%(asctime)s %(name)s %(levelname)s: %(message)s"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pynnls",
        description="Inverse scattering and long-time asymptotics for nonlocal NLS",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  pynnls scatter --config gaussian.json --out out/     # Reflection grid + checks
  pynnls spectrum --config sech.json --out out/        # Discrete spectrum
  pynnls compare --config ray.json --out out/ --threads 4

Exit codes: 0 success, 2 configuration, 3 diagnostics, 4 pipeline failure.
        """,
    )
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    parser.add_argument("--quiet", action="store_true", help="Suppress progress output")
    parser.add_argument(
        "--cache", action="store_true", help="Reuse cached reflection grids"
    )

    subparsers = parser.add_subparsers(dest="command", help="Available commands")
    for name in COMMANDS:
        sub = subparsers.add_parser(name, help=HANDLERS[name].__doc__)
        sub.add_argument("--config", required=True, help="JSON run configuration")
        sub.add_argument("--out", help="Output directory (default from config)")
        sub.add_argument("--threads", type=int, default=1, help="Worker threads")
        sub.add_argument(
            "--tol-override",
            action="append",
            metavar="NAME=VALUE",
            help="Override a tolerance (repeatable)",
        )
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_CONFIG
    _configure_logging(args.verbose, args.quiet)

    run = None
    try:
        run = RunConfig.from_file(
            args.config,
            args.out,
            threads=max(1, args.threads),
            use_cache=args.cache,
            quiet=args.quiet,
        )
        _apply_overrides(run, args.tol_override)
        result = HANDLERS[args.command](run)
    except (ConfigError, OSError) as e:
        # unreadable input files are configuration problems
        print(f"Error: {e}", file=sys.stderr)
        if run is not None:
            key = getattr(e, "key", None) or getattr(e, "filename", None)
            write_json(
                _manifest(args.command, run, "config_error", error=str(e), key=key),
                run.out / "manifest.json",
            )
        return EXIT_CONFIG
    except DiagnosticFailure as e:
        print(f"Error: {e}", file=sys.stderr)
        write_json(
            _manifest(
                args.command,
                run,
                "diagnostic_failure",
                failed=e.failed,
                result=e.report,
            ),
            run.out / "manifest.json",
        )
        return EXIT_DIAGNOSTIC
    except (NNLSError, ValueError, ArithmeticError) as e:
        print(f"Error: {e}", file=sys.stderr)
        if run is not None:
            write_json(
                _manifest(
                    args.command,
                    run,
                    "failed",
                    error=str(e),
                    error_type=type(e).__name__,
                ),
                run.out / "manifest.json",
            )
        return EXIT_PIPELINE

    manifest = _manifest(args.command, run, "ok", result=result)
    write_json(manifest, run.out / "manifest.json")
    if not args.quiet:
        print(f"{args.command}: outputs written to {run.out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
