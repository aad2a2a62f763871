"""Command-line front end.

Subcommands: ``resonance``, ``localization``, ``convergence``, ``crx`` run
sweeps from a JSON config; ``figure`` runs a bundled panel recipe; ``verify``
runs the self-check suites.  Exit codes: 0 success, 1 verification failure,
2 configuration error.

Config file layout (JSON)::

    {
      "experiment": {"kind": ..., "swept": ..., "grid": [start, stop, count],
                     "fixed": {...}, "trials": ..., "master_seed": ...},
      "output":     {"path": "out.csv", "format": "csv"},
      "engine":     {"backend": "auto", "threads": 1,
                     "verification_mode": false}
    }

Angle-valued entries accept plain numbers or "pi" literals such as
``"pi/2"`` or ``"-pi/1.5"``.  ``--threads`` falls back to the
``TROTTERLAB_THREADS`` environment variable, then 1.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .errors import ConfigurationError, TrotterlabError
from .figures import FIGURE_IDS, figure_recipe
from .model import parse_angle
from .output import write_figure, write_sweep
from .sweep import ExperimentKind, GridSpec, SweepSpec, run_sweep
from .verification import run_all_suites

_SUBCOMMAND_KINDS = {
    "resonance": (ExperimentKind.RESONANCE_DISCRETE, ExperimentKind.RESONANCE_CONTINUOUS),
    "localization": (ExperimentKind.LOCALIZATION,),
    "convergence": (ExperimentKind.CONVERGENCE,),
    "crx": (ExperimentKind.CRX_RESONANCE,),
}


@dataclass
class RunConfig:
    """Parsed config: experiment spec plus output and engine settings."""

    spec: SweepSpec
    out_path: str = "sweep.csv"
    out_format: str = "csv"
    backend: str = "auto"
    threads: int = 1
    verification_mode: bool = False


def _parse_grid_triplet(raw) -> GridSpec:
    if isinstance(raw, str):
        parts = raw.split(":")
        if len(parts) != 3:
            raise ConfigurationError(f"grid must be 'start:stop:count', got {raw!r}")
        raw = parts
    if isinstance(raw, dict):
        raw = [raw.get("start"), raw.get("stop"), raw.get("count")]
    if len(raw) != 3:
        raise ConfigurationError(f"grid needs exactly (start, stop, count), got {raw!r}")
    start, stop = parse_angle(raw[0]), parse_angle(raw[1])
    try:
        count = int(raw[2])
    except (TypeError, ValueError):
        raise ConfigurationError(f"grid count must be an integer, got {raw[2]!r}") from None
    return GridSpec(start, stop, count)


def load_config(path: str, default_kind: ExperimentKind) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigurationError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config file {path} is not valid JSON: {exc}") from None

    exp = data.get("experiment", {})
    try:
        kind = ExperimentKind(exp.get("kind", default_kind.value))
    except ValueError:
        raise ConfigurationError(
            f"unknown experiment kind {exp.get('kind')!r}"
        ) from None
    if "grid" not in exp:
        raise ConfigurationError("experiment.grid is required")
    spec = SweepSpec(
        kind=kind,
        swept=exp.get("swept", "V1"),
        grid=_parse_grid_triplet(exp["grid"]),
        fixed=dict(exp.get("fixed", {})),
        trials=_as_int(exp.get("trials"), "experiment.trials", optional=True),
        master_seed=_as_int(exp.get("master_seed", 0), "experiment.master_seed"),
    )
    out = data.get("output", {})
    engine = data.get("engine", {})
    return RunConfig(
        spec=spec,
        out_path=out.get("path", "sweep.csv"),
        out_format=out.get("format", "csv"),
        backend=engine.get("backend", "auto"),
        threads=_as_int(engine.get("threads", 0) or 0, "engine.threads"),
        verification_mode=bool(engine.get("verification_mode", False)),
    )


def _as_int(value, name: str, optional: bool = False):
    if value is None and optional:
        return None
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"{name} must be an integer, got {value!r}") from None


def _resolve_threads(flag_value: int | None, config_value: int = 0) -> int:
    if flag_value:
        return flag_value
    if config_value:
        return config_value
    env = os.environ.get("TROTTERLAB_THREADS", "")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigurationError(
                f"TROTTERLAB_THREADS must be an integer, got {env!r}"
            ) from None
    return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trotterlab",
        description="Trotter circuits of the transverse-field XY chain: "
        "sweeps, localization ensembles, and reference-figure data.",
    )
    parser.add_argument("--version", action="version", version=f"trotterlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--seed", type=int, default=None, help="override master seed")
        p.add_argument("--out", default=None, help="output file path")
        p.add_argument("--format", choices=("csv", "json"), default=None)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument(
            "--grid", default=None, help="override swept grid as 'start:stop:count'"
        )

    for name in ("resonance", "localization", "convergence", "crx"):
        add_common(sub.add_parser(name, help=f"run a {name} sweep from a config"))

    fig = sub.add_parser("figure", help="regenerate one reference panel's data")
    fig.add_argument("figure_id", help=f"one of {', '.join(FIGURE_IDS)}")
    add_common(fig, needs_config=False)

    sub.add_parser("verify", help="run the self-check suites and report pass/fail")
    return parser


def _run_sweep_command(command: str, args) -> int:
    default_kind = _SUBCOMMAND_KINDS[command][0]
    config = load_config(args.config, default_kind)
    if config.spec.kind not in _SUBCOMMAND_KINDS[command]:
        raise ConfigurationError(
            f"subcommand {command!r} cannot run a {config.spec.kind.value} experiment"
        )
    spec = config.spec
    if args.seed is not None:
        spec = SweepSpec(spec.kind, spec.swept, spec.grid, spec.fixed, spec.trials, args.seed)
    if args.grid is not None:
        spec = SweepSpec(
            spec.kind,
            spec.swept,
            _parse_grid_triplet(args.grid),
            spec.fixed,
            spec.trials,
            spec.master_seed,
        )
    threads = _resolve_threads(args.threads, config.threads)
    result = run_sweep(
        spec,
        threads=threads,
        backend=config.backend,
        verification_mode=config.verification_mode,
    )
    out_path = args.out or config.out_path
    out_format = args.format or config.out_format
    write_sweep(out_path, out_format, result)
    print(f"wrote {out_path}")
    return 0


def _run_figure_command(args) -> int:
    threads = _resolve_threads(args.threads)
    fig = figure_recipe(
        args.figure_id,
        master_seed=args.seed if args.seed is not None else 0,
        threads=threads,
    )
    out_format = args.format or "csv"
    out_path = args.out or f"figure_{fig.figure_id}.{out_format}"
    write_figure(out_path, out_format, fig)
    print(f"wrote {out_path}")
    return 0


def _run_verify_command() -> int:
    reports = run_all_suites()
    failures = 0
    for r in reports:
        status = "PASS" if r.ok else "FAIL"
        print(f"{status} {r.name}: {r.passed} passed, {r.failed} failed ({r.detail})")
        failures += r.failed
    total_pass = sum(r.passed for r in reports)
    print(f"verify: {total_pass} checks passed, {failures} failed")
    return 0 if failures == 0 else 1


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help/--version, 2 for usage errors
        return 0 if exc.code in (0, None) else 2
    try:
        if args.command == "verify":
            return _run_verify_command()
        if args.command == "figure":
            return _run_figure_command(args)
        return _run_sweep_command(args.command, args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except TrotterlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
