"""Bundled recipes that regenerate the reference panel data.

Each recipe hard-codes its panel's parameters so tests and the CLI share one
source of truth.  Resonance panels hold one sweep per plotted series;
localization panels hold a single sweep over the disorder radius, with
per-step series kept as traces.

Note on angles: the reference curves for the disordered-XY panels (4a-4d)
and the small-step multi-qubit panels were computed with the quarter
normalized bond generator, i.e. a stated bond angle of pi/2 corresponds to a
direct hop angle of pi/4.  The recipes below store the direct hop angle and
record the correspondence under ``assumptions`` in the provenance block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigurationError
from .sweep import ExperimentKind, GridSpec, SweepResult, SweepSpec, run_sweep

FIGURE_IDS = (
    "2a4",
    "2b4",
    "2c4",
    "2d4",
    "3b",
    "3c",
    "3d",
    "4a",
    "4b",
    "4c",
    "4d",
)

# Direct hop angle equivalent to the quarter-normalized "pi/2" bond setting.
XY_LOCALIZATION_BOND = math.pi / 4
LOCALIZATION_N = 15
LOCALIZATION_STEPS = 80


@dataclass(frozen=True)
class FigureData:
    figure_id: str
    kind: str  # "resonance" | "localization" | "convergence"
    series: tuple[tuple[str, SweepResult], ...]

    @property
    def provenance(self) -> dict:
        return self.series[0][1].provenance


def _continuous_series(
    label_values,
    couplings,
    potentials,
    t: float,
    grid: GridSpec,
    master_seed: int,
    threads: int,
    assumptions: dict | None = None,
):
    series = []
    for label, value in label_values:
        spec = SweepSpec(
            kind=ExperimentKind.RESONANCE_CONTINUOUS,
            swept="V1",
            grid=grid,
            fixed={
                "couplings": couplings,
                "potentials": potentials,
                "t": t,
                "V2": value,
            },
            master_seed=master_seed,
        )
        series.append((label, run_sweep(spec, threads=threads, assumptions=assumptions)))
    return tuple(series)


def figure_recipe(
    figure_id: str,
    master_seed: int = 0,
    threads: int = 1,
    backend: str = "auto",
) -> FigureData:
    """Run the bundled recipe for one panel identifier."""
    fid = figure_id.lower()
    if fid not in FIGURE_IDS:
        raise ConfigurationError(
            f"unknown figure id {figure_id!r}; expected one of {', '.join(FIGURE_IDS)}"
        )

    if fid == "2a4":
        grid = GridSpec(-math.pi, math.pi, 321)  # pitch 0.0196 <= 0.02
        series = _continuous_series(
            [("V2=0", 0.0), ("V2=-pi/2", -math.pi / 2)],
            couplings=[0.1],
            potentials=["V1", "V2"],
            t=15.0,
            grid=grid,
            master_seed=master_seed,
            threads=threads,
        )
        return FigureData(fid, "resonance", series)

    if fid == "2b4":
        grid = GridSpec(-math.pi, math.pi, 321)
        series = _continuous_series(
            [("V2=0", 0.0), ("V2=-pi/2", -math.pi / 2)],
            couplings=[0.1, 0.1],
            potentials=["V1", "V2", "V1"],
            t=22.0,
            grid=grid,
            master_seed=master_seed,
            threads=threads,
        )
        return FigureData(fid, "resonance", series)

    if fid == "2c4":
        grid = GridSpec(-40.0, 40.0, 2001)
        series = _continuous_series(
            [("V2=10", 10.0), ("V2=20", 20.0)],
            couplings=[1.0, 20.0, 1.0],
            potentials=["V1", "V2", "-V2", "V1"],
            t=3.0,
            grid=grid,
            master_seed=master_seed,
            threads=threads,
        )
        return FigureData(fid, "resonance", series)

    if fid == "2d4":
        grid = GridSpec(-45.0, 45.0, 4501)
        series = _continuous_series(
            [("V2=10", 10.0), ("V2=20", 20.0)],
            couplings=[0.1, 20.0, 20.0, 0.1],
            potentials=["V1", "V2", 0.0, "-V2", "V1"],
            t=40.0,
            grid=grid,
            master_seed=master_seed,
            threads=threads,
        )
        return FigureData(fid, "resonance", series)

    if fid == "3b":
        # No parameter values are pinned for this panel; these defaults show
        # the expected two-peak structure with an alpha-dependent spacing.
        assumptions = {
            "n_qubits": 4,
            "n_steps": 4,
            "theta": "pi/1.5",
            "alpha_series": ["pi/4", "-pi/1.5"],
        }
        series = []
        for label, alpha in (("alpha=pi/4", math.pi / 4), ("alpha=-pi/1.5", -math.pi / 1.5)):
            spec = SweepSpec(
                kind=ExperimentKind.CRX_RESONANCE,
                swept="phi",
                grid=GridSpec(-math.pi, math.pi, 315),
                fixed={
                    "n_qubits": 4,
                    "n_steps": 4,
                    "bond_angles": [math.pi / 1.5] * 3,
                    "z_template": ["phi", "alpha", "-alpha", "phi"],
                    "alpha": alpha,
                },
                master_seed=master_seed,
            )
            series.append(
                (label, run_sweep(spec, threads=threads, backend=backend, assumptions=assumptions))
            )
        return FigureData(fid, "resonance", tuple(series))

    if fid in ("3c", "3d"):
        # CRx localization; the panel does not state N, assumed 15.
        assumptions = {"n_qubits_assumed": LOCALIZATION_N, "theta": "pi/2", "phi": "pi/2"}
        spec = SweepSpec(
            kind=ExperimentKind.LOCALIZATION,
            swept="R",
            grid=GridSpec(0.0, math.pi / 2, 5),
            fixed={
                "n_qubits": LOCALIZATION_N,
                "n_steps": LOCALIZATION_STEPS,
                "gate_family": "crx",
                "bond_angle": math.pi / 2,
                "base_phi": math.pi / 2,
                "profile_eta": 10,
            },
            trials=1,
            master_seed=master_seed,
        )
        result = run_sweep(spec, threads=threads, backend=backend, assumptions=assumptions)
        return FigureData(fid, "localization", (("R-grid", result),))

    # 4a-4d: XY localization panels.
    assumptions = {
        "bond_angle": "pi/4 (direct hop; quarter-normalized caption value pi/2)",
        "base_phi": "pi/2",
    }
    grid = GridSpec(0.0, math.pi / 2, 2 if fid == "4a" else 5)
    trials = 20 if fid == "4b" else 1
    spec = SweepSpec(
        kind=ExperimentKind.LOCALIZATION,
        swept="R",
        grid=grid,
        fixed={
            "n_qubits": LOCALIZATION_N,
            "n_steps": LOCALIZATION_STEPS,
            "bond_angle": XY_LOCALIZATION_BOND,
            "base_phi": math.pi / 2,
            "profile_eta": 10,
        },
        trials=trials,
        master_seed=master_seed,
    )
    result = run_sweep(spec, threads=threads, backend=backend, assumptions=assumptions)
    return FigureData(fid, "localization", (("R-grid", result),))
