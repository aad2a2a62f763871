"""Deterministic experiment harness: grids, disorder ensembles, aggregation.

Child seeding: the z-layer realization for grid point ``i``, trial ``k`` uses
``child_seed(master_seed, i, k) = sm64(sm64(sm64(master) ^ i) ^ k)`` where
``sm64`` is the splitmix64 finalizer.  Any subset of work items therefore
reruns identically, and results cannot depend on scheduling: work items are
pure and rows are merged in (point, trial) order regardless of the worker
count.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .analytics import LocalizationReport, ipr_ave, tail_prob
from .dense import apply_gate, init_basis, occupation_probs, run_circuit
from .errors import ConfigurationError
from .model import (
    ChainSpec,
    GateFamily,
    GateKind,
    GateOp,
    TrotterCircuitSpec,
    ZLayerSpec,
    parse_angle,
    realize_z_layer,
)
from .subspace import (
    basis_state,
    chain_hamiltonian,
    continuous_evolve,
    iterate_discrete,
    step_matrix,
)

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def child_seed(master_seed: int, point_index: int, trial_index: int) -> int:
    """64-bit child seed for one (grid point, trial) work item."""
    h = _splitmix64(master_seed & _MASK64)
    h = _splitmix64(h ^ (point_index & _MASK64))
    return _splitmix64(h ^ (trial_index & _MASK64))


class ExperimentKind(enum.Enum):
    RESONANCE_DISCRETE = "resonance_discrete"
    RESONANCE_CONTINUOUS = "resonance_continuous"
    LOCALIZATION = "localization"
    CONVERGENCE = "convergence"
    CRX_RESONANCE = "crx_resonance"


@dataclass(frozen=True)
class GridSpec:
    start: float
    stop: float
    count: int

    def __post_init__(self) -> None:
        if self.count < 2:
            raise ConfigurationError(f"grid count must be >= 2, got {self.count}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    def geometric_int_values(self) -> list[int]:
        """Integer geometric ladder from start to stop (convergence grids)."""
        if self.start <= 0 or self.stop <= self.start:
            raise ConfigurationError(
                "convergence grids need 0 < start < stop (geometric ladder)"
            )
        ratio = (self.stop / self.start) ** (1 / (self.count - 1))
        vals = [int(round(self.start * ratio**i)) for i in range(self.count)]
        if sorted(set(vals)) != vals:
            raise ConfigurationError(f"degenerate convergence ladder {vals}")
        return vals


@dataclass(frozen=True)
class SweepSpec:
    """One experiment: a kind, a swept grid, fixed parameters, an ensemble."""

    kind: ExperimentKind
    swept: str
    grid: GridSpec
    fixed: dict = field(default_factory=dict)
    trials: int | None = None  # None -> 20 for localization, else 1
    master_seed: int = 0

    def __post_init__(self) -> None:
        if self.trials is None:
            n = 20 if self.kind is ExperimentKind.LOCALIZATION else 1
            object.__setattr__(self, "trials", n)
        if self.trials < 1:
            raise ConfigurationError(f"trials must be >= 1, got {self.trials}")


@dataclass(frozen=True)
class Row:
    swept_value: float
    trial: int
    observables: dict


@dataclass(frozen=True)
class AggregateRow:
    swept_value: float
    observable: str
    mean: float
    variance: float  # population variance over trials


@dataclass(frozen=True)
class Trace:
    """Per-trial series kept for localization runs (figure companions)."""

    swept_value: float
    trial: int
    report: LocalizationReport


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    provenance: dict
    rows: tuple[Row, ...]
    aggregates: tuple[AggregateRow, ...]
    traces: tuple[Trace, ...] = ()

    def observable_names(self) -> list[str]:
        return sorted(self.rows[0].observables) if self.rows else []

    def mean_curve(self, observable: str) -> tuple[np.ndarray, np.ndarray]:
        """(grid values, per-point trial means) for one observable."""
        pts = [a for a in self.aggregates if a.observable == observable]
        return (
            np.array([a.swept_value for a in pts]),
            np.array([a.mean for a in pts]),
        )


def _require(fixed: dict, names: list[str], kind: ExperimentKind) -> None:
    missing = [n for n in names if n not in fixed]
    if missing:
        raise ConfigurationError(
            f"{kind.value} requires fixed parameter(s): {', '.join(missing)}"
        )


def _resolve_template(entries, params: dict) -> tuple[float, ...]:
    """Turn template entries (numbers or '[-]name' strings) into floats."""
    out = []
    for e in entries:
        if isinstance(e, str):
            name = e.strip()
            sign = 1.0
            if name.startswith("-"):
                sign, name = -1.0, name[1:]
            if name in params:
                out.append(sign * parse_angle(params[name]))
            else:
                out.append(sign * parse_angle(name))
        else:
            out.append(float(e))
    return tuple(out)


def _gate_family(name) -> GateFamily:
    try:
        return GateFamily(name)
    except ValueError:
        raise ConfigurationError(f"unknown gate family {name!r}") from None


def _pick_backend(family: GateFamily, backend: str) -> str:
    if backend == "auto":
        return "subspace" if family is GateFamily.XY else "dense"
    if backend == "subspace" and family is not GateFamily.XY:
        raise ConfigurationError("the subspace backend cannot run CRx circuits")
    if backend not in ("dense", "subspace"):
        raise ConfigurationError(f"unknown backend {backend!r}")
    return backend


def _discrete_last_qubit_prob(
    circuit: TrotterCircuitSpec,
    target: int,
    backend: str,
    seed: int | None,
    verification_mode: bool,
) -> float:
    """P(target qubit is 1) after the full circuit, on the chosen backend."""
    want = _pick_backend(circuit.gate_family, backend)
    dense_p = subspace_p = None
    if want == "dense" or verification_mode:
        dense_p = occupation_probs(run_circuit(circuit, seed))
    if want == "subspace" or (
        verification_mode and circuit.gate_family is GateFamily.XY
    ):
        last = None
        for _, st in iterate_discrete(circuit, seed):
            last = st
        subspace_p = (
            last.probabilities()
            if last is not None
            else basis_state(circuit.n_qubits, circuit.initial_excitation_site).probabilities()
        )
    if verification_mode and dense_p is not None and subspace_p is not None:
        gap = float(np.max(np.abs(dense_p - subspace_p)))
        if gap > 1e-10:
            raise ConfigurationError(
                f"verification mode: backends disagree by {gap:.3e}"
            )
    probs = dense_p if want == "dense" else subspace_p
    return float(probs[target - 1])


def _eval_resonance_discrete(
    spec: SweepSpec, value: float, seed: int, backend: str, verification_mode: bool
) -> dict:
    fixed = spec.fixed
    _require(fixed, ["n_qubits", "n_steps", "bond_angles", "z_template"], spec.kind)
    family = (
        GateFamily.CRX
        if spec.kind is ExperimentKind.CRX_RESONANCE
        else _gate_family(fixed.get("gate_family", "xy"))
    )
    params = dict(fixed)
    params[spec.swept] = value
    n = int(fixed["n_qubits"])
    circuit = TrotterCircuitSpec(
        n_qubits=n,
        n_steps=int(fixed["n_steps"]),
        gate_family=family,
        bond_angles=_resolve_template(fixed["bond_angles"], params),
        z_layer=ZLayerSpec(
            explicit_phis=_resolve_template(fixed["z_template"], params)
        ),
        drop_final_z=bool(fixed.get("drop_final_z", True)),
    )
    target = int(fixed.get("target_qubit", n))
    prob = _discrete_last_qubit_prob(circuit, target, backend, seed, verification_mode)
    return {"probability": prob}


def _eval_resonance_continuous(spec: SweepSpec, value: float) -> dict:
    fixed = spec.fixed
    _require(fixed, ["couplings", "potentials", "t"], spec.kind)
    params = dict(fixed)
    params[spec.swept] = value
    chain = ChainSpec(
        couplings=_resolve_template(fixed["couplings"], params),
        potentials=_resolve_template(fixed["potentials"], params),
    )
    target = int(fixed.get("target_site", chain.n_sites))
    init = int(fixed.get("init_site", 1))
    state = continuous_evolve(chain, float(fixed["t"]), init)
    return {"probability": float(state.probabilities()[target - 1])}


def _localization_trace(
    spec: SweepSpec, radius: float, seed: int, backend: str
) -> tuple[dict, LocalizationReport]:
    fixed = spec.fixed
    _require(fixed, ["n_qubits", "n_steps", "bond_angle", "base_phi"], spec.kind)
    n = int(fixed["n_qubits"])
    family = _gate_family(fixed.get("gate_family", "xy"))
    circuit = TrotterCircuitSpec(
        n_qubits=n,
        n_steps=int(fixed["n_steps"]),
        gate_family=family,
        bond_angles=(parse_angle(fixed["bond_angle"]),) * (n - 1),
        z_layer=ZLayerSpec(
            base_phi=parse_angle(fixed["base_phi"]), disorder_radius=float(radius)
        ),
        drop_final_z=bool(fixed.get("drop_final_z", True)),
    )
    profile_eta = int(fixed.get("profile_eta", 10))
    if not 1 <= profile_eta <= circuit.n_steps:
        raise ConfigurationError(
            f"profile_eta {profile_eta} outside [1, {circuit.n_steps}]"
        )
    want = _pick_backend(family, backend)

    prob_series = []
    if want == "subspace":
        for _, st in iterate_discrete(circuit, seed):
            prob_series.append(st.probabilities())
    else:
        prob_series = list(_dense_occupation_trajectory(circuit, seed))

    tail_series = tuple(tail_prob(p) for p in prob_series)
    profile = tuple(float(x) for x in prob_series[profile_eta - 1])
    if family is GateFamily.XY:
        iprs = tuple(float(np.sum(p**2)) for p in prob_series)
        report = LocalizationReport(
            ipr_series=iprs,
            ipr_ave=ipr_ave(iprs),
            tail_series=tail_series,
            final_profile=profile,
            profile_eta=profile_eta,
        )
        obs = {
            "ipr_ave": report.ipr_ave,
            "mean_tail": float(np.mean(tail_series)),
            "tail_at_profile_eta": tail_series[profile_eta - 1],
        }
    else:
        report = LocalizationReport(
            ipr_series=None,
            ipr_ave=None,
            tail_series=tail_series,
            final_profile=profile,
            profile_eta=profile_eta,
        )
        obs = {
            "mean_tail": float(np.mean(tail_series)),
            "tail_at_profile_eta": tail_series[profile_eta - 1],
        }
    return obs, report


def _dense_occupation_trajectory(circuit: TrotterCircuitSpec, seed: int | None):
    """Yield occupation probabilities after each Trotter step (dense backend)."""
    n = circuit.n_qubits
    phis = realize_z_layer(circuit.z_layer, n, seed)
    bond_kind = GateKind.XY if circuit.gate_family is GateFamily.XY else GateKind.CRX
    state = init_basis(n, "0" * n)
    apply_gate(state, GateOp(GateKind.X, (circuit.initial_excitation_site,)))
    for eta in range(1, circuit.n_steps + 1):
        for j in range(1, n):
            apply_gate(state, GateOp(bond_kind, (j, j + 1), float(circuit.bond_angles[j - 1])))
        if not (circuit.drop_final_z and eta == circuit.n_steps):
            for j in range(1, n + 1):
                apply_gate(state, GateOp(GateKind.RZ, (j,), phis[j - 1]))
        yield occupation_probs(state)


def _eval_convergence(spec: SweepSpec, n_steps: int) -> dict:
    fixed = spec.fixed
    _require(fixed, ["couplings", "potentials", "t"], spec.kind)
    chain = ChainSpec(
        couplings=tuple(float(x) for x in fixed["couplings"]),
        potentials=tuple(float(x) for x in fixed["potentials"]),
    )
    table = convergence_study(chain, float(fixed["t"]), [int(n_steps)])
    return {"distance": table[0][1]}


def _evaluate(
    spec: SweepSpec,
    point_index: int,
    value: float,
    trial: int,
    backend: str,
    verification_mode: bool,
):
    seed = child_seed(spec.master_seed, point_index, trial)
    if spec.kind in (ExperimentKind.RESONANCE_DISCRETE, ExperimentKind.CRX_RESONANCE):
        return _eval_resonance_discrete(spec, value, seed, backend, verification_mode), None
    if spec.kind is ExperimentKind.RESONANCE_CONTINUOUS:
        return _eval_resonance_continuous(spec, value), None
    if spec.kind is ExperimentKind.LOCALIZATION:
        return _localization_trace(spec, value, seed, backend)
    if spec.kind is ExperimentKind.CONVERGENCE:
        return _eval_convergence(spec, value), None
    raise ConfigurationError(f"unknown experiment kind {spec.kind}")


def _welford(values: list[float]) -> tuple[float, float]:
    """Numerically stable (mean, population variance)."""
    mean, m2 = 0.0, 0.0
    for i, x in enumerate(values, start=1):
        delta = x - mean
        mean += delta / i
        m2 += delta * (x - mean)
    return mean, m2 / len(values)


def run_sweep(
    spec: SweepSpec,
    threads: int = 1,
    backend: str = "auto",
    verification_mode: bool = False,
    assumptions: dict | None = None,
) -> SweepResult:
    """Evaluate the experiment on every (grid point, trial) work item.

    The result is independent of ``threads``: items are pure functions of
    (spec, point, trial) and rows are merged in (point, trial) order.
    """
    if spec.kind is ExperimentKind.CONVERGENCE:
        values = [float(v) for v in spec.grid.geometric_int_values()]
        if spec.trials != 1:
            raise ConfigurationError("convergence sweeps are deterministic; trials=1")
    else:
        values = [float(v) for v in spec.grid.values()]
    items = [
        (i, v, k) for i, v in enumerate(values) for k in range(spec.trials)
    ]

    def work(item):
        i, v, k = item
        return _evaluate(spec, i, v, k, backend, verification_mode)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outputs = list(pool.map(work, items))
    else:
        outputs = [work(it) for it in items]

    rows, traces = [], []
    for (i, v, k), (obs, report) in zip(items, outputs):
        rows.append(Row(swept_value=v, trial=k, observables=obs))
        if report is not None:
            traces.append(Trace(swept_value=v, trial=k, report=report))

    aggregates = []
    names = sorted(rows[0].observables) if rows else []
    for i, v in enumerate(values):
        for name in names:
            samples = [
                r.observables[name]
                for r in rows[i * spec.trials : (i + 1) * spec.trials]
            ]
            mean, var = _welford(samples)
            aggregates.append(AggregateRow(v, name, mean, var))

    provenance = {
        "tool": "trotterlab",
        "version": __version__,
        "kind": spec.kind.value,
        "swept": spec.swept,
        "grid": [spec.grid.start, spec.grid.stop, spec.grid.count],
        "fixed": spec.fixed,
        "trials": spec.trials,
        "master_seed": spec.master_seed,
        "generator": "numpy-pcg64",
        "child_seed_mixer": "splitmix64-chain",
        "backend": backend,
        "verification_mode": verification_mode,
    }
    if assumptions:
        provenance["assumptions"] = assumptions
    return SweepResult(
        spec=spec,
        provenance=provenance,
        rows=tuple(rows),
        aggregates=tuple(aggregates),
        traces=tuple(traces),
    )


def convergence_study(
    chain: ChainSpec, t: float, n_t_list
) -> list[tuple[int, float]]:
    """(N_T, ||psi_discrete - psi_continuous||_2) for each step count.

    The discrete state is the single Trotter-step matrix raised to the N_T-th
    power by binary powering, which is algebraically the same product as N_T
    sequential steps (all z layers included) but runs in O(log N_T) matrix
    multiplies, so step counts in the millions stay cheap.
    """
    n_t_list = [int(n) for n in n_t_list]
    if any(b <= a for a, b in zip(n_t_list, n_t_list[1:])):
        raise ConfigurationError(f"n_t_list must be increasing, got {n_t_list}")
    if any(n < 1 for n in n_t_list):
        raise ConfigurationError("step counts must be >= 1")
    exact = continuous_evolve(chain, t).amplitudes
    init = basis_state(chain.n_sites).amplitudes
    out = []
    for n_t in n_t_list:
        tau = t / n_t
        u = step_matrix(
            [j * tau for j in chain.couplings],
            [v * tau for v in chain.potentials],
        )
        disc = np.linalg.matrix_power(u, n_t) @ init
        out.append((n_t, float(np.linalg.norm(disc - exact))))
    return out


def chain_spectrum(chain: ChainSpec) -> np.ndarray:
    """Eigenvalues of the chain Hamiltonian (ascending)."""
    return np.linalg.eigvalsh(chain_hamiltonian(chain))
