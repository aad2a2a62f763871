"""Sweep harness: determinism, seeding, aggregation, convergence."""

import math

import numpy as np
import pytest

from trotterlab.analytics import Curve, find_peaks
from trotterlab.errors import ConfigurationError
from trotterlab.model import ChainSpec, ZLayerSpec, realize_z_layer
from trotterlab.sweep import (
    ExperimentKind,
    GridSpec,
    SweepSpec,
    child_seed,
    convergence_study,
    run_sweep,
)


def discrete_n2_spec(trials=1, seed=0, count=101):
    return SweepSpec(
        kind=ExperimentKind.RESONANCE_DISCRETE,
        swept="phi",
        grid=GridSpec(-math.pi, math.pi, count),
        fixed={
            "n_qubits": 2,
            "n_steps": 2,
            "bond_angles": [math.pi / 4],
            "z_template": ["phi", "alpha"],
            "alpha": 0.0,
        },
        trials=trials,
        master_seed=seed,
    )


def localization_spec(seed=0, trials=3, n=8, steps=12):
    return SweepSpec(
        kind=ExperimentKind.LOCALIZATION,
        swept="R",
        grid=GridSpec(0.0, math.pi / 2, 3),
        fixed={
            "n_qubits": n,
            "n_steps": steps,
            "bond_angle": math.pi / 4,
            "base_phi": math.pi / 2,
            "profile_eta": 5,
        },
        trials=trials,
        master_seed=seed,
    )


def test_child_seed_is_deterministic_and_spread():
    assert child_seed(7, 3, 4) == child_seed(7, 3, 4)
    seeds = {child_seed(0, i, k) for i in range(50) for k in range(50)}
    assert len(seeds) == 2500
    assert all(0 <= s < 2**64 for s in seeds)


def test_resonance_discrete_peak_at_alpha():
    result = run_sweep(discrete_n2_spec())
    xs, ys = result.mean_curve("probability")
    peaks = find_peaks(Curve(xs, ys, {}), min_prominence=0.02)
    assert len(peaks) == 1
    assert peaks[0][0] == pytest.approx(0.0, abs=0.01)


def test_row_count_and_aggregate_shape():
    spec = localization_spec(trials=4)
    result = run_sweep(spec)
    assert len(result.rows) == 3 * 4
    names = result.observable_names()
    assert names == ["ipr_ave", "mean_tail", "tail_at_profile_eta"]
    assert len(result.aggregates) == 3 * len(names)
    assert len(result.traces) == 3 * 4


def test_rerun_is_identical():
    a = run_sweep(localization_spec())
    b = run_sweep(localization_spec())
    assert a.rows == b.rows
    assert a.aggregates == b.aggregates
    assert a.traces == b.traces


def test_threads_do_not_change_results():
    a = run_sweep(localization_spec(), threads=1)
    b = run_sweep(localization_spec(), threads=4)
    assert a.rows == b.rows
    assert a.aggregates == b.aggregates
    assert a.traces == b.traces


def test_zero_disorder_variance_is_exactly_zero():
    result = run_sweep(localization_spec(trials=6))
    zero_r = [a for a in result.aggregates if a.swept_value == 0.0]
    assert zero_r and all(a.variance == 0.0 for a in zero_r)


def test_aggregates_match_recomputation():
    result = run_sweep(localization_spec(trials=5, seed=3))
    for agg in result.aggregates:
        samples = [
            r.observables[agg.observable]
            for r in result.rows
            if r.swept_value == agg.swept_value
        ]
        assert agg.mean == pytest.approx(np.mean(samples), abs=1e-12)
        assert agg.variance == pytest.approx(np.var(samples), abs=1e-12)
        assert agg.variance >= 0.0


def test_child_seed_contract_reproduces_work_item():
    # trace for (point i, trial k) must equal a by-hand realization with
    # the documented child seed
    spec = localization_spec(seed=11, trials=2)
    result = run_sweep(spec)
    r_values = sorted({t.swept_value for t in result.traces})
    i, k = 2, 1
    seed = child_seed(11, i, k)
    phis = realize_z_layer(
        ZLayerSpec(base_phi=math.pi / 2, disorder_radius=r_values[i]), 8, seed
    )
    from trotterlab.model import TrotterCircuitSpec
    from trotterlab.subspace import iterate_discrete

    circuit = TrotterCircuitSpec(
        n_qubits=8,
        n_steps=12,
        bond_angles=(math.pi / 4,) * 7,
        z_layer=ZLayerSpec(explicit_phis=phis),
    )
    iprs = [
        float(np.sum(st.probabilities() ** 2)) for _, st in iterate_discrete(circuit)
    ]
    trace = next(t for t in result.traces if t.trial == k and t.swept_value == r_values[i])
    assert np.max(np.abs(np.array(trace.report.ipr_series) - iprs)) < 1e-15


def test_missing_fixed_parameter_is_named():
    spec = SweepSpec(
        kind=ExperimentKind.RESONANCE_CONTINUOUS,
        swept="V1",
        grid=GridSpec(-1, 1, 5),
        fixed={"couplings": [0.1]},
    )
    with pytest.raises(ConfigurationError, match="potentials"):
        run_sweep(spec)


def test_subspace_backend_rejected_for_crx():
    spec = SweepSpec(
        kind=ExperimentKind.CRX_RESONANCE,
        swept="phi",
        grid=GridSpec(-1, 1, 3),
        fixed={
            "n_qubits": 2,
            "n_steps": 2,
            "bond_angles": [0.5],
            "z_template": ["phi", "0"],
        },
    )
    with pytest.raises(ConfigurationError):
        run_sweep(spec, backend="subspace")
    result = run_sweep(spec, backend="auto")  # auto falls back to dense
    assert len(result.rows) == 3


def test_verification_mode_cross_checks_backends():
    result = run_sweep(discrete_n2_spec(count=11), verification_mode=True)
    assert result.provenance["verification_mode"] is True
    assert len(result.rows) == 11


def test_convergence_study_first_order_ratios():
    chain = ChainSpec((0.5, 0.5, 0.5, 0.5), (1.0, 0.5, 0.0, -0.5, 1.0))
    table = convergence_study(chain, 3.0, [10, 20, 40, 80])
    assert [n for n, _ in table] == [10, 20, 40, 80]
    ratios = [table[i][1] / table[i + 1][1] for i in range(3)]
    assert all(1.5 <= r <= 2.5 for r in ratios)


def test_convergence_study_commuting_limit_is_exact():
    chain = ChainSpec((0.0, 0.0), (1.0, -0.5, 2.0))
    for _, dist in convergence_study(chain, 7.0, [1, 2, 4]):
        assert dist < 1e-13


def test_convergence_study_t0():
    chain = ChainSpec((0.4,), (0.2, -0.2))
    for _, dist in convergence_study(chain, 0.0, [1, 5]):
        assert dist == 0.0


def test_convergence_study_requires_increasing_steps():
    chain = ChainSpec((0.4,), (0.2, -0.2))
    with pytest.raises(ConfigurationError):
        convergence_study(chain, 1.0, [10, 10])
    with pytest.raises(ConfigurationError):
        convergence_study(chain, 1.0, [20, 10])


def test_convergence_sweep_uses_geometric_grid():
    spec = SweepSpec(
        kind=ExperimentKind.CONVERGENCE,
        swept="n_steps",
        grid=GridSpec(10, 80, 4),
        fixed={
            "couplings": [0.5, 0.5, 0.5, 0.5],
            "potentials": [1.0, 0.5, 0.0, -0.5, 1.0],
            "t": 3.0,
        },
    )
    result = run_sweep(spec)
    assert [int(r.swept_value) for r in result.rows] == [10, 20, 40, 80]
    dists = [r.observables["distance"] for r in result.rows]
    assert all(b < a for a, b in zip(dists, dists[1:]))


def test_grid_validation():
    with pytest.raises(ConfigurationError):
        GridSpec(0, 1, 1)
    with pytest.raises(ConfigurationError):
        SweepSpec(
            kind=ExperimentKind.LOCALIZATION,
            swept="R",
            grid=GridSpec(0, 1, 3),
            trials=0,
        )


def test_resonance_peaks_sit_on_barrier_spectrum():
    # the transmission maxima of the 4-site chain line up with the
    # eigenvalues of its isolated middle dimer
    from trotterlab.sweep import chain_spectrum

    dimer_levels = chain_spectrum(ChainSpec((20.0,), (10.0, -10.0)))
    spec = SweepSpec(
        kind=ExperimentKind.RESONANCE_CONTINUOUS,
        swept="V1",
        grid=GridSpec(-40.0, 40.0, 1601),
        fixed={
            "couplings": [1.0, 20.0, 1.0],
            "potentials": ["V1", 10.0, -10.0, "V1"],
            "t": 3.0,
        },
    )
    xs, ys = run_sweep(spec).mean_curve("probability")
    peaks = find_peaks(Curve(xs, ys, {}), min_prominence=0.02)
    assert len(peaks) == len(dimer_levels) == 2
    for (pos, _), level in zip(peaks, dimer_levels):
        assert abs(pos - level) < 0.05 * abs(level)
