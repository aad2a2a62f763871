"""Dense backend against independent matrix-exponential oracles.

The oracle builds each gate as an explicit 2x2 or 4x4 unitary with
scipy.linalg.expm and embeds it with Kronecker products; the backend under
test never forms those matrices, so agreement is a real cross-check.
"""

import numpy as np
import pytest
from scipy.linalg import expm

from trotterlab.dense import (
    StateVector,
    apply_gate,
    basis_prob,
    init_basis,
    occupation_probs,
    run_circuit,
)
from trotterlab.errors import ConfigurationError
from trotterlab.model import (
    GateFamily,
    GateKind,
    GateOp,
    TrotterCircuitSpec,
    ZLayerSpec,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def oracle_matrix(gate: GateOp) -> np.ndarray:
    if gate.kind is GateKind.X:
        return SX
    if gate.kind is GateKind.RZ:
        return expm(-0.5j * gate.angle * SZ)
    if gate.kind is GateKind.XY:
        # hop angle theta: generator (XX + YY)/2
        return expm(-0.5j * gate.angle * (np.kron(SX, SX) + np.kron(SY, SY)))
    if gate.kind is GateKind.CRX:
        u = np.eye(4, dtype=complex)
        u[2:, 2:] = expm(-0.5j * gate.angle * SX)
        return u
    raise AssertionError(gate.kind)


def embed(mat: np.ndarray, sites: tuple[int, ...], n: int) -> np.ndarray:
    ops = [np.eye(2, dtype=complex)] * n
    full = np.eye(1, dtype=complex)
    for q in range(1, n + 1):
        if q == sites[0]:
            full = np.kron(full, mat)
        elif len(sites) == 2 and q == sites[1]:
            continue  # absorbed into the two-qubit block
        else:
            full = np.kron(full, ops[q - 1])
    return full


def random_state(n: int, rng) -> StateVector:
    amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    amps /= np.linalg.norm(amps)
    return StateVector(n, amps.astype(np.complex128))


@pytest.mark.parametrize("seed", range(6))
def test_apply_gate_matches_matrix_oracle(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    state = random_state(n, rng)
    kind = rng.choice([GateKind.X, GateKind.RZ, GateKind.XY, GateKind.CRX])
    if kind in (GateKind.XY, GateKind.CRX):
        j = int(rng.integers(1, n))
        gate = GateOp(kind, (j, j + 1), float(rng.uniform(-np.pi, np.pi)))
    elif kind is GateKind.RZ:
        gate = GateOp(kind, (int(rng.integers(1, n + 1)),), float(rng.uniform(-np.pi, np.pi)))
    else:
        gate = GateOp(kind, (int(rng.integers(1, n + 1)),))
    expected = embed(oracle_matrix(gate), gate.sites, n) @ state.amplitudes
    got = apply_gate(StateVector(n, state.amplitudes.copy()), gate).amplitudes
    assert np.max(np.abs(got - expected)) < 1e-14


def test_init_basis_examples():
    assert np.allclose(init_basis(2, "10").amplitudes, [0, 0, 1, 0])
    assert np.allclose(init_basis(1, "0").amplitudes, [1, 0])
    state = init_basis(3, "100")
    assert state.amplitudes[4] == 1.0
    assert np.sum(np.abs(state.amplitudes)) == 1.0


def test_init_basis_rejects_bad_input():
    with pytest.raises(ConfigurationError):
        init_basis(3, "10")
    with pytest.raises(ConfigurationError):
        init_basis(2, "12")
    with pytest.raises(ConfigurationError):
        init_basis(25, "0" * 25)  # above the desk-scale cap


def test_crx_on_10_gives_entangled_pair():
    theta = 0.83
    state = init_basis(2, "10")
    apply_gate(state, GateOp(GateKind.CRX, (1, 2), theta))
    expected = np.array([0, 0, np.cos(theta / 2), -1j * np.sin(theta / 2)])
    assert np.max(np.abs(state.amplitudes - expected)) < 1e-15
    assert np.allclose(occupation_probs(state), [1.0, np.sin(theta / 2) ** 2])


def test_xy_zero_angle_is_identity():
    rng = np.random.default_rng(3)
    state = random_state(3, rng)
    before = state.amplitudes.copy()
    apply_gate(state, GateOp(GateKind.XY, (2, 3), 0.0))
    assert np.array_equal(state.amplitudes, before)


def test_xy_quarter_pi_on_10():
    state = init_basis(2, "10")
    apply_gate(state, GateOp(GateKind.XY, (1, 2), np.pi / 4))
    expected = np.array([0, -1j * np.sqrt(0.5), np.sqrt(0.5), 0])
    assert np.max(np.abs(state.amplitudes - expected)) < 1e-15


def test_x_twice_is_identity():
    rng = np.random.default_rng(11)
    state = random_state(4, rng)
    before = state.amplitudes.copy()
    for _ in range(2):
        apply_gate(state, GateOp(GateKind.X, (3,)))
    assert np.max(np.abs(state.amplitudes - before)) < 1e-15


def test_gate_site_out_of_range():
    state = init_basis(2, "00")
    with pytest.raises(ConfigurationError):
        apply_gate(state, GateOp(GateKind.RZ, (3,), 0.1))


def test_run_circuit_n2_resonant_point():
    # theta = pi/4 and equal z angles: the closed form gives probability 1
    spec = TrotterCircuitSpec(
        n_qubits=2,
        n_steps=2,
        bond_angles=(np.pi / 4,),
        z_layer=ZLayerSpec(explicit_phis=(0.0, 0.0)),
    )
    state = run_circuit(spec)
    assert abs(basis_prob(state, "01") - 1.0) < 1e-12


def test_run_circuit_zero_hopping_keeps_excitation():
    spec = TrotterCircuitSpec(
        n_qubits=4,
        n_steps=5,
        bond_angles=(0.0, 0.0, 0.0),
        z_layer=ZLayerSpec(base_phi=0.7),
    )
    state = run_circuit(spec, seed=1)
    assert abs(basis_prob(state, "1000") - 1.0) < 1e-12


def test_run_circuit_n3_frozen_value():
    # sin^4 t cos^2 t (4 + cos^2 t + 4 cos t) at t=pi/4, frozen from the formula
    expected = 0.125 * (4.5 + 2 * np.sqrt(2))
    spec = TrotterCircuitSpec(
        n_qubits=3,
        n_steps=2,
        bond_angles=(np.pi / 4, np.pi / 4),
        z_layer=ZLayerSpec(explicit_phis=(0.0, 0.0, 0.0)),
    )
    assert abs(basis_prob(run_circuit(spec), "001") - expected) < 1e-12


def test_norm_preserved_after_every_gate():
    rng = np.random.default_rng(42)
    spec = TrotterCircuitSpec(
        n_qubits=5,
        n_steps=8,
        bond_angles=tuple(rng.uniform(-np.pi, np.pi, 4)),
        z_layer=ZLayerSpec(base_phi=0.9, disorder_radius=1.1),
    )
    from trotterlab.model import build_circuit

    state = init_basis(5, "00000")
    for gate in build_circuit(spec, seed=5):
        apply_gate(state, gate)
        assert state.norm_error() <= 1e-12


def test_xy_circuit_conserves_excitation_number():
    rng = np.random.default_rng(9)
    spec = TrotterCircuitSpec(
        n_qubits=6,
        n_steps=10,
        bond_angles=tuple(rng.uniform(-np.pi, np.pi, 5)),
        z_layer=ZLayerSpec(base_phi=1.2, disorder_radius=0.8),
    )
    state = run_circuit(spec, seed=2)
    single = [1 << k for k in range(6)]
    in_subspace = sum(abs(state.amplitudes[i]) ** 2 for i in single)
    assert abs(in_subspace - 1.0) < 1e-12


def test_occupation_probs_uniform_single_excitation():
    amps = np.zeros(16, dtype=complex)
    for k in range(4):
        amps[1 << k] = 0.5
    probs = occupation_probs(StateVector(4, amps))
    assert np.allclose(probs, [0.25] * 4, atol=1e-15)


def test_crx_breaks_excitation_conservation():
    # the control stays up while the target flips: two excitations appear
    spec = TrotterCircuitSpec(
        n_qubits=3,
        n_steps=2,
        gate_family=GateFamily.CRX,
        bond_angles=(1.0, 1.3),
        z_layer=ZLayerSpec(base_phi=0.4),
    )
    state = run_circuit(spec, seed=0)
    single = [1 << k for k in range(3)]
    in_subspace = sum(abs(state.amplitudes[i]) ** 2 for i in single)
    assert in_subspace < 1.0 - 1e-3
    assert state.norm_error() <= 1e-12
