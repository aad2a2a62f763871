"""Dense 2^N state-vector backend.

This is the only backend valid for controlled-Rx circuits, which do not
conserve the excitation number.  Basis index convention: qubit 1 is the most
significant bit, so ``|b_1 b_2 ... b_N>`` lives at index ``int(b, 2)``.
Callers address qubits, never raw indices, so the convention stays internal.

Gates are applied in place with stride (reshape-view) iteration over the
amplitude array; no 2^N x 2^N matrix is ever materialized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, InvalidStateError
from .model import GateKind, GateOp, TrotterCircuitSpec, build_circuit

MAX_QUBITS = 24  # desk-scale cap: 2^24 complex amplitudes = 256 MiB


@dataclass
class StateVector:
    """2^N complex amplitudes, mutated in place by gate application."""

    n_qubits: int
    amplitudes: np.ndarray

    def norm_error(self) -> float:
        return abs(float(np.sum(np.abs(self.amplitudes) ** 2)) - 1.0)


def _check_n(n_qubits: int) -> None:
    if not 1 <= n_qubits <= MAX_QUBITS:
        raise ConfigurationError(
            f"n_qubits must be in [1, {MAX_QUBITS}], got {n_qubits}"
        )


def init_basis(n_qubits: int, bitstring: str) -> StateVector:
    """State with amplitude 1 on the given computational basis string."""
    _check_n(n_qubits)
    if len(bitstring) != n_qubits or set(bitstring) - {"0", "1"}:
        raise ConfigurationError(
            f"bitstring {bitstring!r} is not a {n_qubits}-bit 0/1 string"
        )
    amps = np.zeros(2**n_qubits, dtype=np.complex128)
    amps[int(bitstring, 2)] = 1.0
    return StateVector(n_qubits, amps)


def _pair_view(amps: np.ndarray, n: int, j: int) -> np.ndarray:
    """View with qubits j, j+1 exposed as axes 1 and 2 (j is 1-based)."""
    return amps.reshape(2 ** (j - 1), 2, 2, -1)


def apply_gate(state: StateVector, gate: GateOp) -> StateVector:
    """Apply one gate in place and return the same state."""
    n = state.n_qubits
    if max(gate.sites) > n:
        raise ConfigurationError(f"gate sites {gate.sites} outside [1, {n}]")
    a = state.amplitudes
    if gate.kind is GateKind.X:
        v = a.reshape(2 ** (gate.sites[0] - 1), 2, -1)
        v[:, [0, 1], :] = v[:, [1, 0], :]
    elif gate.kind is GateKind.RZ:
        v = a.reshape(2 ** (gate.sites[0] - 1), 2, -1)
        v[:, 0, :] *= np.exp(-0.5j * gate.angle)
        v[:, 1, :] *= np.exp(+0.5j * gate.angle)
    elif gate.kind is GateKind.XY:
        v = _pair_view(a, n, gate.sites[0])
        c, s = np.cos(gate.angle), np.sin(gate.angle)
        a01 = v[:, 0, 1, :].copy()
        a10 = v[:, 1, 0, :]
        v[:, 0, 1, :] = c * a01 - 1j * s * a10
        v[:, 1, 0, :] = -1j * s * a01 + c * a10
    elif gate.kind is GateKind.CRX:
        v = _pair_view(a, n, gate.sites[0])
        c, s = np.cos(gate.angle / 2), np.sin(gate.angle / 2)
        a10 = v[:, 1, 0, :].copy()
        a11 = v[:, 1, 1, :]
        v[:, 1, 0, :] = c * a10 - 1j * s * a11
        v[:, 1, 1, :] = -1j * s * a10 + c * a11
    else:  # pragma: no cover - enum is closed
        raise ConfigurationError(f"unknown gate kind {gate.kind}")
    return state


def run_circuit(spec: TrotterCircuitSpec, seed: int | None = None) -> StateVector:
    """Build the circuit for ``spec`` and apply it to ``|0...0>``."""
    _check_n(spec.n_qubits)
    state = init_basis(spec.n_qubits, "0" * spec.n_qubits)
    for gate in build_circuit(spec, seed):
        apply_gate(state, gate)
    err = state.norm_error()
    if err > 1e-12:
        raise InvalidStateError(f"norm drifted by {err:.3e} after circuit run")
    return state


def occupation_probs(state: StateVector) -> np.ndarray:
    """P(qubit i measures 1) for i = 1..N.

    Valid for any state, including CRx outputs with several excitations
    (the entries then need not sum to 1).
    """
    n = state.n_qubits
    probs = np.empty(n)
    for j in range(1, n + 1):
        v = state.amplitudes.reshape(2 ** (j - 1), 2, -1)
        probs[j - 1] = float(np.sum(np.abs(v[:, 1, :]) ** 2))
    return probs


def basis_prob(state: StateVector, bitstring: str) -> float:
    """|<bitstring|state>|^2."""
    if len(bitstring) != state.n_qubits:
        raise ConfigurationError("bitstring length must equal n_qubits")
    return float(abs(state.amplitudes[int(bitstring, 2)]) ** 2)
