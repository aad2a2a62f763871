"""Single-excitation-subspace backend and the continuous-time chain oracle.

XY-family circuits conserve the excitation number, so a circuit started from
``|e_j>`` (qubit j excited, rest 0) stays in the N-dimensional span of the
``|e_j>``.  This backend tracks those N amplitudes directly: amplitude j is
``<e_j|psi>``.  A realized Rz layer contributes the relative phase
``exp(-i phi_j)`` to site j, matching a chain with +V_j on-site potentials.

``continuous_evolve`` is the exact oracle: it applies ``exp(-iHt)`` for the
tight-binding chain via an eigendecomposition instead of approximating
continuous time with a large step count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, InvalidStateError, NumericalError
from .model import ChainSpec, GateFamily, TrotterCircuitSpec, realize_z_layer

MAX_CHAIN_SITES = 1000


@dataclass
class SubspaceState:
    """N complex amplitudes over the single-excitation basis."""

    n_sites: int
    amplitudes: np.ndarray

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm_error(self) -> float:
        return abs(float(np.sum(np.abs(self.amplitudes) ** 2)) - 1.0)


def basis_state(n_sites: int, site: int = 1) -> SubspaceState:
    if not 1 <= site <= n_sites:
        raise ConfigurationError(f"site {site} outside [1, {n_sites}]")
    amps = np.zeros(n_sites, dtype=np.complex128)
    amps[site - 1] = 1.0
    return SubspaceState(n_sites, amps)


def trotter_step(
    state: SubspaceState,
    bond_angles: "np.ndarray | tuple[float, ...]",
    z_angles: "np.ndarray | tuple[float, ...]",
    include_z: bool = True,
) -> SubspaceState:
    """One Trotter step in place: ascending bond rotations, then z phases."""
    n = state.n_sites
    if len(bond_angles) != n - 1 or len(z_angles) != n:
        raise ConfigurationError(
            f"expected {n - 1} bond angles and {n} z angles, got "
            f"{len(bond_angles)} and {len(z_angles)}"
        )
    a = state.amplitudes
    for j, th in enumerate(bond_angles):
        c, s = np.cos(th), np.sin(th)
        aj, aj1 = a[j], a[j + 1]
        a[j] = c * aj - 1j * s * aj1
        a[j + 1] = -1j * s * aj + c * aj1
    if include_z:
        a *= np.exp(-1j * np.asarray(z_angles))
    return state


def run_discrete(
    spec: TrotterCircuitSpec, tau_steps: int, seed: int | None = None
) -> SubspaceState:
    """State after ``tau_steps`` Trotter steps of an XY-family circuit.

    The z layer of the final step is skipped when it would be dropped from
    the emitted circuit (``drop_final_z`` and ``tau_steps == n_steps``).
    """
    last = None
    for _, state in iterate_discrete(spec, seed, tau_steps):
        last = state
    if last is None:  # tau_steps == 0
        last = basis_state(spec.n_qubits, spec.initial_excitation_site)
    return last


def iterate_discrete(
    spec: TrotterCircuitSpec, seed: int | None = None, n_steps: int | None = None
):
    """Yield (eta, state) after each Trotter step, eta = 1..n_steps.

    The yielded state is live (mutated by further iteration); copy it to
    keep a trajectory.
    """
    if spec.gate_family is not GateFamily.XY:
        raise ConfigurationError(
            "the subspace backend only supports XY-family circuits"
        )
    total = spec.n_steps if n_steps is None else n_steps
    if total < 0:
        raise ConfigurationError(f"step count must be >= 0, got {total}")
    phis = np.asarray(realize_z_layer(spec.z_layer, spec.n_qubits, seed))
    thetas = np.asarray(spec.bond_angles, dtype=float)
    state = basis_state(spec.n_qubits, spec.initial_excitation_site)
    for eta in range(1, total + 1):
        include_z = not (spec.drop_final_z and eta == spec.n_steps)
        trotter_step(state, thetas, phis, include_z=include_z)
        yield eta, state


def step_matrix(
    bond_angles: "np.ndarray | tuple[float, ...]",
    z_angles: "np.ndarray | tuple[float, ...]",
) -> np.ndarray:
    """The N x N matrix of one Trotter step (bond layer then z layer).

    Algebraically identical to ``trotter_step``; used where applying the
    step a huge number of times is needed (binary powering).
    """
    n = len(z_angles)
    u = np.eye(n, dtype=np.complex128)
    for j, th in enumerate(bond_angles):
        c, s = np.cos(th), np.sin(th)
        rows = u[[j, j + 1], :]
        u[j, :] = c * rows[0] - 1j * s * rows[1]
        u[j + 1, :] = -1j * s * rows[0] + c * rows[1]
    return np.exp(-1j * np.asarray(z_angles))[:, None] * u


def chain_hamiltonian(chain: ChainSpec) -> np.ndarray:
    h = np.diag(np.asarray(chain.potentials, dtype=float))
    for j, coupling in enumerate(chain.couplings):
        h[j, j + 1] = h[j + 1, j] = coupling
    return h


def continuous_evolve(chain: ChainSpec, t: float, init_site: int = 1) -> SubspaceState:
    """Exact ``exp(-iHt)|e_init>`` for the chain, via eigendecomposition.

    Raises NumericalError if the eigensolver fails or any eigenpair residual
    ``||Hv - lambda v||`` exceeds 1e-10.
    """
    n = chain.n_sites
    if n > MAX_CHAIN_SITES:
        raise ConfigurationError(f"chain size {n} exceeds {MAX_CHAIN_SITES}")
    if t == 0:
        return basis_state(n, init_site)
    h = chain_hamiltonian(chain)
    try:
        evals, evecs = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed for {n}-site chain: {exc}") from exc
    residual = float(np.max(np.abs(h @ evecs - evecs * evals)))
    if residual > 1e-10:
        raise NumericalError(
            f"eigenpair residual {residual:.3e} exceeds 1e-10 "
            f"(n={n}, ||H||~{np.max(np.abs(evals)):.3g})"
        )
    init = basis_state(n, init_site).amplitudes
    amps = evecs @ (np.exp(-1j * evals * t) * (evecs.T @ init))
    return SubspaceState(n, amps)


def check_normalized(state: SubspaceState, tol: float = 1e-9) -> SubspaceState:
    err = state.norm_error()
    if err > tol:
        raise InvalidStateError(f"state norm deviates by {err:.3e} (tol {tol:.1e})")
    return state
