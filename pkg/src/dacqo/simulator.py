"""Exact noisy state-vector execution of synthesized circuits.

Noise model:

* every multiqubit GMS block's unitary U is replaced by the polar
  projection of U + c G with G a seeded complex Gaussian matrix (the
  nearest unitary to the perturbed matrix), and
* after every gate, each touched qubit independently suffers an X, Y or Z
  error with probability p/3 each (Pauli trajectories; expectation over
  trajectories equals the depolarizing channel).

The initial state is |1...1>, the ground state of the rotated driver
sum_i Z_i; success is the total probability of the optimal bitstrings read
in the X basis (a Hadamard on every qubit before measuring), where the
problem Hamiltonian is diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import polar

from . import _kernels
from .gates import Gate, gate_unitary
from .paulis import HADAMARD, PAULI
from .problem import (
    CapabilityError,
    GroundTruth,
    IsingProblem,
    brute_force_ground_state,
)
from .synthesis import Circuit

__all__ = [
    "NoiseModel",
    "RunResult",
    "apply_gate",
    "perturb_analog_block",
    "gate_fidelity",
    "run",
    "success_vs_fidelity_sweep",
    "circuit_unitary",
    "optimal_state_indices",
]

_WIDTH_CAP = 14


@dataclass(frozen=True)
class NoiseModel:
    """Analog-block perturbation amplitude c, depolarizing rate p, seed."""

    analog_noise_amplitude: float = 0.0
    depolarizing_rate: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.analog_noise_amplitude < 0:
            raise ValueError("c must be nonnegative")
        if not 0.0 <= self.depolarizing_rate <= 1.0:
            raise ValueError("p must lie in [0, 1]")

    @property
    def is_trivial(self) -> bool:
        return self.analog_noise_amplitude == 0 and self.depolarizing_rate == 0


@dataclass(frozen=True)
class RunResult:
    success_probability: float
    gms_fidelity: float
    trajectories: int
    stderr: float = 0.0
    shots: Optional[dict] = None


def apply_gate(
    state: np.ndarray, gate: Gate, n: int, unitary: Optional[np.ndarray] = None
) -> np.ndarray:
    """Apply one gate (optionally with a noise-perturbed unitary)."""
    u = gate_unitary(gate) if unitary is None else unitary
    return _kernels.apply_unitary(state, u, gate.qubits, n)


def perturb_analog_block(u: np.ndarray, c: float, seed) -> np.ndarray:
    """Nearest unitary to U + c G for a seeded complex Gaussian G."""
    if c == 0:
        return u
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    d = u.shape[0]
    g = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2)
    v, _ = polar(u + c * g)
    return v


def gate_fidelity(u: np.ndarray, v: np.ndarray) -> float:
    """|Tr(U^dag V)| / d."""
    if u.shape != v.shape:
        raise ValueError("dimension mismatch")
    return float(abs(np.trace(u.conj().T @ v))) / u.shape[0]


def optimal_state_indices(problem: IsingProblem, truth: GroundTruth = None):
    """Computational-basis indices of the optimal bitstrings (bit 0 <-> +1)."""
    if truth is None:
        truth = brute_force_ground_state(problem)
    n = problem.n_qubits
    idx = []
    for spins in truth.bitstrings:
        b = 0
        for i, s in enumerate(spins):
            if s == -1:
                b |= 1 << (n - 1 - i)
        idx.append(b)
    return np.array(sorted(idx)), truth


def _initial_state(n: int) -> np.ndarray:
    state = np.zeros(2**n, dtype=np.complex128)
    state[-1] = 1.0  # |1...1>
    return state


def _measure_success(state: np.ndarray, n: int, indices: np.ndarray) -> float:
    for q in range(n):
        state = _kernels.apply_unitary(state, HADAMARD, (q,), n)
    return float(np.sum(np.abs(state[indices]) ** 2))


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Dense composed unitary of a (noiseless) circuit."""
    n = circuit.width
    if n > 12:
        raise CapabilityError("dense circuit unitary capped at 12 qubits")
    u = np.eye(2**n, dtype=np.complex128)
    for gate in circuit.gates():
        g = gate_unitary(gate)
        u = np.column_stack(
            [_kernels.apply_unitary(u[:, c].copy(), g, gate.qubits, n)
             for c in range(u.shape[1])]
        )
    return u


def trotter_reference_unitary(
    problem: IsingProblem, schedule, block_size: int
) -> np.ndarray:
    """Straight-line product of the intended trotter factor unitaries.

    Multiplies the per-step factors (block GMS gates, cancellers,
    correction and leftover pairs, global rotations) in canonical stage
    order without any layer packing; the layered circuit must compose to
    the same operator.
    """
    import itertools as _it

    from .gates import angle_map
    from .synthesis import _EPS, coverage_plan, schedule_pairs
    from .gates import solve_gms_angles

    n = problem.n_qubits
    if n > 10:
        raise CapabilityError("reference product capped at 10 qubits")
    u = np.eye(2**n, dtype=np.complex128)

    def mul(gate):
        nonlocal u
        g = gate_unitary(gate)
        u = np.column_stack(
            [_kernels.apply_unitary(u[:, col].copy(), g, gate.qubits, n)
             for col in range(u.shape[1])]
        )

    for step in range(1, schedule.trotter_steps + 1):
        ang = angle_map(problem, schedule, step)
        a, b = ang.theta_xx, ang.theta_xy
        if problem.couplings and (abs(a) >= _EPS or abs(b) >= _EPS):
            primary, supplementary, coverage = coverage_plan(n, block_size)
            for family in (primary, supplementary):
                for block in family:
                    for gate in solve_gms_angles(a, b, block):
                        mul(gate)
            needed = {}
            for pair, c in coverage.items():
                if c == 0:
                    needed[pair] = 1.0
                elif c >= 2:
                    needed[pair] = -(c - 1.0)
            for rnd in schedule_pairs(needed, n):
                for p in rnd:
                    for gate in solve_gms_angles(needed[p] * a, needed[p] * b, p):
                        mul(gate)
        for axis, theta in (
            ("x", ang.theta_x), ("z", ang.theta_z), ("y", ang.theta_y)
        ):
            if abs(theta) >= _EPS:
                for q in range(n):
                    mul(Gate("1q", (q,), theta=theta, axis=axis))
    return u


_PAULI_OPS = (PAULI["X"], PAULI["Y"], PAULI["Z"])


def run(
    circuit: Circuit,
    problem: IsingProblem,
    noise: NoiseModel = None,
    trajectories: int = 512,
    truth: GroundTruth = None,
) -> RunResult:
    """Execute the circuit and report success probability and block fidelity."""
    n = circuit.width
    if n > _WIDTH_CAP:
        raise CapabilityError(f"simulation capped at {_WIDTH_CAP} qubits")
    if noise is None:
        noise = NoiseModel()
    if trajectories < 1:
        raise ValueError("trajectories must be >= 1")
    indices, truth = optimal_state_indices(problem, truth)
    gates = list(circuit.gates())
    ideal = [gate_unitary(g) for g in gates]
    if noise.is_trivial:
        trajectories = 1
    c = noise.analog_noise_amplitude
    p = noise.depolarizing_rate
    master = np.random.SeedSequence(noise.seed)
    traj_seeds = master.spawn(trajectories)
    successes = np.empty(trajectories)
    fid_sum, fid_count = 0.0, 0
    for t in range(trajectories):
        rng = np.random.default_rng(traj_seeds[t])
        state = _initial_state(n)
        for g, u in zip(gates, ideal):
            if c > 0 and g.kind in ("gms", "gms_dag"):
                v = perturb_analog_block(u, c, rng)
                fid_sum += gate_fidelity(u, v)
                fid_count += 1
            else:
                v = u
            state = _kernels.apply_unitary(state, v, g.qubits, n)
            if p > 0:
                for q in g.qubits:
                    r = rng.random()
                    if r < p:
                        op = _PAULI_OPS[int(r / p * 3) % 3]
                        state = _kernels.apply_unitary(state, op, (q,), n)
        successes[t] = _measure_success(state, n, indices)
    mean = float(successes.mean())
    stderr = float(successes.std(ddof=1) / math.sqrt(trajectories)) if trajectories > 1 else 0.0
    fidelity = fid_sum / fid_count if fid_count else 1.0
    return RunResult(
        success_probability=mean,
        gms_fidelity=fidelity,
        trajectories=trajectories,
        stderr=stderr,
    )


def success_vs_fidelity_sweep(
    problem: IsingProblem,
    schedule,
    block_size: int,
    c_grid,
    trajectories: int = 512,
    seed: int = 0,
):
    """One noisy run per analog-noise amplitude, sorted by realized fidelity.

    Returns a list of (mean gms_fidelity, success_probability, stderr, c)
    tuples.
    """
    from .synthesis import synthesize_homogeneous, synthesize_inhomogeneous

    if problem.is_homogeneous():
        circuit = synthesize_homogeneous(problem, schedule, block_size)
    else:
        circuit = synthesize_inhomogeneous(problem, schedule, block_size)
    truth = brute_force_ground_state(problem)
    rows = []
    for i, c in enumerate(c_grid):
        noise = NoiseModel(
            analog_noise_amplitude=float(c), depolarizing_rate=0.0,
            seed=seed + i,
        )
        res = run(circuit, problem, noise, trajectories, truth=truth)
        rows.append((res.gms_fidelity, res.success_probability, res.stderr, float(c)))
    rows.sort(key=lambda r: r[0])
    return rows
