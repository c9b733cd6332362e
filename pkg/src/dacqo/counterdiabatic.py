"""Adiabatic + counterdiabatic Hamiltonians and the first-order CD coefficient.

The annealing Hamiltonian interpolates a transverse-field driver into the
Ising problem,

    H_ad(lambda) = lambda * H_f + (1 - lambda) * sum_i X_i,
    H_f = sum_{i<j} J_ij Z_i Z_j + sum_i h_i Z_i,

and the first-order approximate gauge potential adds a velocity term

    H(t) = H_ad + lambda_dot * 2 alpha_1 [sum_i h_i Y_i
                                          + sum_{i<j} J_ij (Y_i Z_j + Z_i Y_j)].

``alpha1_analytic`` evaluates the closed form obtained from the first two
nested commutators O_1 = [H_ad, d_lambda H_ad], O_2 = [H_ad, O_1]:

    alpha_1 = -Gamma_1 / Gamma_2,  Gamma_k = ||O_k||^2 (normalized HS norm).

All pair sums below run over ordered pairs (i != j); with couplings stored
once per unordered pair this shows up as factors of 2.  ``alpha1_oracle``
recomputes the same quantity from dense commutators and pins the convention.

The gate layer works in a frame rotated by a Hadamard on every qubit
(Z -> X, X -> Z, Y -> -Y), where the entangling terms become XX/XY/YX and
the driver is diagonal; ``rotated_full_hamiltonian`` builds that frame's
generator and ``exact_evolution`` integrates it as a trotter-free reference.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import expm

from .paulis import HADAMARD, commutator, hs_norm_sq, kron_all, pauli_on
from .problem import CapabilityError, IsingProblem

__all__ = [
    "Schedule",
    "adiabatic_hamiltonian",
    "alpha1_analytic",
    "alpha1_oracle",
    "gamma_closed_forms",
    "gamma_oracle",
    "cd_generator",
    "rotated_full_hamiltonian",
    "exact_evolution",
    "problem_hamiltonian",
    "driver_hamiltonian",
]

_DENSE_CAP = 14


# ---------------------------------------------------------------------------
# schedule
# ---------------------------------------------------------------------------

def _sin2sin2(T: float):
    def lam(t):
        inner = math.sin(math.pi * t / (2.0 * T)) ** 2
        return math.sin(0.5 * math.pi * inner) ** 2

    def lam_dot(t):
        b = math.pi * t / (2.0 * T)
        a = 0.5 * math.pi * math.sin(b) ** 2
        return (math.pi**2 / (4.0 * T)) * math.sin(2 * a) * math.sin(2 * b)

    return lam, lam_dot


def _smoothstep(T: float):
    def lam(t):
        s = t / T
        return s * s * (3.0 - 2.0 * s)

    def lam_dot(t):
        s = t / T
        return 6.0 * s * (1.0 - s) / T

    return lam, lam_dot


_PROFILES = {"sin2sin2": _sin2sin2, "linear-smoothstep": _smoothstep}


@dataclass(frozen=True)
class Schedule:
    """Annealing schedule: total time, trotter step count, lambda(t).

    Both built-in profiles satisfy lambda(0)=0, lambda(T)=1 and have
    vanishing velocity at the endpoints, so the CD term switches off at
    t=0 and t=T.
    """

    total_time: float
    trotter_steps: int
    profile: str = "sin2sin2"
    lam: Callable = field(default=None, repr=False, compare=False)
    lam_dot: Callable = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.total_time <= 0:
            raise ValueError("total_time must be positive")
        if self.trotter_steps < 1:
            raise ValueError("trotter_steps must be >= 1")
        if self.lam is None:
            if self.profile not in _PROFILES:
                raise ValueError(
                    f"unknown profile {self.profile!r}; "
                    f"choose from {sorted(_PROFILES)}"
                )
            lam, lam_dot = _PROFILES[self.profile](self.total_time)
            object.__setattr__(self, "lam", lam)
            object.__setattr__(self, "lam_dot", lam_dot)

    def midpoint(self, step_index: int) -> float:
        """Midpoint time of trotter step ``step_index`` (1-based)."""
        if not 1 <= step_index <= self.trotter_steps:
            raise ValueError("step_index out of range")
        return (step_index - 0.5) * self.total_time / self.trotter_steps


# ---------------------------------------------------------------------------
# dense Hamiltonians
# ---------------------------------------------------------------------------

def _check_cap(n: int):
    if n > _DENSE_CAP:
        raise CapabilityError(
            f"dense operators capped at {_DENSE_CAP} qubits, got {n}"
        )


def problem_hamiltonian(problem: IsingProblem) -> np.ndarray:
    """Dense H_f = sum J_ij Z_i Z_j + sum h_i Z_i."""
    n = problem.n_qubits
    _check_cap(n)
    H = np.zeros((2**n, 2**n), dtype=complex)
    for (i, j), v in problem.couplings.items():
        H += v * pauli_on(n, {i: "Z", j: "Z"})
    for i, hi in enumerate(problem.fields):
        if hi:
            H += hi * pauli_on(n, {i: "Z"})
    return H


def driver_hamiltonian(n: int) -> np.ndarray:
    _check_cap(n)
    H = np.zeros((2**n, 2**n), dtype=complex)
    for i in range(n):
        H += pauli_on(n, {i: "X"})
    return H


def adiabatic_hamiltonian(problem: IsingProblem, lambda_value: float) -> np.ndarray:
    """lambda * H_f + (1 - lambda) * sum_i X_i as a dense matrix."""
    if not 0.0 <= lambda_value <= 1.0:
        raise ValueError("lambda must lie in [0, 1]")
    return lambda_value * problem_hamiltonian(problem) + (
        1.0 - lambda_value
    ) * driver_hamiltonian(problem.n_qubits)


# ---------------------------------------------------------------------------
# first-order CD coefficient
# ---------------------------------------------------------------------------

def _coupling_sums(problem: IsingProblem):
    h = problem.fields
    sh2 = float(np.sum(h**2))
    sh4 = float(np.sum(h**4))
    sJ2 = sum(v**2 for v in problem.couplings.values())
    sJ4 = sum(v**4 for v in problem.couplings.values())
    # sum over ordered pairs of h_i^2 J_ij^2
    shJ = sum(
        (h[i] ** 2 + h[j] ** 2) * v**2 for (i, j), v in problem.couplings.items()
    )
    Jm = problem.coupling_matrix() if problem.couplings else None
    s3 = 0.0
    if Jm is not None:
        for i, j, k in itertools.combinations(range(problem.n_qubits), 3):
            a, b, c = Jm[i, j], Jm[i, k], Jm[j, k]
            s3 += a * a * b * b + a * a * c * c + b * b * c * c
    return sh2, sh4, sJ2, sJ4, shJ, s3


def _denominator(problem: IsingProblem, lam: float) -> float:
    sh2, sh4, sJ2, sJ4, shJ, s3 = _coupling_sums(problem)
    return (1 - lam) ** 2 * (sh2 + 8 * sJ2) + lam**2 * (
        sh4 + 2 * sJ4 + 6 * shJ + 6 * s3
    )


def gamma_closed_forms(problem: IsingProblem, lam: float) -> tuple:
    """(Gamma_1, Gamma_2) from the closed-form coefficient sums."""
    sh2, _, sJ2, _, _, _ = _coupling_sums(problem)
    g1 = 4 * sh2 + 8 * sJ2
    g2 = 16.0 * _denominator(problem, lam)
    return g1, g2


def alpha1_analytic(problem: IsingProblem, lambda_value: float) -> float:
    """Closed-form first-order CD coefficient, alpha_1 = -Gamma_1/Gamma_2."""
    sh2, _, sJ2, _, _, _ = _coupling_sums(problem)
    R = _denominator(problem, lambda_value)
    if R == 0.0:
        raise ZeroDivisionError(
            "alpha_1 denominator vanished (all-zero problem?)"
        )
    return -0.25 * (sh2 + 2 * sJ2) / R


def gamma_oracle(problem: IsingProblem, lam: float) -> tuple:
    """(Gamma_1, Gamma_2) from dense nested commutators."""
    if problem.n_qubits > 8:
        raise CapabilityError("commutator oracle capped at 8 qubits")
    Hf = problem_hamiltonian(problem)
    D = driver_hamiltonian(problem.n_qubits)
    H = lam * Hf + (1 - lam) * D
    dH = Hf - D
    O1 = commutator(H, dH)
    O2 = commutator(H, O1)
    return hs_norm_sq(O1), hs_norm_sq(O2)


def alpha1_oracle(problem: IsingProblem, lambda_value: float) -> float:
    """alpha_1 from dense commutators; pins the closed-form conventions."""
    g1, g2 = gamma_oracle(problem, lambda_value)
    if g2 == 0.0:
        raise ZeroDivisionError("Gamma_2 vanished")
    return -g1 / g2


def cd_generator(problem: IsingProblem, lambda_value: float) -> np.ndarray:
    """2 alpha_1 (sum h_i Y_i + sum J_ij (Y_i Z_j + Z_i Y_j)), dense.

    Callers multiply by lambda_dot to obtain the CD Hamiltonian term.
    """
    n = problem.n_qubits
    _check_cap(n)
    a = alpha1_analytic(problem, lambda_value)
    G = np.zeros((2**n, 2**n), dtype=complex)
    for i, hi in enumerate(problem.fields):
        if hi:
            G += hi * pauli_on(n, {i: "Y"})
    for (i, j), v in problem.couplings.items():
        G += v * (
            pauli_on(n, {i: "Y", j: "Z"}) + pauli_on(n, {i: "Z", j: "Y"})
        )
    return 2.0 * a * G


def full_hamiltonian(problem: IsingProblem, schedule: Schedule, t: float) -> np.ndarray:
    """Original-frame H(t) = H_ad(lambda(t)) + lambda_dot(t) * cd_generator."""
    lam = schedule.lam(t)
    return adiabatic_hamiltonian(problem, lam) + schedule.lam_dot(
        t
    ) * cd_generator(problem, lam)


def rotated_full_hamiltonian(
    problem: IsingProblem, schedule: Schedule, t: float
) -> np.ndarray:
    """H'(t) in the per-qubit Hadamard frame (Z->X, X->Z, Y->-Y).

    H' = lambda (sum J_ij X_i X_j + sum h_i X_i) + (1-lambda) sum Z_i
         - 2 lambda_dot alpha_1 (sum h_i Y_i + sum J_ij (Y_i X_j + X_i Y_j)).

    The minus sign on the CD term is forced by the frame rotation flipping
    Y; since alpha_1 < 0 the realized coefficient is positive.  Equality
    with the Hadamard-conjugated original-frame H(t) is asserted in tests.
    """
    n = problem.n_qubits
    _check_cap(n)
    if not 0.0 <= t <= schedule.total_time:
        raise ValueError("t outside [0, T]")
    lam = schedule.lam(t)
    ldot = schedule.lam_dot(t)
    H = np.zeros((2**n, 2**n), dtype=complex)
    for (i, j), v in problem.couplings.items():
        H += lam * v * pauli_on(n, {i: "X", j: "X"})
    for i, hi in enumerate(problem.fields):
        if hi:
            H += lam * hi * pauli_on(n, {i: "X"})
    for i in range(n):
        H += (1.0 - lam) * pauli_on(n, {i: "Z"})
    coeff = -2.0 * ldot * alpha1_analytic(problem, lam)
    if coeff:
        for i, hi in enumerate(problem.fields):
            if hi:
                H += coeff * hi * pauli_on(n, {i: "Y"})
        for (i, j), v in problem.couplings.items():
            H += coeff * v * (
                pauli_on(n, {i: "Y", j: "X"}) + pauli_on(n, {i: "X", j: "Y"})
            )
    return H


def hadamard_frame(n: int) -> np.ndarray:
    """The frame-change unitary: a Hadamard on every qubit."""
    return kron_all([HADAMARD] * n)


def exact_evolution(
    problem: IsingProblem, schedule: Schedule, steps: int
) -> np.ndarray:
    """Trotter-free reference propagator in the rotated frame.

    Ordered product of exp(-i H'(t_k) dt) over a midpoint grid of
    ``steps`` slices.  Later factors multiply on the left.
    """
    if problem.n_qubits > 10:
        raise CapabilityError("exact_evolution capped at 10 qubits")
    T = schedule.total_time
    dt = T / steps
    U = np.eye(2**problem.n_qubits, dtype=complex)
    for k in range(steps):
        t = (k + 0.5) * dt
        U = expm(-1j * dt * rotated_full_hamiltonian(problem, schedule, t)) @ U
    return U
