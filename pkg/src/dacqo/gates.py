"""Gate records, GMS unitaries, and coefficient-to-angle mapping.

A k-qubit global Molmer-Sorensen (GMS) gate is

    U_MS^k(theta, phi) = exp[-i theta/4 (cos(phi) S_x + sin(phi) S_y)^2],
    S_a = sum_{i=1}^k sigma_i^a.

Expanding the square, every qubit pair picks up the two-body generator

    theta/2 [cos^2(phi) XX + cos(phi)sin(phi) (XY + YX) + sin^2(phi) YY],

so a single GMS realizes the XX and symmetrized XY couplings of the
rotated-frame Hamiltonian simultaneously, at the price of a parasitic YY
piece.  Appending the conjugate gate U_MS^dag(theta sin^2(phi), pi/2)
removes the YY component (exactly to third order in the angles, which is
far below tolerance at trotter-step scale).

Single-qubit rotation convention: ``theta`` is the coefficient in
exp(-i theta sigma_axis) — no half-angle — matching the trotter factors
exp(-i theta^x sum X_i) directly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .counterdiabatic import Schedule, alpha1_analytic
from .paulis import PAULI, kron_all
from .problem import CapabilityError, IsingProblem

__all__ = [
    "Gate",
    "AngleSet",
    "gms_unitary",
    "rotation_unitary",
    "gate_unitary",
    "angle_map",
    "solve_gms_angles",
    "gms_conjugate_pauli",
    "generator_pauli_coefficients",
]

_GMS_CAP = 10
_EPS = 1e-14


@dataclass(frozen=True)
class Gate:
    """One circuit element: a GMS block, its conjugate, or a 1q rotation.

    For kind "gms_dag" the stored ``theta`` is the canceller angle
    theta_m = theta * sin^2(phi) of its partner gate.
    """

    kind: str  # "gms" | "gms_dag" | "1q"
    qubits: tuple
    theta: float
    phi: float = 0.0
    axis: Optional[str] = None  # "x" | "y" | "z" for kind == "1q"

    def __post_init__(self):
        if self.kind not in ("gms", "gms_dag", "1q"):
            raise ValueError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "qubits", tuple(self.qubits))
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("gate qubits must be distinct")
        if self.kind == "1q":
            if len(self.qubits) != 1 or self.axis not in ("x", "y", "z"):
                raise ValueError("1q gate needs one qubit and an axis")
        elif len(self.qubits) < 2:
            raise ValueError("GMS gates act on >= 2 qubits")

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "qubits": list(self.qubits), "theta": self.theta}
        if self.kind == "1q":
            d["axis"] = self.axis
        else:
            d["phi"] = self.phi
        return d

    @staticmethod
    def from_dict(d: dict) -> "Gate":
        return Gate(
            kind=d["kind"],
            qubits=tuple(d["qubits"]),
            theta=float(d["theta"]),
            phi=float(d.get("phi", 0.0)),
            axis=d.get("axis"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class AngleSet:
    """Per-trotter-step rotation angles for the five Hamiltonian channels."""

    theta_xx: float
    theta_xy: float
    theta_x: float
    theta_y: float
    theta_z: float

    def __post_init__(self):
        for name in ("theta_xx", "theta_xy", "theta_x", "theta_y", "theta_z"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} is not finite")


def gms_unitary(k: int, theta: float, phi: float) -> np.ndarray:
    """Dense k-qubit GMS unitary exp[-i theta/4 (cos phi S_x + sin phi S_y)^2]."""
    if not 2 <= k <= _GMS_CAP:
        raise CapabilityError(f"gms_unitary supports 2..{_GMS_CAP} qubits")
    s = np.zeros((2**k, 2**k), dtype=complex)
    axis = math.cos(phi) * PAULI["X"] + math.sin(phi) * PAULI["Y"]
    for i in range(k):
        ops = [axis if q == i else PAULI["I"] for q in range(k)]
        s += kron_all(ops)
    gen = s @ s
    vals, vecs = np.linalg.eigh(gen)
    return (vecs * np.exp(-0.25j * theta * vals)) @ vecs.conj().T


def rotation_unitary(axis: str, theta: float) -> np.ndarray:
    """exp(-i theta sigma_axis) — note: full angle, not half-angle."""
    sig = PAULI[axis.upper()]
    return math.cos(theta) * PAULI["I"] - 1j * math.sin(theta) * sig


def gate_unitary(gate: Gate) -> np.ndarray:
    """Dense unitary of a gate on its own qubits (in gate.qubits order)."""
    if gate.kind == "1q":
        return rotation_unitary(gate.axis, gate.theta)
    u = gms_unitary(len(gate.qubits), gate.theta, gate.phi)
    # "gms_dag" stores the canceller angle directly; just conjugate.
    if gate.kind == "gms_dag":
        u = u.conj().T
    return u


def angle_map(problem: IsingProblem, schedule: Schedule, step_index: int) -> AngleSet:
    """Trotter angles for one step of a homogeneous instance.

    lambda, lambda_dot and alpha_1 are evaluated at the step midpoint;
    the step duration is T/n.  The Y-channel coefficient carries the
    rotated-frame sign (-lambda_dot * alpha_1, positive since alpha_1 < 0).
    """
    if not problem.is_homogeneous():
        raise ValueError("angle_map requires a homogeneous instance")
    J = next(iter(problem.couplings.values())) if problem.couplings else 0.0
    h = float(problem.fields[0]) if problem.n_qubits else 0.0
    t = schedule.midpoint(step_index)
    dt = schedule.total_time / schedule.trotter_steps
    lam = schedule.lam(t)
    ldot = schedule.lam_dot(t)
    cd = -ldot * alpha1_analytic(problem, lam) if ldot else 0.0
    return AngleSet(
        theta_xx=lam * J * dt,
        theta_xy=2.0 * J * cd * dt,
        theta_x=lam * h * dt,
        theta_y=2.0 * h * cd * dt,
        theta_z=(1.0 - lam) * dt,
    )


def solve_gms_angles(theta_xx: float, theta_xy: float, qubits=(0, 1)) -> list:
    """GMS prescription realizing per-pair theta_xx XX + theta_xy (XY + YX).

    Returns a list of gates: the main GMS plus conjugate cancellers that
    strip the parasitic components.  Generic case: tan(phi) =
    theta_xy/theta_xx, theta = 2 theta_xx / cos^2(phi), YY canceller at
    theta_m = theta sin^2(phi).  If only the cross channel is wanted the
    gate sits at phi = pi/4 and an extra phi=0 conjugate removes the
    induced XX term.
    """
    qubits = tuple(qubits)
    if abs(theta_xx) < _EPS and abs(theta_xy) < _EPS:
        return []
    if abs(theta_xy) < _EPS:
        return [Gate("gms", qubits, theta=2.0 * theta_xx, phi=0.0)]
    if abs(theta_xx) < _EPS:
        return [
            Gate("gms", qubits, theta=4.0 * theta_xy, phi=math.pi / 4),
            Gate("gms_dag", qubits, theta=2.0 * theta_xy, phi=math.pi / 2),
            Gate("gms_dag", qubits, theta=2.0 * theta_xy, phi=0.0),
        ]
    phi = math.atan(theta_xy / theta_xx)
    theta = 2.0 * theta_xx / math.cos(phi) ** 2
    theta_m = theta * math.sin(phi) ** 2
    gates = [Gate("gms", qubits, theta=theta, phi=phi)]
    if abs(theta_m) >= _EPS:
        gates.append(Gate("gms_dag", qubits, theta=theta_m, phi=math.pi / 2))
    return gates


# ---------------------------------------------------------------------------
# Pauli conjugation ladder
# ---------------------------------------------------------------------------

# single-qubit products P * X -> (phase, letter)
_TIMES_X = {"I": (1.0, "X"), "X": (1.0, "I"), "Y": (-1j, "Z"), "Z": (1j, "Y")}


def gms_conjugate_pauli(k: int, theta: float, target_qubit: int) -> dict:
    """Pauli expansion of U Z_l U^dag under pairwise-XX conjugation.

    U is the product over all pairs i<j of exp(-i theta/4 X_i X_j), i.e.
    gms_unitary(k, theta/2, 0) up to global phase.  Returns a dict mapping
    a sorted tuple of (qubit, letter) to its real coefficient.  For k=2:
    cos(theta/2) Z_l - sin(theta/2) Y_l X_k.
    """
    if not 2 <= k <= 5:
        raise CapabilityError("gms_conjugate_pauli supports 2..5 qubits")
    if not 0 <= target_qubit < k:
        raise ValueError("target_qubit out of range")
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)
    terms = {((target_qubit, "Z"),): 1.0 + 0j}
    for i in range(k):
        for j in range(i + 1, k):
            new = {}
            for string, coeff in terms.items():
                letters = dict(string)
                li, lj = letters.get(i, "I"), letters.get(j, "I")
                odd = (li in "YZ") + (lj in "YZ")
                if odd % 2 == 0:  # commutes with X_i X_j
                    new[string] = new.get(string, 0) + coeff
                    continue
                new[string] = new.get(string, 0) + c * coeff
                ph_i, li2 = _TIMES_X[li]
                ph_j, lj2 = _TIMES_X[lj]
                letters[i], letters[j] = li2, lj2
                key = tuple(
                    sorted((q, l) for q, l in letters.items() if l != "I")
                )
                new[key] = new.get(key, 0) + 1j * s * ph_i * ph_j * coeff
            terms = new
    out = {}
    for string, coeff in terms.items():
        if abs(coeff) < 1e-15:
            continue
        assert abs(coeff.imag) < 1e-12, "conjugation produced complex weight"
        out[string] = float(coeff.real)
    return out


def generator_pauli_coefficients(U: np.ndarray, n: int) -> dict:
    """Pauli coefficients of the Hermitian generator G with U = exp(-iG).

    Uses the principal matrix logarithm via eigendecomposition; valid
    while the eigenphases stay inside (-pi, pi).  Returns letters-string
    -> real coefficient, e.g. {"XY": 0.25}.
    """
    vals, vecs = np.linalg.eig(U)
    G = (vecs * (1j * np.log(vals))) @ np.linalg.inv(vecs)
    G = 0.5 * (G + G.conj().T)
    import itertools

    coeffs = {}
    for letters in itertools.product("IXYZ", repeat=n):
        P = kron_all([PAULI[c] for c in letters])
        w = np.trace(P @ G).real / 2**n
        if abs(w) > 1e-15:
            coeffs["".join(letters)] = float(w)
    return coeffs
