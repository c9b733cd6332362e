"""Ising / QUBO problem instances and exact ground-truth oracles.

The optimization target is the classical Ising energy

    E(s) = sum_{i<j} J_ij s_i s_j + sum_i h_i s_i,    s_i in {+1, -1}.

Bit convention: bit 0 corresponds to spin +1, bit 1 to spin -1, so the
computational basis index of a spin configuration reads its bits
most-significant-first in qubit order.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "IsingProblem",
    "GroundTruth",
    "Graph",
    "classical_energy",
    "brute_force_ground_state",
    "mis_to_ising",
    "random_spin_glass",
]

_BRUTE_FORCE_CAP = 24


@dataclass(frozen=True)
class IsingProblem:
    """A 2-local Ising instance.

    Parameters
    ----------
    n_qubits : int
        Number of spins N.
    couplings : dict[(int, int), float]
        Pair couplings J_ij keyed by (i, j) with i < j.
    fields : np.ndarray
        Local fields h_i, length N.
    offset : float
        Constant energy shift (e.g. from a QUBO -> Ising change of
        variables); reported energies may add it back.
    """

    n_qubits: int
    couplings: dict = field(default_factory=dict)
    fields: np.ndarray = None
    offset: float = 0.0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        if self.fields is None:
            object.__setattr__(self, "fields", np.zeros(self.n_qubits))
        else:
            object.__setattr__(
                self, "fields", np.asarray(self.fields, dtype=float)
            )
        if len(self.fields) != self.n_qubits:
            raise ValueError("fields length must equal n_qubits")
        clean = {}
        for (i, j), v in self.couplings.items():
            if i == j:
                raise ValueError(f"self-coupling ({i},{i}) not allowed")
            if not (0 <= i < self.n_qubits and 0 <= j < self.n_qubits):
                raise ValueError(f"coupling index ({i},{j}) out of range")
            key = (i, j) if i < j else (j, i)
            if key in clean:
                raise ValueError(f"duplicate coupling for pair {key}")
            clean[key] = float(v)
        object.__setattr__(self, "couplings", clean)

    def is_homogeneous(self) -> bool:
        """True iff all stored couplings are equal and all fields are equal."""
        js = list(self.couplings.values())
        j_ok = len(js) == 0 or all(np.isclose(j, js[0]) for j in js)
        h_ok = np.allclose(self.fields, self.fields[0])
        return j_ok and h_ok

    def coupling_matrix(self) -> np.ndarray:
        """Symmetric dense N x N matrix of couplings (zero diagonal)."""
        J = np.zeros((self.n_qubits, self.n_qubits))
        for (i, j), v in self.couplings.items():
            J[i, j] = J[j, i] = v
        return J

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n_qubits,
                "J": [[i, j, v] for (i, j), v in sorted(self.couplings.items())],
                "h": list(self.fields),
                "offset": self.offset,
            }
        )

    @staticmethod
    def from_json(text: str) -> "IsingProblem":
        doc = json.loads(text)
        return IsingProblem(
            n_qubits=doc["n"],
            couplings={(int(i), int(j)): float(v) for i, j, v in doc.get("J", [])},
            fields=np.asarray(doc.get("h", [0.0] * doc["n"]), dtype=float),
            offset=float(doc.get("offset", 0.0)),
        )


@dataclass(frozen=True)
class GroundTruth:
    """Exact optimum of an Ising instance.

    ``bitstrings`` holds every optimal spin configuration as a tuple of
    +1/-1 values.
    """

    energy: float
    bitstrings: frozenset


@dataclass(frozen=True)
class Graph:
    """Undirected node-weighted graph for independent-set instances."""

    n_nodes: int
    edges: frozenset
    weights: np.ndarray = None

    def __post_init__(self):
        if self.weights is None:
            object.__setattr__(self, "weights", np.ones(self.n_nodes))
        else:
            object.__setattr__(
                self, "weights", np.asarray(self.weights, dtype=float)
            )
        if len(self.weights) != self.n_nodes:
            raise ValueError("weights length must equal n_nodes")
        if np.any(self.weights < 0):
            raise ValueError("node weights must be nonnegative")
        clean = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError("self-loops not allowed")
            if not (0 <= i < self.n_nodes and 0 <= j < self.n_nodes):
                raise ValueError(f"edge ({i},{j}) out of range")
            clean.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(clean))

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n_nodes,
                "edges": [list(e) for e in sorted(self.edges)],
                "weights": list(self.weights),
            }
        )

    @staticmethod
    def from_json(text: str) -> "Graph":
        doc = json.loads(text)
        return Graph(
            n_nodes=doc["n"],
            edges=frozenset(tuple(e) for e in doc.get("edges", [])),
            weights=np.asarray(
                doc.get("weights", [1.0] * doc["n"]), dtype=float
            ),
        )


def classical_energy(problem: IsingProblem, spins) -> float:
    """Ising energy of a +/-1 spin configuration (offset excluded)."""
    spins = np.asarray(spins)
    if len(spins) != problem.n_qubits:
        raise ValueError(
            f"expected {problem.n_qubits} spins, got {len(spins)}"
        )
    e = float(problem.fields @ spins)
    for (i, j), v in problem.couplings.items():
        e += v * spins[i] * spins[j]
    return e


def all_energies(problem: IsingProblem) -> np.ndarray:
    """Vector of Ising energies over all 2^N basis states.

    Entry b is the energy of the configuration whose bits (MSB = qubit 0)
    are b, with bit 0 -> spin +1.  This is exactly the diagonal of the
    dense problem Hamiltonian.
    """
    n = problem.n_qubits
    # spins[b, i] = +1 if bit i of b is 0 else -1
    idx = np.arange(2**n)
    spins = 1 - 2 * ((idx[:, None] >> (n - 1 - np.arange(n))) & 1)
    e = spins @ problem.fields
    for (i, j), v in problem.couplings.items():
        e = e + v * spins[:, i] * spins[:, j]
    return e.astype(float)


def brute_force_ground_state(problem: IsingProblem) -> GroundTruth:
    """Exhaustive minimum over all 2^N assignments; ties retained."""
    n = problem.n_qubits
    if n > _BRUTE_FORCE_CAP:
        raise CapabilityError(
            f"brute force capped at {_BRUTE_FORCE_CAP} qubits, got {n}"
        )
    energies = all_energies(problem)
    best = energies.min()
    winners = np.flatnonzero(np.isclose(energies, best, rtol=0, atol=1e-12))
    bits = []
    for b in winners:
        bits.append(
            tuple(1 - 2 * ((int(b) >> (n - 1 - i)) & 1) for i in range(n))
        )
    return GroundTruth(energy=float(best), bitstrings=frozenset(bits))


class CapabilityError(Exception):
    """Raised when an input exceeds a documented size cap."""


def mis_to_ising(graph: Graph, penalty: float = None) -> IsingProblem:
    """Encode maximum (weighted) independent set as an Ising instance.

    Maximizing sum_i w_i x_i subject to x_i x_j = 0 on edges becomes
    minimizing -sum w_i x_i + penalty * sum_{(i,j) in E} x_i x_j over
    binary x, then x_i = (1 - s_i)/2 turns it into spin J/h form.
    The constant shift is stored in ``offset``.
    """
    w = graph.weights
    if penalty is None:
        penalty = 2.0 * float(w.max()) if graph.n_nodes else 2.0
    if penalty <= float(w.max(initial=0.0)):
        raise ValueError(
            f"penalty {penalty} must exceed max node weight {w.max()}"
        )
    n = graph.n_nodes
    h = w / 2.0
    J = {}
    offset = -float(w.sum()) / 2.0
    for i, j in graph.edges:
        J[(i, j)] = penalty / 4.0
        h[i] -= penalty / 4.0
        h[j] -= penalty / 4.0
        offset += penalty / 4.0
    return IsingProblem(n_qubits=n, couplings=J, fields=h, offset=offset)


def independent_set_from_spins(spins) -> set:
    """Nodes selected by a spin configuration (spin -1 <-> x=1 <-> chosen)."""
    return {i for i, s in enumerate(spins) if s == -1}


def random_spin_glass(n: int, seed: int, mode: str = "homogeneous") -> IsingProblem:
    """Seeded all-to-all spin glass in one of three weight classes.

    homogeneous      : J_ij = 1, h_i = 1
    mixed            : |J|, |h| drawn from {0.5, 1.0}
    fully_nonuniform : J, h ~ Uniform(0.1, 1.0)
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    pairs = list(itertools.combinations(range(n), 2))
    if mode == "homogeneous":
        J = {p: 1.0 for p in pairs}
        h = np.ones(n)
    elif mode == "mixed":
        choices = np.array([0.5, 1.0])
        J = {p: float(rng.choice(choices)) for p in pairs}
        h = rng.choice(choices, size=n)
    elif mode == "fully_nonuniform":
        J = {p: float(rng.uniform(0.1, 1.0)) for p in pairs}
        h = rng.uniform(0.1, 1.0, size=n)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return IsingProblem(n_qubits=n, couplings=J, fields=np.asarray(h, float))


def random_graph(n: int, seed: int, edge_prob: float = 0.35,
                 weight_mode: str = "unweighted") -> Graph:
    """Seeded Erdos-Renyi graph with one of three node-weight classes.

    unweighted       : all weights 1
    mixed            : weights from {0.5, 1.0}
    fully_nonuniform : weights ~ Uniform(0.1, 1.0)
    """
    rng = np.random.default_rng(seed)
    edges = {
        (i, j)
        for i, j in itertools.combinations(range(n), 2)
        if rng.random() < edge_prob
    }
    if weight_mode == "unweighted":
        w = np.ones(n)
    elif weight_mode == "mixed":
        w = rng.choice(np.array([0.5, 1.0]), size=n)
    elif weight_mode == "fully_nonuniform":
        w = rng.uniform(0.1, 1.0, size=n)
    else:
        raise ValueError(f"unknown weight_mode {weight_mode!r}")
    return Graph(n_nodes=n, edges=frozenset(edges), weights=w)
