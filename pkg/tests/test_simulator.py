import itertools
import math

import numpy as np
import pytest

from dacqo.counterdiabatic import Schedule, exact_evolution
from dacqo.gates import Gate, gate_unitary, rotation_unitary
from dacqo.paulis import PAULI, phase_distance
from dacqo.problem import CapabilityError, IsingProblem, random_spin_glass
from dacqo.simulator import (
    NoiseModel,
    apply_gate,
    circuit_unitary,
    gate_fidelity,
    optimal_state_indices,
    perturb_analog_block,
    run,
    success_vs_fidelity_sweep,
    trotter_reference_unitary,
)
from dacqo.synthesis import Circuit, synthesize_homogeneous


def _homogeneous_k4():
    return IsingProblem(
        4,
        {p: 1.0 for p in itertools.combinations(range(4), 2)},
        [1.0] * 4,
    )


class TestApplyGate:
    def test_x_rotation_on_first_qubit(self):
        # exp(-i pi/2 X) = -i X flips qubit 0 (the most significant bit)
        state = np.zeros(4, dtype=complex)
        state[0] = 1.0
        out = apply_gate(state, Gate("1q", (0,), math.pi / 2, axis="x"), 2)
        np.testing.assert_allclose(out, [0, 0, -1j, 0], atol=1e-14)

    def test_two_qubit_gate_on_reversed_qubits(self):
        # applying u on (1, 0) equals applying the swapped u on (0, 1)
        rng = np.random.default_rng(4)
        state = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        u = np.linalg.qr(rng.standard_normal((4, 4))
                         + 1j * rng.standard_normal((4, 4)))[0]
        swap = np.eye(4)[[0, 2, 1, 3]]
        a = apply_gate(state.copy(), Gate("gms", (1, 0), 0.0), 3,
                       unitary=u)
        b = apply_gate(state.copy(), Gate("gms", (0, 1), 0.0), 3,
                       unitary=swap @ u @ swap)
        np.testing.assert_allclose(a, b, atol=1e-12)

    def test_norm_preserved(self):
        rng = np.random.default_rng(0)
        state = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        state /= np.linalg.norm(state)
        out = apply_gate(state, Gate("gms", (1, 3), 0.8, phi=0.3), 4)
        assert np.linalg.norm(out) == pytest.approx(1.0)


class TestPerturbAnalogBlock:
    def test_zero_amplitude_is_identity(self):
        u = gate_unitary(Gate("gms", (0, 1), 0.7))
        assert perturb_analog_block(u, 0.0, 3) is u

    def test_result_is_unitary(self):
        u = gate_unitary(Gate("gms", (0, 1, 2), 0.7))
        v = perturb_analog_block(u, 0.1, 7)
        np.testing.assert_allclose(v @ v.conj().T, np.eye(8), atol=1e-12)

    def test_fidelity_decreases_with_amplitude(self):
        u = gate_unitary(Gate("gms", (0, 1), 0.7))
        means = []
        for c in (0.02, 0.1, 0.4):
            fids = [
                gate_fidelity(u, perturb_analog_block(u, c, s))
                for s in range(100)
            ]
            means.append(np.mean(fids))
        assert means[0] > means[1] > means[2]

    def test_deterministic_per_seed(self):
        u = gate_unitary(Gate("gms", (0, 1), 0.7))
        np.testing.assert_array_equal(
            perturb_analog_block(u, 0.05, 11),
            perturb_analog_block(u, 0.05, 11),
        )


class TestGateFidelity:
    def test_identity(self):
        assert gate_fidelity(np.eye(4), np.eye(4)) == pytest.approx(1.0)

    def test_z_rotation_against_identity(self):
        # |tr exp(-i theta Z)| / 2 = |cos theta|
        for theta in (0.2, 1.0, 2.5):
            f = gate_fidelity(np.eye(2), rotation_unitary("z", theta))
            assert f == pytest.approx(abs(math.cos(theta)))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            gate_fidelity(np.eye(2), np.eye(4))


class TestOptimalStateIndices:
    def test_antiferromagnetic_pair(self):
        idx, truth = optimal_state_indices(IsingProblem(2, {(0, 1): 1.0}))
        np.testing.assert_array_equal(idx, [1, 2])
        assert truth.energy == -1.0

    def test_field_selects_all_up(self):
        idx, _ = optimal_state_indices(IsingProblem(3, {}, [-1.0] * 3))
        np.testing.assert_array_equal(idx, [0])


class TestCircuitUnitary:
    def test_matches_reference_product(self):
        p = _homogeneous_k4()
        sch = Schedule(1.0, 2)
        u = circuit_unitary(synthesize_homogeneous(p, sch, 4))
        ref = trotter_reference_unitary(p, sch, 4)
        assert phase_distance(u, ref) < 1e-10

    def test_single_layer(self):
        c = Circuit(1, [[Gate("1q", (0,), 0.4, axis="y")]])
        np.testing.assert_allclose(
            circuit_unitary(c), rotation_unitary("y", 0.4), atol=1e-14
        )

    def test_width_cap(self):
        with pytest.raises(CapabilityError):
            circuit_unitary(Circuit(13, []))


class TestRun:
    def test_noiseless_matches_exact_reference(self):
        p = _homogeneous_k4()
        sch = Schedule(1.0, 10)
        circuit = synthesize_homogeneous(p, sch, 4)
        res = run(circuit, p, trajectories=1)
        # exact continuous evolution, same frame and measurement
        idx, _ = optimal_state_indices(p)
        psi = np.zeros(16, dtype=complex)
        psi[-1] = 1.0
        psi = exact_evolution(p, sch, 400) @ psi
        H1 = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        W = H1
        for _ in range(3):
            W = np.kron(W, H1)
        exact = float(np.sum(np.abs((W @ psi)[idx]) ** 2))
        assert res.success_probability == pytest.approx(exact, abs=0.02)
        assert res.trajectories == 1
        assert res.gms_fidelity == 1.0

    def test_noiseless_high_success(self):
        p = _homogeneous_k4()
        circuit = synthesize_homogeneous(p, Schedule(1.0, 10), 4)
        assert run(circuit, p).success_probability > 0.9

    def test_heavy_noise_scrambles(self):
        p = _homogeneous_k4()
        circuit = synthesize_homogeneous(p, Schedule(1.0, 10), 4)
        res = run(circuit, p, NoiseModel(5.0, 0.0, seed=1), trajectories=32)
        # 10 of the 16 bitstrings are optimal here, so a fully scrambled
        # state still succeeds ~62% of the time
        assert res.success_probability < 0.75
        assert res.gms_fidelity < 0.6

    def test_mild_depolarizing_sits_between(self):
        p = _homogeneous_k4()
        circuit = synthesize_homogeneous(p, Schedule(1.0, 10), 4)
        clean = run(circuit, p).success_probability
        noisy = run(
            circuit, p, NoiseModel(0.0, 2e-4, seed=3), trajectories=64
        ).success_probability
        floor = run(
            circuit, p, NoiseModel(0.0, 0.5, seed=3), trajectories=64
        ).success_probability
        assert floor < noisy <= clean + 1e-12

    def test_deterministic(self):
        p = _homogeneous_k4()
        circuit = synthesize_homogeneous(p, Schedule(1.0, 4), 4)
        a = run(circuit, p, NoiseModel(0.05, 1e-3, seed=9), trajectories=16)
        b = run(circuit, p, NoiseModel(0.05, 1e-3, seed=9), trajectories=16)
        assert a == b

    def test_validation(self):
        p = _homogeneous_k4()
        circuit = synthesize_homogeneous(p, Schedule(1.0, 1), 4)
        with pytest.raises(ValueError):
            run(circuit, p, trajectories=0)
        with pytest.raises(ValueError):
            NoiseModel(-0.1, 0.0)
        with pytest.raises(ValueError):
            NoiseModel(0.0, 1.5)


class TestSweep:
    def test_sorted_and_deterministic(self):
        p = _homogeneous_k4()
        sch = Schedule(1.0, 4)
        rows = success_vs_fidelity_sweep(
            p, sch, 4, [0.0, 0.08, 0.03], trajectories=8, seed=2
        )
        fids = [r[0] for r in rows]
        assert fids == sorted(fids)
        again = success_vs_fidelity_sweep(
            p, sch, 4, [0.0, 0.08, 0.03], trajectories=8, seed=2
        )
        assert rows == again

    def test_noiseless_entry_has_unit_fidelity(self):
        p = _homogeneous_k4()
        rows = success_vs_fidelity_sweep(
            p, Schedule(1.0, 4), 4, [0.0, 0.1], trajectories=4
        )
        assert rows[-1][0] == 1.0 and rows[-1][3] == 0.0
