import numpy as np
import pytest

from qinfo import ops
from qinfo import protocols as pr
from qinfo.core import ket, partial_trace, projector, tensor
from qinfo.sampling import random_pure, rng_from


def overlap(psi, rho):
    return float(np.real(psi.conj() @ rho @ psi))


def test_named_gates_unitary():
    for name, gate in pr.GATES.items():
        assert np.linalg.norm(gate @ gate.conj().T - np.eye(gate.shape[0])) < 1e-12, name


def test_simulate_h_and_cnot():
    r = pr.simulate(pr.Circuit(1).gate("H", 0), ket(0, 2))
    assert np.allclose(r.state, np.array([1, 1]) / np.sqrt(2))
    r2 = pr.simulate(pr.Circuit(2).gate("CNOT", 0, 1), tensor(ket(1, 2), ket(0, 2)))
    assert np.allclose(r2.state, tensor(ket(1, 2), ket(1, 2)))


def test_simulate_preserves_norm(rng):
    state = random_pure(8, rng)
    c = pr.Circuit(3).gate("H", 0).gate("CNOT", 0, 2).gate("S", 1).gate("RY90", 2)
    out = pr.simulate(c, state).state
    assert abs(np.linalg.norm(out) - 1) < 1e-12


def test_bell_prep_and_measure_deterministic():
    prep = pr.Circuit(2).gate("H", 0).gate("CNOT", 0, 1)
    bell = pr.simulate(prep, tensor(ket(0, 2), ket(0, 2))).state
    unprep = pr.Circuit(2).gate("CNOT", 0, 1).gate("H", 0)
    unprep.measure(0, 0)
    unprep.measure(1, 1)
    r = pr.simulate(unprep, bell, seed=123)
    assert r.bits == {0: 0, 1: 1} or r.bits == {0: 0, 1: 0}
    assert r.bits == {0: 0, 1: 0}
    assert abs(r.probability - 1) < 1e-12


def test_measurement_sampling_deterministic_by_seed():
    c = pr.Circuit(1).gate("H", 0)
    c.measure(0, 0)
    plus_runs = [pr.simulate(c, ket(0, 2), seed=s).bits[0] for s in range(20)]
    again = [pr.simulate(c, ket(0, 2), seed=s).bits[0] for s in range(20)]
    assert plus_runs == again
    assert set(plus_runs) == {0, 1}


def test_classical_control_requires_bit():
    c = pr.Circuit(1).gate("X", 0, control_bit=0)
    with pytest.raises(ValueError):
        pr.simulate(c, ket(0, 2))


def test_gate_index_errors():
    with pytest.raises(ValueError):
        pr.simulate(pr.Circuit(1).gate("X", 3), ket(0, 2))


def test_superdense_all_messages():
    for bits in ("00", "01", "10", "11"):
        assert pr.superdense(bits) == bits


def test_superdense_encoded_states():
    # the four encoded states are the Bell basis
    got = pr.superdense_encoded_state("00")
    assert np.allclose(got, np.array([1, 0, 0, 1]) / np.sqrt(2))
    got = pr.superdense_encoded_state("11")
    assert np.allclose(got, np.array([0, 1, -1, 0]) / np.sqrt(2))


def test_superdense_intercept_is_maximally_mixed():
    for bits in ("00", "01", "10", "11"):
        assert np.max(np.abs(pr.superdense_intercept_state(bits) - np.eye(2) / 2)) < 1e-12


def test_teleport_branches(rng):
    for _ in range(20):
        psi = random_pure(2, rng)
        for bits, prob, bob in pr.teleport_branches(psi):
            assert abs(prob - 0.25) < 1e-12
            assert overlap(psi, bob) > 1 - 1e-12


def test_teleport_sampled(rng):
    psi = random_pure(2, rng)
    seen = set()
    for seed in range(12):
        bob, bits, prob = pr.teleport(psi, seed=seed)
        seen.add(bits)
        assert abs(prob - 0.25) < 1e-12
        assert overlap(psi, bob) > 1 - 1e-12
    assert len(seen) > 1


def test_teleport_basis_state():
    bob, _, _ = pr.teleport(ket(0, 2), seed=5)
    assert np.max(np.abs(bob - projector(ket(0, 2)))) < 1e-12


def test_coherent_teleport_transfers_state(rng):
    psi = random_pure(2, rng)
    circuit = pr.teleport_circuit(remove_measurement=True)
    result = pr.simulate(circuit, tensor(psi, ket(0, 2), ket(0, 2)))
    bob = partial_trace(projector(result.state), (2, 2, 2), 2)
    assert overlap(psi, bob) > 1 - 1e-12


def test_branch_operations_sum_to_randomizer():
    observed = pr.teleport_as_operations()
    assert ops.maps_equal(observed.total(), ops.standard_channel("pauli_randomizer"))
    assert len(observed.branches) == 4
