import numpy as np
import pytest

from qinfo import capacity as cap
from qinfo import ops
from qinfo.core import schmidt_operator
from qinfo.entropy import binary, coherent_information, vn_entropy
from qinfo.sampling import random_channel, random_density, random_unitary, rng_from

CNOT = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
SWAP = np.eye(4, dtype=complex)[[0, 2, 1, 3]]


def test_identity_channel_capacity():
    est = cap.coherent_info_max(ops.standard_channel("identity"), restarts=6, seed=0)
    assert abs(est.value - 1) < 1e-5
    assert np.max(np.abs(est.argmax_state - np.eye(2) / 2)) < 1e-2


def test_randomizer_capacity_nonpositive():
    est = cap.coherent_info_max(ops.standard_channel("pauli_randomizer"), restarts=6, seed=0)
    assert est.value <= 1e-6


def test_erasure_one_shot_value():
    est = cap.coherent_info_max(ops.standard_channel("erasure", epsilon=0.25), restarts=8, seed=1)
    assert abs(est.value - 0.5) < 1e-4


def test_erasure_analytic_shape(rng):
    # I(rho, erasure(eps)) = (1 - 2 eps) S(rho) for every input
    chan = ops.standard_channel("erasure", epsilon=0.15)
    for _ in range(10):
        rho = random_density(2, rng)
        got = coherent_information(rho, chan)
        assert abs(got - (1 - 0.3) * vn_entropy(rho)) < 1e-9


def test_unitary_preencoding_invariance(rng):
    chan = ops.standard_channel("amplitude_damping", gamma=0.2)
    pre = ops.unitary_op(random_unitary(2, rng))
    direct = cap.coherent_info_max(chan, restarts=10, seed=3)
    folded = cap.coherent_info_max(ops.compose(chan, pre), restarts=10, seed=4)
    assert abs(direct.value - folded.value) < 1e-4


def test_block_superadditivity_direction():
    chan = ops.standard_channel("amplitude_damping", gamma=0.3)
    one = cap.coherent_info_max(chan, restarts=8, seed=5)
    product_seed = np.kron(one.argmax_state, one.argmax_state)
    two = cap.coherent_info_max(
        chan, n=2, restarts=2, seed=5, warm_starts=[product_seed]
    )
    assert two.value >= 2 * one.value - 1e-4


def test_pipelining_example_values():
    r = cap.pipelining_example(0.8)
    assert abs(r["pipeline"] - r["entropy"]) < 1e-9
    # direct computation gives S - 1, one bit per branch pair of environments
    assert abs(r["post_coding"] - (r["entropy"] - 1)) < 1e-9
    # pure boundary: both sides 0 and -1
    pure = cap.pipelining_example(1.0 - 1e-12)
    assert abs(pure["pipeline"]) < 1e-6
    assert abs(pure["post_coding"] + 1) < 1e-6
    # the pipelining inequality is violated for every input on the subspace
    assert r["pipeline"] > r["post_coding"]


def test_subadditivity_example_values():
    joint, m1, m2 = cap.subadditivity_example()
    assert abs(joint - 2) < 1e-9
    assert abs(m1) < 1e-9
    assert abs(m2) < 1e-9


def test_observed_teleportation_bound():
    observed = cap.ObservedChannel([ops.quantum_op([s / 2]) for s in ops.PAULIS])
    assert ops.maps_equal(observed.total(), ops.standard_channel("pauli_randomizer"))
    est = cap.observed_bound(observed, restarts=8, seed=2)
    assert abs(est.value - 1) < 1e-6
    half = np.eye(2, dtype=complex) / 2
    assert abs(cap.branch_averaged_information(observed, half) - 1) < 1e-9


def test_observed_geq_unobserved(rng):
    chan = random_channel(2, rng, n_kraus=4)
    observed = cap.ObservedChannel(
        [
            ops.quantum_op(chan.kraus[:2], chan.in_dims, chan.out_dims),
            ops.quantum_op(chan.kraus[2:], chan.in_dims, chan.out_dims),
        ]
    )
    unobs = cap.coherent_info_max(chan, restarts=6, seed=8)
    obs = cap.observed_bound(observed, restarts=6, seed=8)
    assert obs.value >= unobs.value - 1e-6


def test_embedding_matches_branch_average(rng):
    # the all-quantum version has the same coherent information pointwise
    chan = random_channel(2, rng, n_kraus=4)
    observed = cap.ObservedChannel(
        [
            ops.quantum_op(chan.kraus[:2], chan.in_dims, chan.out_dims),
            ops.quantum_op(chan.kraus[2:], chan.in_dims, chan.out_dims),
        ]
    )
    embedded = cap.embed(observed)
    assert ops.classify(embedded).kind == "complete"
    for _ in range(10):
        rho = random_density(2, rng)
        a = coherent_information(rho, embedded)
        b = cap.branch_averaged_information(observed, rho)
        assert abs(a - b) < 1e-9


def test_phase_erasure_observed_values():
    delta = 0.25
    keep = ops.quantum_op([np.sqrt(1 - delta) * np.eye(2, dtype=complex)])
    dephase = ops.quantum_op(
        [np.sqrt(delta) * np.diag([1.0, 0]).astype(complex), np.sqrt(delta) * np.diag([0.0, 1]).astype(complex)]
    )
    observed = cap.ObservedChannel([keep, dephase])
    est = cap.observed_bound(observed, restarts=8, seed=9)
    assert abs(est.value - (1 - delta)) < 1e-4


def test_capacity_region_theorem():
    assert cap.capacity_region_qubits(2, 1, 1)       # superdense coding point
    assert not cap.capacity_region_qubits(2, 1, 0)   # violates the sum bound
    assert cap.capacity_region_qubits(0, 0, 0)
    assert not cap.capacity_region_qubits(3, 1, 5)   # violates n_ab >= ceil(n/2)
    for n in range(9):
        for nab in range(n + 3):
            for nba in range(n + 3):
                assert cap.capacity_region_qubits(n, nab, nba) == cap.capacity_region_by_counting(n, nab, nba)
    with pytest.raises(ValueError):
        cap.capacity_region_qubits(-1, 0, 0)


def test_comm_lower_bounds():
    assert schmidt_operator(CNOT, (2, 2)).number() == 2
    assert cap.comm_lower_bound(CNOT, (2, 2)) == 1
    assert schmidt_operator(SWAP, (2, 2)).number() == 4
    assert cap.comm_lower_bound(SWAP, (2, 2)) == 1
    qft = cap.qft_matrix(4)
    assert schmidt_operator(qft, (4, 4)).number() == 16
    assert cap.comm_lower_bound(qft, (4, 4)) == 2
    # swap on 2+2 qubits has Schmidt number 4^2 and bound 2
    big_swap = np.zeros((16, 16), dtype=complex)
    for i in range(4):
        for j in range(4):
            big_swap[j * 4 + i, i * 4 + j] = 1.0
    assert schmidt_operator(big_swap, (4, 4)).number() == 16
    assert cap.comm_lower_bound(big_swap, (4, 4)) == 2
    with pytest.raises(ValueError):
        cap.comm_lower_bound(np.diag([1.0, 0.5, 1, 1]).astype(complex), (2, 2))


def test_entropy_fidelity_lemma_random(rng):
    for _ in range(30):
        rho = random_density(2, rng)
        coder = random_channel(2, rng)
        decoder = random_channel(2, rng)
        assert cap.entropy_fidelity_report(rho, coder, decoder).holds()


def test_generalized_entropy_fidelity_random(rng):
    for _ in range(30):
        rho = random_density(2, rng)
        chan = random_channel(2, rng, n_kraus=4)
        branches = [
            ops.quantum_op(chan.kraus[:2], chan.in_dims, chan.out_dims),
            ops.quantum_op(chan.kraus[2:], chan.in_dims, chan.out_dims),
        ]
        decoders = [random_channel(2, rng) for _ in branches]
        assert cap.generalized_entropy_fidelity_report(rho, branches, decoders).holds()
