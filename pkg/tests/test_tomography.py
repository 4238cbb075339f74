import numpy as np
import pytest

from qinfo import ops
from qinfo import tomography as tg
from qinfo.core import ket, projector
from qinfo.sampling import random_channel, rng_from


def amplitude_damping_blocks(gamma):
    r1 = np.array([[1, 0], [0, 0]], complex)
    r2 = np.array([[0, np.sqrt(1 - gamma)], [0, 0]], complex)
    r4 = np.array([[gamma, 0], [0, 1 - gamma]], complex)
    return r1, r2, r2.conj().T, r4


def amplitude_damping_chi(gamma):
    s = np.sqrt(1 - gamma)
    return 0.25 * np.array(
        [
            [(1 + s) ** 2, 0, 0, gamma],
            [0, gamma, -gamma, 0],
            [0, -gamma, gamma, 0],
            [gamma, 0, 0, (1 - s) ** 2],
        ],
        complex,
    )


@pytest.mark.parametrize("gamma", [0.1, 0.5, 0.9])
def test_one_qubit_chi_amplitude_damping(gamma):
    res = tg.one_qubit_chi(*amplitude_damping_blocks(gamma))
    assert np.max(np.abs(res.chi - amplitude_damping_chi(gamma))) < 1e-12
    target = ops.standard_channel("amplitude_damping", gamma=gamma)
    u = ops.kraus_equivalent(res.operation(), target)
    assert u is not None
    assert np.linalg.norm(u @ u.conj().T - np.eye(u.shape[0])) < 1e-9


def test_one_qubit_chi_identity():
    ident = [projector(ket(0, 2)), np.array([[0, 1], [0, 0]], complex),
             np.array([[0, 0], [1, 0]], complex), projector(ket(1, 2))]
    res = tg.one_qubit_chi(*ident)
    expect = np.zeros((4, 4))
    expect[0, 0] = 1
    assert np.max(np.abs(res.chi - expect)) < 1e-12


def test_one_qubit_chi_phase_flip():
    # forward simulation oracle: chi supported on (I,I) and (Z,Z)
    p = 0.3
    chan = ops.standard_channel("phase_flip", p=p)
    res = tg.simulate_tomography(chan)
    expect = np.zeros((4, 4))
    expect[0, 0] = 1 - p
    expect[3, 3] = p
    assert np.max(np.abs(res.chi - expect)) < 1e-10


def test_one_qubit_paths_agree(rng):
    for _ in range(10):
        chan = random_channel(2, rng, n_kraus=3)

        def out(psi):
            return ops.apply(chan, projector(psi))[0]

        k0, k1 = ket(0, 2), ket(1, 2)
        via_meas = tg.one_qubit_chi_from_measurements(
            out(k0), out(k1), out((k0 + k1) / np.sqrt(2)), out((k0 + 1j * k1) / np.sqrt(2))
        )
        via_general = tg.simulate_tomography(chan)
        assert np.max(np.abs(via_meas.chi - via_general.chi)) < 1e-9


def test_recover_chi_random_round_trip(rng):
    # round trip at d = 2 and d = 4
    for d in (2, 4):
        for _ in range(3):
            chan = random_channel(d, rng, n_kraus=3)
            res = tg.simulate_tomography(chan)
            assert res.residual < 1e-9
            recovered = res.operation((d,), (d,))
            assert np.linalg.norm(ops.choi(recovered) - ops.choi(chan)) < 1e-8
            u = ops.kraus_equivalent(recovered, chan)
            assert u is not None


def test_chi_trace_preservation_parameters(rng):
    # complete maps satisfy sum_mn chi_mn E_n^dag E_m = I
    chan = random_channel(2, rng)
    res = tg.simulate_tomography(chan)
    fixed = tg.pauli_fixed_ops(1)
    acc = sum(
        res.chi[m, n] * fixed[n].conj().T @ fixed[m]
        for m in range(4)
        for n in range(4)
    )
    assert np.linalg.norm(acc - np.eye(2)) < 1e-8


def test_generalized_inverse_property(rng):
    # kappa via pseudoinverse satisfies beta kappa beta = beta
    basis = tg.default_basis(2)
    d2 = 4
    expand = np.array([p.reshape(-1) for p in basis.probe_states]).T
    inv_expand = np.linalg.inv(expand)
    beta = np.zeros((16, 16), dtype=complex)
    for j, rho_j in enumerate(basis.probe_states):
        for m, em in enumerate(basis.fixed_ops):
            for n, en in enumerate(basis.fixed_ops):
                coeffs = inv_expand @ (em @ rho_j @ en.conj().T).reshape(-1)
                beta[j * d2 : (j + 1) * d2, m * d2 + n] += coeffs
    kappa = np.linalg.pinv(beta, rcond=1e-10)
    assert np.linalg.norm(beta @ kappa @ beta - beta) < 1e-9


def test_pauli_randomizer_chi():
    res = tg.simulate_tomography(ops.standard_channel("pauli_randomizer"))
    assert np.max(np.abs(res.chi - np.eye(4) / 4)) < 1e-10


def test_incomplete_branch_recovery(rng):
    p0 = projector(ket(0, 2))
    branch = ops.quantum_op([p0])
    res = tg.simulate_tomography(branch, mode="incomplete")
    assert np.linalg.norm(ops.choi(res.operation()) - ops.choi(branch)) < 1e-9
    # branch probability on each probe is tr(P0 rho_j)
    for psi in (ket(0, 2), ket(1, 2)):
        _, prob = ops.apply(branch, projector(psi))
        assert abs(prob - abs(psi[0]) ** 2) < 1e-12


def test_incomplete_random_branch(rng):
    chan = random_channel(2, rng, n_kraus=4)
    branch = ops.quantum_op(chan.kraus[:2], chan.in_dims, chan.out_dims)
    res = tg.simulate_tomography(branch, mode="incomplete")
    assert np.linalg.norm(ops.choi(res.operation()) - ops.choi(branch)) < 1e-8


def test_kraus_from_chi_rejects_unphysical():
    chi = np.diag([1.0, -0.2, 0.0, 0.0]).astype(complex)
    with pytest.raises(ValueError):
        tg.kraus_from_chi(chi, tg.pauli_fixed_ops(1))
