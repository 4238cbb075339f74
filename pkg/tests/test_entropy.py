import numpy as np
import pytest

from qinfo import entropy as ei
from qinfo import ops
from qinfo.core import ket, partial_trace, projector, tensor
from qinfo.sampling import random_channel, random_density, rng_from

BELL = projector(np.array([1, 0, 0, 1], complex) / np.sqrt(2))


def test_vn_entropy_maximally_mixed():
    for d in (2, 3, 5):
        assert abs(ei.vn_entropy(np.eye(d) / d) - np.log2(d)) < 1e-12


def test_vn_entropy_pure_and_binary():
    assert ei.vn_entropy(projector(ket(0, 2))) == 0.0
    # oracle: binary entropy evaluation
    expect = -(0.75 * np.log2(0.75) + 0.25 * np.log2(0.25))
    assert abs(ei.vn_entropy(np.diag([0.75, 0.25])) - expect) < 1e-12
    assert abs(ei.binary(0.25) - expect) < 1e-12


def test_relative_entropy_basics(rng):
    rho = random_density(3, rng)
    assert abs(ei.relative_entropy(rho, rho)) < 1e-9
    # S(rho || I/d) = log d - S(rho)
    expect = np.log2(3) - ei.vn_entropy(rho)
    assert abs(ei.relative_entropy(rho, np.eye(3) / 3) - expect) < 1e-9
    assert ei.relative_entropy(projector(ket(0, 2)), projector(ket(1, 2))) == np.inf


def test_relative_entropy_nonnegative(rng):
    for _ in range(100):
        a, b = random_density(2, rng), random_density(2, rng)
        assert ei.relative_entropy(a, b) >= -1e-9


def test_conditional_mutual_bell():
    cm = ei.conditional_mutual(BELL, (2, 2))
    assert abs(cm.s_a_given_b + 1) < 1e-9
    assert abs(cm.s_b_given_a + 1) < 1e-9
    assert abs(cm.mutual - 2) < 1e-9


def test_conditional_mutual_product_and_classical(rng):
    prod = tensor(random_density(2, rng), random_density(2, rng))
    assert abs(ei.conditional_mutual(prod, (2, 2)).mutual) < 1e-9
    classical = np.diag([0.5, 0, 0, 0.5]).astype(complex)
    cm = ei.conditional_mutual(classical, (2, 2))
    assert abs(cm.s_a_given_b) < 1e-9
    assert abs(cm.mutual - 1) < 1e-9


def test_entropy_exchange_unitary_zero(rng):
    from qinfo.sampling import random_unitary

    u = ops.unitary_op(random_unitary(2, rng))
    assert abs(ei.entropy_exchange(np.eye(2) / 2, u)) < 1e-9


def test_entropy_exchange_decohere_plus():
    plus = projector(np.array([1, 1], complex) / np.sqrt(2))
    assert abs(ei.entropy_exchange(plus, ops.standard_channel("decohere")) - 1) < 1e-9


def test_entropy_exchange_classical_channel_embedding():
    # classical channel rho_X -> sum p(y|x) |y><x| rho |x><y| has W diagonal
    # with entries p(x, y), so the exchange is H(X, Y)
    p_x = np.array([0.6, 0.4])
    p_y_given_x = np.array([[0.9, 0.1], [0.2, 0.8]])
    kraus = []
    for x in range(2):
        for y in range(2):
            kraus.append(np.sqrt(p_y_given_x[x, y]) * np.outer(ket(y, 2), ket(x, 2).conj()))
    chan = ops.quantum_op(kraus)
    rho_x = np.diag(p_x).astype(complex)
    joint = (p_x[:, None] * p_y_given_x).reshape(-1)
    assert abs(ei.entropy_exchange(rho_x, chan) - ei.shannon(joint)) < 1e-9
    # coherent information matches the classical bookkeeping
    h_x = ei.shannon(p_x)
    p_y = p_x @ p_y_given_x
    expect = ei.shannon(p_y) - ei.shannon(joint)
    assert abs(ei.coherent_information(rho_x, chan) - expect) < 1e-9


def test_entropy_exchange_matches_environment(rng):
    # oracle: environment model output entropy
    chan = random_channel(2, rng, n_kraus=3)
    rho = random_density(2, rng)
    model = ops.environment_model(chan)
    joint = model.unitary @ np.kron(rho, projector(ket(0, model.env_dim))) @ model.unitary.conj().T
    env = partial_trace(joint, (2, model.env_dim), 1)
    assert abs(ei.entropy_exchange(rho, chan) - ei.vn_entropy(env)) < 1e-9


def test_coherent_information_identity_and_randomizer(rng):
    rho = random_density(2, rng)
    ident = ops.standard_channel("identity")
    assert abs(ei.coherent_information(rho, ident) - ei.vn_entropy(rho)) < 1e-9
    randomizer = ops.standard_channel("pauli_randomizer")
    assert abs(ei.coherent_information(np.eye(2) / 2, randomizer) + 1) < 1e-9


def test_coherent_information_additivity(rng):
    chan1 = random_channel(2, rng)
    chan2 = random_channel(2, rng)
    rho1, rho2 = random_density(2, rng), random_density(2, rng)
    joint = ei.coherent_information(tensor(rho1, rho2), ops.tensor_ops(chan1, chan2))
    split = ei.coherent_information(rho1, chan1) + ei.coherent_information(rho2, chan2)
    assert abs(joint - split) < 1e-9


def test_coherent_information_convex_in_operation(rng):
    rho = random_density(2, rng)
    for _ in range(20):
        a, b = random_channel(2, rng), random_channel(2, rng)
        lam = rng.uniform()
        mixed = ops.quantum_op(
            [np.sqrt(lam) * k for k in a.kraus] + [np.sqrt(1 - lam) * k for k in b.kraus]
        )
        lhs = ei.coherent_information(rho, mixed)
        rhs = lam * ei.coherent_information(rho, a) + (1 - lam) * ei.coherent_information(rho, b)
        assert lhs <= rhs + 1e-9


def test_holevo_two_state_curve():
    for theta in (0.3, np.pi / 2, 2.0):
        psi = np.array([np.cos(theta), np.sin(theta)], complex)
        ens = ei.Ensemble(np.array([0.5, 0.5]), [projector(ket(0, 2)), projector(psi)])
        assert abs(ei.holevo_chi(ens) - ei.binary((1 + np.cos(theta)) / 2)) < 1e-9
    same = ei.Ensemble(np.array([0.3, 0.7]), [projector(ket(0, 2))] * 2)
    assert abs(ei.holevo_chi(same)) < 1e-12


def test_holevo_bounds(rng):
    for _ in range(50):
        w = rng.dirichlet(np.ones(3))
        members = [random_density(2, rng) for _ in range(3)]
        ens = ei.Ensemble(w, members)
        chi = ei.holevo_chi(ens)
        assert -1e-9 <= chi <= ei.vn_entropy(ens.average()) + 1e-9
        assert chi <= 1 + 1e-9


def test_fano_quantum_cases(rng):
    from qinfo.sampling import random_unitary

    u = ops.unitary_op(random_unitary(2, rng))
    assert ei.fano_quantum(np.eye(2) / 2, u).holds()
    rep = ei.fano_quantum(np.eye(2) / 2, ops.standard_channel("pauli_randomizer"))
    # both sides evaluated: S_e = 2 meets the bound h(1/4) + (3/4) log 3
    # with equality (the joint state is maximally mixed)
    assert abs(rep.lhs - 2) < 1e-9
    assert abs(rep.rhs - (ei.binary(0.25) + 0.75 * np.log2(3))) < 1e-9
    assert rep.holds()


def test_fano_classical_zero_error_branch():
    rep = ei.fano_classical(0.0, 4, 0.0)
    assert rep.holds() and rep.rhs == 0.0
    assert not ei.fano_classical(0.0, 4, 0.5).holds()


def test_correlation_entropy_and_tables(rng):
    rho = random_density(2, rng)
    op1 = random_channel(2, rng)
    op2 = random_channel(2, rng)
    q = ei.two_stage_entropies(rho, op1, op2)
    # the correlation entropy is the complement of (R'', E2''): both
    # partitions of the pure four-party state have equal entropy
    assert q["C"] >= -1e-12
    reports = ei.two_stage_reports(rho, op1, op2)
    assert len(reports) == 30
    for rep in reports:
        assert rep.holds(), rep


def test_entropy_suite_no_violations():
    reports = ei.entropy_inequality_suite(seed=2024, samples=40)
    bad = [r for r in reports if not r.holds()]
    assert not bad, bad[:3]
