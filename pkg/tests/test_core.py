import numpy as np
import pytest

from qinfo import core
from qinfo.ops import SIGMA_X, SIGMA_Z
from qinfo.sampling import random_density, random_pure, random_unitary

BELL = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def test_tensor_identity():
    assert np.array_equal(core.tensor(np.eye(2), np.eye(2)), np.eye(4))


def test_tensor_basis_action():
    psi = core.tensor(SIGMA_X, np.eye(2)) @ core.basis_ket((0, 0), (2, 2))
    assert np.allclose(psi, core.basis_ket((1, 0), (2, 2)))


def test_tensor_mixed_product_rule(rng):
    # oracle: direct multiplication
    a, b, c, d = [rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(4)]
    lhs = core.tensor(a, b) @ core.tensor(c, d)
    rhs = core.tensor(a @ c, b @ d)
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_partial_trace_bell():
    red = core.partial_trace(core.projector(BELL), (2, 2), 0)
    assert np.allclose(red, np.eye(2) / 2, atol=1e-12)


def test_partial_trace_product(rng):
    rho = random_density(2, rng)
    sigma = random_density(3, rng)
    joint = core.tensor(rho, sigma)
    assert np.allclose(core.partial_trace(joint, (2, 3), 0), rho, atol=1e-12)
    assert np.allclose(core.partial_trace(joint, (2, 3), 1), sigma, atol=1e-12)


def test_partial_trace_three_qubit_spectra_match(rng):
    # oracle: full eigensolve on complementary reductions of a pure state
    psi = random_pure(8, rng)
    rho = core.projector(psi)
    r1 = core.partial_trace(rho, (2, 2, 2), 0)
    r23 = core.partial_trace(rho, (2, 2, 2), [1, 2])
    e1 = np.sort(np.linalg.eigvalsh(r1))
    e23 = np.sort(np.linalg.eigvalsh(r23))[-2:]
    assert np.max(np.abs(e1 - e23)) < 1e-9


def test_partial_trace_preserves_trace_and_positivity(rng):
    for _ in range(200):
        rho = random_density(8, rng)
        red = core.partial_trace(rho, (2, 2, 2), [0, 2])
        assert abs(np.trace(red).real - 1) < 1e-9
        assert np.linalg.eigvalsh(red).min() > -1e-9


def test_partial_trace_bad_index():
    with pytest.raises(ValueError):
        core.partial_trace(np.eye(4) / 4, (2, 2), 5)


def test_func_hermitian_abs_and_sqrt():
    assert np.allclose(core.abs_op(np.diag([1.0, -1.0])), np.eye(2))
    assert np.allclose(core.sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]))


def test_abs_distance_pure_pair():
    # tr|rho - sigma| = 2|sin theta| for pure states an angle theta apart
    theta = 0.7
    a = core.projector(np.array([1.0, 0.0]))
    b_vec = np.array([np.cos(theta), np.sin(theta)])
    b = core.projector(b_vec)
    val = np.trace(core.abs_op(a - b)).real
    assert abs(val - 2 * abs(np.sin(theta))) < 1e-12


def test_func_hermitian_rejects_non_hermitian():
    with pytest.raises(ValueError):
        core.sqrt_psd(np.array([[0, 1], [0, 0]], dtype=complex))


def test_schmidt_bell():
    sd = core.schmidt_pure(BELL, (2, 2))
    assert np.allclose(sd.coefficients, [1 / np.sqrt(2)] * 2, atol=1e-12)
    assert sd.number() == 2
    assert np.linalg.norm(sd.reconstruct() - BELL) < 1e-12


def test_schmidt_product_state():
    psi = core.tensor(core.ket(0, 2), (core.ket(0, 2) + core.ket(1, 2)) / np.sqrt(2))
    sd = core.schmidt_pure(psi, (2, 2))
    assert sd.number() == 1
    assert abs(sd.coefficients[0] - 1) < 1e-12


def test_schmidt_qutrit_matches_reduced_spectrum(rng):
    # oracle: partial-trace eigensolve
    psi = random_pure(9, rng)
    sd = core.schmidt_pure(psi, (3, 3))
    red = core.partial_trace(core.projector(psi), (3, 3), 0)
    evals = np.sort(np.linalg.eigvalsh(red))[::-1]
    assert np.max(np.abs(sd.coefficients ** 2 - evals)) < 1e-9
    assert np.linalg.norm(sd.reconstruct() - psi) < 1e-9


def test_schmidt_deterministic(rng):
    psi = random_pure(4, rng)
    a = core.schmidt_pure(psi, (2, 2))
    b = core.schmidt_pure(psi.copy(), (2, 2))
    assert np.array_equal(a.basis_a, b.basis_a)
    assert np.array_equal(a.basis_b, b.basis_b)


def test_purify_diagonal():
    psi, dims = core.purify(np.diag([0.75, 0.25]).astype(complex))
    expect = np.sqrt(0.75) * core.basis_ket((0, 0), dims) + np.sqrt(0.25) * core.basis_ket((1, 1), dims)
    assert np.linalg.norm(psi - expect) < 1e-12


def test_purify_round_trip(rng):
    for _ in range(20):
        rho = random_density(3, rng)
        psi, dims = core.purify(rho)
        back = core.partial_trace(core.projector(psi), dims, 0)
        assert np.linalg.norm(back - rho) < 1e-9


def test_purifications_related_by_reference_unitary(rng):
    # oracle: solve the basis change between the two Schmidt frames
    rho = random_density(2, rng)
    psi1, dims = core.purify(rho)
    u_ref = random_unitary(2, rng)
    psi2 = core.tensor(np.eye(2), u_ref) @ psi1
    assert np.linalg.norm(core.partial_trace(core.projector(psi2), dims, 0) - rho) < 1e-12
    # recover the connecting unitary from the two purifications
    m1 = psi1.reshape(2, 2)
    m2 = psi2.reshape(2, 2)
    solved = np.linalg.lstsq(m1, m2, rcond=None)[0]  # m2 = m1 u^T
    assert np.linalg.norm(core.tensor(np.eye(2), solved.T) @ psi1 - psi2) < 1e-9


def test_operator_schmidt_cnot_structure():
    cnot = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
    osd = core.schmidt_operator(cnot, (2, 2))
    assert osd.number() == 2
    assert np.linalg.norm(osd.reconstruct() - cnot) < 1e-9
    # coefficients equal singular values of the reshuffled operator
    resh = cnot.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    assert np.allclose(np.sort(osd.coefficients)[::-1], np.linalg.svd(resh, compute_uv=False), atol=1e-12)


def test_operator_schmidt_identity_and_swap():
    assert core.schmidt_operator(np.eye(4, dtype=complex), (2, 2)).number() == 1
    swap = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
    assert core.schmidt_operator(swap, (2, 2)).number() == 4


def test_operator_schmidt_reconstruction_random(rng):
    u = random_unitary(6, rng)
    osd = core.schmidt_operator(u, (2, 3))
    assert np.linalg.norm(osd.reconstruct() - u) < 1e-9
    # trace-orthonormality of the factors
    for k in range(osd.number()):
        for l in range(osd.number()):
            g = np.trace(osd.ops_a[k].conj().T @ osd.ops_a[l])
            assert abs(g - (1 if k == l else 0)) < 1e-9


def test_mixed_schmidt_product_state(rng):
    # oracle: direct construction from local eigendecompositions
    rho = core.tensor(random_density(2, rng), random_density(2, rng))
    report = core.mixed_schmidt_verify(rho, (2, 2))
    assert report.max_residual() < 1e-9


def test_mixed_schmidt_random_states(rng):
    for _ in range(10):
        rho = random_density(4, rng)
        report = core.mixed_schmidt_verify(rho, (2, 2))
        assert report.max_residual() < 1e-9


def test_mixed_schmidt_supplied_matrices(rng):
    rho = random_density(4, rng)
    mats, _, _, _ = core.mixed_schmidt_coefficients(rho, (2, 2))
    report = core.mixed_schmidt_verify(rho, (2, 2), coeff_matrices=mats)
    assert report.max_residual() < 1e-9


def test_validate_density_rejects_bad_trace():
    with pytest.raises(ValueError):
        core.validate_density(np.eye(2) * 0.6)
