import numpy as np
import pytest

from qinfo import metrics as mt
from qinfo import ops
from qinfo.core import ket, projector, purify, tensor
from qinfo.sampling import random_channel, random_density, random_pure


def test_absolute_distance_orthogonal_pure():
    a = projector(ket(0, 2))
    b = projector(ket(1, 2))
    assert abs(mt.absolute_distance(a, b) - 2) < 1e-12
    assert mt.absolute_distance(a, a) == 0.0


def test_absolute_distance_projector_formula(rng):
    # oracle: spectral split of rho - sigma
    rho, sigma = random_density(2, rng), random_density(2, rng)
    vals, vecs = np.linalg.eigh(rho - sigma)
    pos = vecs[:, vals > 0] @ vecs[:, vals > 0].conj().T
    via_projector = 2 * np.trace(pos @ (rho - sigma)).real
    assert abs(mt.absolute_distance(rho, sigma) - via_projector) < 1e-9


def test_absolute_distance_metric_axioms(rng):
    for _ in range(100):
        a, b, c = (random_density(2, rng) for _ in range(3))
        assert abs(mt.absolute_distance(a, b) - mt.absolute_distance(b, a)) < 1e-12
        assert mt.absolute_distance(a, c) <= mt.absolute_distance(a, b) + mt.absolute_distance(b, c) + 1e-9
    assert mt.absolute_distance(a, a) < 1e-12


def test_fidelity_pure_overlap(rng):
    psi = random_pure(3, rng)
    rho = random_density(3, rng)
    f = mt.fidelity(projector(psi), rho)
    assert abs(f - np.sqrt(np.real(psi.conj() @ rho @ psi))) < 1e-8


def test_fidelity_extremes(rng):
    rho = random_density(2, rng)
    assert abs(mt.fidelity(rho, rho) - 1) < 1e-8
    assert mt.fidelity(projector(ket(0, 2)), projector(ket(1, 2))) < 1e-9


def test_fidelity_uhlmann_search(rng):
    # oracle: maximize over reference-side unitaries on purifications
    for seed in range(3):
        rho, sigma = random_density(2, rng), random_density(2, rng)
        closed = mt.fidelity(rho, sigma)
        searched = mt.uhlmann_fidelity_search(rho, sigma, restarts=20, seed=seed)
        assert abs(closed - searched) < 1e-6


def test_derived_metrics():
    a = projector(ket(0, 2))
    b = projector(ket(1, 2))
    d = mt.derived_metrics(a, b)
    assert abs(d["angle"] - np.pi / 2) < 1e-9 and abs(d["error"] - 1) < 1e-9
    same = mt.derived_metrics(a, a)
    assert abs(same["angle"]) < 1e-6 and abs(same["error"]) < 1e-9


def test_angle_triangle_inequality(rng):
    for _ in range(100):
        a, b, c = (random_density(2, rng) for _ in range(3))
        assert mt.angle(a, c) <= mt.angle(a, b) + mt.angle(b, c) + 1e-7


def test_dynamic_fidelity_identity_and_randomizer():
    half = np.eye(2, dtype=complex) / 2
    assert abs(mt.dynamic_fidelity(half, ops.standard_channel("identity")) - 1) < 1e-12
    assert abs(mt.dynamic_fidelity(half, ops.standard_channel("pauli_randomizer")) - 0.25) < 1e-12


def test_dynamic_fidelity_pure_input_is_static_squared(rng):
    psi = random_pure(2, rng)
    chan = random_channel(2, rng)
    rho = projector(psi)
    dyn = mt.dynamic_fidelity(rho, chan)
    out, prob = ops.apply(chan, rho)
    assert abs(dyn - np.real(psi.conj() @ (out / prob) @ psi)) < 1e-9


def test_dynamic_fidelity_purification_independent(rng):
    # two distinct purifications give the same joint-state fidelity
    from qinfo.sampling import random_unitary

    rho = random_density(2, rng)
    chan = random_channel(2, rng)
    psi1, dims = purify(rho)
    psi2 = tensor(np.eye(2), random_unitary(2, rng)) @ psi1
    vals = []
    for psi in (psi1, psi2):
        before = projector(psi)
        after = sum(
            tensor(k, np.eye(2)) @ before @ tensor(k, np.eye(2)).conj().T
            for k in chan.kraus
        )
        vals.append(np.real(psi.conj() @ after @ psi))
    assert abs(vals[0] - vals[1]) < 1e-9
    assert abs(vals[0] - mt.dynamic_fidelity(rho, chan)) < 1e-9


def test_dynamic_distance_identity_zero(rng):
    rho = random_density(2, rng)
    assert mt.dynamic_distance(rho, ops.standard_channel("identity")) < 1e-9


def test_dynamic_sandwich(rng):
    for _ in range(50):
        rho = random_density(2, rng)
        chan = random_channel(2, rng)
        e = mt.dynamic_error(rho, chan)
        d = mt.dynamic_distance(rho, chan)
        assert 2 * e <= d + 1e-9
        assert d <= 2 * np.sqrt(max(e, 0)) + 1e-9


def test_mixing_counterexample_values():
    mixed, part1, part2 = mt.mixing_counterexample()
    assert abs(mixed - 3 / 8) < 1e-12
    # each part computes to 1/2; the mixture being below the average of the
    # parts rules out joint concavity of the dynamic fidelity
    assert abs(part1 - 0.5) < 1e-12 and abs(part2 - 0.5) < 1e-12
    assert mixed < (part1 + part2) / 2


def test_fidelity_strong_concavity(rng):
    for _ in range(50):
        p, q = rng.uniform(), rng.uniform()
        r1, r2 = random_density(2, rng), random_density(2, rng)
        s1, s2 = random_density(2, rng), random_density(2, rng)
        lhs = np.sqrt(p * q) * mt.fidelity(r1, s1) + np.sqrt((1 - p) * (1 - q)) * mt.fidelity(r2, s2)
        rhs = mt.fidelity(p * r1 + (1 - p) * r2, q * s1 + (1 - q) * s2)
        assert lhs <= rhs + 1e-9


def test_chaining_equality_with_identity(rng):
    rho = random_density(2, rng)
    chan = random_channel(2, rng)
    ident = ops.standard_channel("identity")
    total = mt.dynamic_distance(rho, ops.compose(ident, chan))
    assert abs(total - mt.dynamic_distance(rho, chan)) < 1e-9


def test_metric_suite_no_violations():
    reports = mt.metric_inequality_suite(seed=99, samples=40)
    bad = [r for r in reports if not r.holds(1e-7)]
    assert not bad, bad[:3]


def test_shape_mismatch_raises():
    with pytest.raises(ValueError):
        mt.absolute_distance(np.eye(2) / 2, np.eye(3) / 3)
    with pytest.raises(ValueError):
        mt.fidelity(np.eye(2) / 2, np.eye(3) / 3)
