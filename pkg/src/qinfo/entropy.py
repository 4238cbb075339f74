"""Entropic quantities and the inequality machinery built on them.

All entropies are in bits (logarithms base two, 0 log 0 = 0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import EIG_TOL, dag, eigh_clipped, partial_trace, split_dims
from .ops import apply, compose, quantum_op, w_matrix
from .report import MetricReport
from .sampling import random_channel, random_density, rng_from

# eigenvalues below this are treated as exact zeros inside entropy sums
ZERO_EIG = 1e-12


def shannon(p):
    """Shannon entropy -sum p log2 p of a probability vector."""
    p = np.asarray(p, dtype=float)
    p = p[p > ZERO_EIG]
    return float(-np.sum(p * np.log2(p))) + 0.0


def binary(p):
    return shannon([p, 1.0 - p])


def eta(x):
    """-x log2 x with eta(0) = 0."""
    return 0.0 if x <= ZERO_EIG else float(-x * np.log2(x))


def vn_entropy(rho):
    """Von Neumann entropy in bits."""
    vals, _ = eigh_clipped(rho)
    return shannon(vals[vals > ZERO_EIG])


def relative_entropy(rho, sigma, support_tol=1e-9):
    """S(rho || sigma), +inf when supp(rho) is not inside supp(sigma).

    Support containment is decided by projecting rho onto the kernel of
    sigma and thresholding the projected trace.
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    svals, svecs = eigh_clipped(sigma)
    kernel = svecs[:, svals <= ZERO_EIG]
    if kernel.shape[1]:
        leak = np.trace(dag(kernel) @ rho @ kernel).real
        if leak > support_tol:
            return np.inf
    keep = svals > ZERO_EIG
    overlap = np.einsum("ij,jk,ki->i", dag(svecs[:, keep]), rho, svecs[:, keep]).real
    return float(-vn_entropy(rho) - np.sum(overlap * np.log2(svals[keep])))


@dataclass
class ConditionalMutual:
    s_a_given_b: float
    s_b_given_a: float
    mutual: float


def conditional_mutual(rho, dims, cut=1):
    """S(A|B), S(B|A) and S(A:B) across dims[:cut] | dims[cut:]."""
    split_dims(dims, cut)
    dims = tuple(dims)
    s_ab = vn_entropy(rho)
    s_a = vn_entropy(partial_trace(rho, dims, list(range(cut))))
    s_b = vn_entropy(partial_trace(rho, dims, list(range(cut, len(dims)))))
    return ConditionalMutual(s_ab - s_b, s_ab - s_a, s_a + s_b - s_ab)


def entropy_exchange(rho, op):
    """S(rho, E) = S(W), the entropy passed to an initially pure environment."""
    return vn_entropy(w_matrix(op, rho))


def coherent_information(rho, op):
    """I(rho, E) = S(E(rho)/tr) - S(rho, E)."""
    out, prob = apply(op, rho)
    if prob <= EIG_TOL:
        raise ValueError("operation has zero probability on this input")
    return vn_entropy(out / prob) - entropy_exchange(rho, op)


@dataclass
class Ensemble:
    """Probability-weighted list of density operators on a common space."""

    weights: np.ndarray
    states: list

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.min() < -1e-12 or abs(w.sum() - 1.0) > 1e-8:
            raise ValueError("weights must be a probability distribution")
        self.weights = np.clip(w, 0.0, None)

    def average(self):
        return sum(p * s for p, s in zip(self.weights, self.states))


def holevo_chi(ensemble):
    """chi = S(sum_x p_x rho_x) - sum_x p_x S(rho_x)."""
    avg = ensemble.average()
    return vn_entropy(avg) - float(
        sum(p * vn_entropy(s) for p, s in zip(ensemble.weights, ensemble.states))
    )


def fano_classical(p_error, n_outcomes, h_x_given_y):
    """Classical bound h(p_e) + p_e log(|X|-1) >= H(X|Y) as a report."""
    rhs = binary(p_error) + (p_error * np.log2(n_outcomes - 1) if n_outcomes > 1 else 0.0)
    return MetricReport("fano_classical", float(h_x_given_y), float(rhs))


def fano_quantum(rho, op):
    """Quantum bound S_e <= h(F) + (1-F) log(d^2 - 1) as a report."""
    from .metrics import dynamic_fidelity

    d = op.din
    f = dynamic_fidelity(rho, op)
    rhs = binary(min(max(f, 0.0), 1.0)) + (1 - f) * np.log2(d * d - 1)
    return MetricReport("fano_quantum", entropy_exchange(rho, op), float(rhs))


def correlation_entropy(rho, op1, op2):
    """Entropy of the joint (output, first environment) state after two stages.

    Computed from the matrix with entries
    U_{(i,k),(j,l)} = sum_m <k| E2_m E1_i rho E1_j^dag E2_m^dag |l>,
    normalized by the two-stage probability.
    """
    rho = np.asarray(rho, dtype=complex)
    n1 = len(op1.kraus)
    d = op2.dout
    total = compose(op2, op1)
    _, prob = apply(total, rho)
    u = np.zeros((n1 * d, n1 * d), dtype=complex)
    for i in range(n1):
        left = [m @ op1.kraus[i] for m in op2.kraus]
        for j in range(n1):
            right = [m @ op1.kraus[j] for m in op2.kraus]
            block = sum(a @ rho @ dag(b) for a, b in zip(left, right))
            u[i * d : (i + 1) * d, j * d : (j + 1) * d] = block
    return vn_entropy(u / prob)


def two_stage_entropies(rho, op1, op2):
    """All entropic quantities of the two-stage process rho -> op1 -> op2."""
    out1, p1 = apply(op1, rho)
    total = compose(op2, op1)
    out2, _ = apply(total, rho)
    rho1 = out1 / p1
    return {
        "S": vn_entropy(rho),
        "S1": vn_entropy(rho1),
        "S2": vn_entropy(out2 / np.trace(out2).real),
        "Se1": entropy_exchange(rho, op1),
        "Se2": entropy_exchange(rho1, op2),
        "Se12": entropy_exchange(rho, total),
        "C": correlation_entropy(rho, op1, op2),
    }


# (name, lhs keys with signs, rhs keys) for the two-stage subadditivity table
_SUBADD_ROWS = [
    ("sub R:Q", ["Se12"], ["S", "S2"]),
    ("sub R:E1", ["S1"], ["S", "Se1"]),
    ("sub R:E2", ["C"], ["S", "Se2"]),
    ("sub Q:E1", ["C"], ["S2", "Se1"]),
    ("sub Q:E2", ["S1"], ["S2", "Se2"]),
    ("sub E1:E2", ["Se12"], ["Se1", "Se2"]),
    ("sub RQ:E1", ["Se2"], ["Se12", "Se1"]),
    ("sub RQ:E2", ["Se1"], ["Se12", "Se2"]),
    ("sub RE1:Q", ["Se2"], ["S1", "S2"]),
    ("sub RE1:E2", ["S2"], ["S1", "Se2"]),
    ("sub RE2:Q", ["Se1"], ["C", "S2"]),
    ("sub RE2:E1", ["S2"], ["C", "Se1"]),
    ("sub QE1:R", ["Se2"], ["C", "S"]),
    ("sub QE1:E2", ["S"], ["C", "Se2"]),
    ("sub QE2:R", ["Se1"], ["S1", "S"]),
    ("sub QE2:E1", ["S"], ["S1", "Se1"]),
    ("sub E1E2:R", ["S2"], ["Se12", "S"]),
    ("sub E1E2:Q", ["S"], ["Se12", "S2"]),
]

_SSA_ROWS = [
    ("ssa R:Q:E1", ["Se2", "S2"], ["Se12", "C"]),
    ("ssa Q:E1:R", ["Se2", "Se1"], ["C", "S1"]),
    ("ssa E1:R:Q", ["Se2", "S"], ["S1", "Se12"]),
    ("ssa R:Q:E2", ["Se1", "S2"], ["Se12", "S1"]),
    ("ssa Q:E2:R", ["Se1", "Se2"], ["S1", "C"]),
    ("ssa E2:R:Q", ["Se1", "S"], ["C", "Se12"]),
    ("ssa R:E1:E2", ["S2", "Se1"], ["S1", "Se12"]),
    ("ssa E1:E2:R", ["S2", "Se2"], ["Se12", "C"]),
    ("ssa E2:R:E1", ["S2", "S"], ["C", "S1"]),
    ("ssa Q:E1:E2", ["S", "Se1"], ["C", "Se12"]),
    ("ssa E1:E2:Q", ["S", "Se2"], ["Se12", "S1"]),
    ("ssa E2:Q:E1", ["S", "S2"], ["S1", "C"]),
]


def two_stage_reports(rho, op1, op2):
    """Subadditivity and strong-subadditivity rows for a two-stage process."""
    q = two_stage_entropies(rho, op1, op2)
    reports = []
    for name, lhs, rhs in _SUBADD_ROWS + _SSA_ROWS:
        reports.append(
            MetricReport(name, sum(q[k] for k in lhs), sum(q[k] for k in rhs))
        )
    return reports


def entropy_inequality_suite(seed=0, samples=200, dim=2):
    """Randomized inequality checks; every report's slack should be >= -1e-9.

    Families covered: strong subadditivity on three-qubit states, joint
    entropy theorem, measurement increases entropy, the ensemble bound,
    subadditivity/triangle, concavity of conditional entropy, strengthened
    convexity of the relative entropy, conditional-entropy subadditivity,
    data processing (both stages), chi monotonicity, and the full two-stage
    tables.
    """
    rng = rng_from(seed)
    reports = []
    for trial in range(samples):
        # strong subadditivity on a random tripartite state
        rho3 = random_density(8, rng)
        dims = (2, 2, 2)
        s_abc = vn_entropy(rho3)
        s_ab = vn_entropy(partial_trace(rho3, dims, [0, 1]))
        s_bc = vn_entropy(partial_trace(rho3, dims, [1, 2]))
        s_b = vn_entropy(partial_trace(rho3, dims, [1]))
        reports.append(MetricReport("strong_subadditivity", s_abc + s_b, s_ab + s_bc))

        # subadditivity and triangle on the first two factors
        rho_ab = partial_trace(rho3, dims, [0, 1])
        s_a = vn_entropy(partial_trace(rho_ab, (2, 2), 0))
        s_b2 = vn_entropy(partial_trace(rho_ab, (2, 2), 1))
        s_ab2 = vn_entropy(rho_ab)
        reports.append(MetricReport("subadditivity", s_ab2, s_a + s_b2))
        reports.append(MetricReport("triangle", abs(s_a - s_b2), s_ab2))

        # conditional-entropy subadditivity S(A1A2|B1B2) <= S(A1|B1)+S(A2|B2)
        rho4 = random_density(16, rng)
        d4 = (2, 2, 2, 2)  # A1 B1 A2 B2
        lhs = vn_entropy(rho4) - vn_entropy(partial_trace(rho4, d4, [1, 3]))
        rho_a1b1 = partial_trace(rho4, d4, [0, 1])
        rho_a2b2 = partial_trace(rho4, d4, [2, 3])
        rhs = (
            vn_entropy(rho_a1b1)
            - vn_entropy(partial_trace(rho_a1b1, (2, 2), 1))
            + vn_entropy(rho_a2b2)
            - vn_entropy(partial_trace(rho_a2b2, (2, 2), 1))
        )
        reports.append(MetricReport("conditional_subadditivity", lhs, rhs))

        # measurement increases entropy
        rho = random_density(dim, rng)
        p0 = np.zeros((dim, dim), dtype=complex)
        p0[0, 0] = 1.0
        p1 = np.eye(dim) - p0
        measured = p0 @ rho @ p0 + p1 @ rho @ p1
        reports.append(MetricReport("measurement_increases_entropy", vn_entropy(rho), vn_entropy(measured)))

        # ensemble bound S(sum p rho) <= H(p) + sum p S(rho)
        w = rng.dirichlet(np.ones(3))
        members = [random_density(dim, rng) for _ in range(3)]
        ens = Ensemble(w, members)
        reports.append(
            MetricReport(
                "ensemble_bound",
                vn_entropy(ens.average()),
                shannon(w) + float(sum(p * vn_entropy(s) for p, s in zip(w, members))),
            )
        )

        # joint entropy theorem (equality, reported as two-sided bound)
        block = np.zeros((dim * 3, dim * 3), dtype=complex)
        for i, (p, s) in enumerate(zip(w, members)):
            block[i * dim : (i + 1) * dim, i * dim : (i + 1) * dim] = p * s
        joint = vn_entropy(block)
        expect = shannon(w) + float(sum(p * vn_entropy(s) for p, s in zip(w, members)))
        reports.append(MetricReport("joint_entropy_theorem", abs(joint - expect), 1e-9))

        # concavity of conditional entropy
        rho_x = random_density(4, rng)
        rho_y = random_density(4, rng)
        lam = rng.uniform()
        mix = lam * rho_x + (1 - lam) * rho_y

        def cond(r):
            return vn_entropy(r) - vn_entropy(partial_trace(r, (2, 2), 1))

        reports.append(
            MetricReport("conditional_concavity", lam * cond(rho_x) + (1 - lam) * cond(rho_y), cond(mix))
        )

        # relative entropy: joint convexity and the strengthened form
        sig_x = random_density(dim, rng)
        sig_y = random_density(dim, rng)
        p_pair = np.array([lam, 1 - lam])
        q_pair = rng.dirichlet(np.ones(2))
        mix_r = lam * sig_x + (1 - lam) * sig_y
        rho_m1 = random_density(dim, rng)
        rho_m2 = random_density(dim, rng)
        lhs = relative_entropy(lam * rho_m1 + (1 - lam) * rho_m2, mix_r)
        rhs = lam * relative_entropy(rho_m1, sig_x) + (1 - lam) * relative_entropy(rho_m2, sig_y)
        reports.append(MetricReport("relative_entropy_joint_convexity", lhs, rhs))

        strengthened_lhs = relative_entropy(
            p_pair[0] * rho_m1 + p_pair[1] * rho_m2,
            q_pair[0] * sig_x + q_pair[1] * sig_y,
        )
        strengthened_rhs = (
            p_pair[0] * relative_entropy(rho_m1, sig_x)
            + p_pair[1] * relative_entropy(rho_m2, sig_y)
            + float(np.sum(p_pair * np.log2(p_pair / q_pair)))
        )
        reports.append(
            MetricReport("relative_entropy_strengthened_convexity", strengthened_lhs, strengthened_rhs)
        )

        # data processing, both stages, and the two-stage tables
        op1 = random_channel(dim, rng)
        op2 = random_channel(dim, rng)
        i1 = coherent_information(rho, op1)
        i12 = coherent_information(rho, compose(op2, op1))
        reports.append(MetricReport("data_processing_stage1", i1, vn_entropy(rho)))
        reports.append(MetricReport("data_processing_stage2", i12, i1))
        reports.extend(two_stage_reports(rho, op1, op2))

        # chi never increases under a complete operation on every member
        chan = random_channel(dim, rng)
        mapped = Ensemble(w, [apply(chan, s)[0] for s in members])
        reports.append(MetricReport("chi_monotonicity", holevo_chi(mapped), holevo_chi(ens)))
    return reports
