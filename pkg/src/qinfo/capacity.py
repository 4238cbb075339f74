"""Channel-capacity bounds from coherent-information maximization.

The block quantity max_rho I(rho, N^(x)n) is estimated by random-restart
gradient-free search over input states parametrized as the reduced half of
a pure state; results are lower bounds on the block maximum (global
optimality is not claimed).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .core import dag, ket, partial_trace, projector, split_dims
from .entropy import coherent_information, vn_entropy
from .metrics import dynamic_fidelity
from .ops import QuantumOperation, apply, compose, quantum_op, tensor_ops
from .report import MetricReport
from .sampling import rng_from
from .core import schmidt_operator


@dataclass
class CapacityEstimate:
    n: int
    value: float                # bits per channel use (lower bound on C_n)
    argmax_state: np.ndarray
    restart_values: list = field(default_factory=list)


def _state_from_params(params, d):
    vec = params[:d * d] + 1j * params[d * d :]
    vec = vec / np.linalg.norm(vec)
    return partial_trace(projector(vec), (d, d), 0)


def _maximize(objective, d, restarts, seed, tol, extra_starts=()):
    rng = rng_from(seed)
    best_val, best_state, values = -np.inf, None, []

    def neg(params):
        return -objective(_state_from_params(params, d))

    starts = [rng.standard_normal(2 * d * d) for _ in range(restarts)]
    starts += [np.asarray(s, dtype=float) for s in extra_starts]
    for x0 in starts:
        res = minimize(neg, x0, method="Powell", options={"xtol": tol, "ftol": tol})
        values.append(-res.fun)
        if -res.fun > best_val:
            best_val, best_state = -res.fun, _state_from_params(res.x, d)
    return best_val, best_state, values


def _params_from_state(rho, d):
    """A parameter vector whose reduced state reproduces rho (warm start)."""
    from .core import purify

    psi, _ = purify(rho)
    return np.concatenate([psi.real, psi.imag])


def coherent_info_max(channel, n=1, restarts=30, seed=0, tol=1e-8, warm_starts=()):
    """Best found value of I(rho, channel^(x)n) over input states.

    Restarts are Haar-seeded; extra warm starts (density operators on the
    block input) can be supplied to seed the search.
    """
    if n == 1:
        block = channel
    else:
        block = channel
        for _ in range(n - 1):
            block = tensor_ops(block, channel)
    d = block.din

    def objective(rho):
        return coherent_information(rho, block)

    extra = [_params_from_state(s, d) for s in warm_starts]
    val, state, values = _maximize(objective, d, restarts, seed, tol, extra)
    return CapacityEstimate(n, float(val), state, values)


@dataclass
class ObservedChannel:
    """Family of operations indexed by a classical record, summing to a
    complete operation."""

    branches: list

    def total(self):
        kraus = [k for op in self.branches for k in op.kraus]
        return quantum_op(kraus, self.branches[0].in_dims, self.branches[0].out_dims)


def observed_bound(observed, restarts=30, seed=0, tol=1e-8, warm_starts=()):
    """max_rho sum_m tr(N_m(rho)) I(rho, N_m), the observed-channel ceiling."""
    branches = observed.branches
    d = branches[0].din

    def objective(rho):
        total = 0.0
        for op in branches:
            _, p = apply(op, rho)
            if p > 1e-12:
                total += p * coherent_information(rho, op)
        return total

    extra = [_params_from_state(s, d) for s in warm_starts]
    val, state, values = _maximize(objective, d, restarts, seed, tol, extra)
    return CapacityEstimate(1, float(val), state, values)


def embed(observed):
    """All-quantum version M(rho) = sum_m N_m(rho) (x) |m><m| of an observed
    channel; the record dimension is appended as the last tensor factor."""
    branches = observed.branches
    n = len(branches)
    kraus = []
    for m, op in enumerate(branches):
        flag = ket(m, n).reshape(n, 1)
        for k in op.kraus:
            kraus.append(np.kron(k, flag))
    out_dims = branches[0].out_dims + (n,)
    return quantum_op(kraus, branches[0].in_dims, out_dims)


def branch_averaged_information(observed, rho):
    """sum_m tr(N_m(rho)) I(rho, N_m); equals I(rho, embed(observed))."""
    total = 0.0
    for op in observed.branches:
        _, p = apply(op, rho)
        if p > 1e-12:
            total += p * coherent_information(rho, op)
    return float(total)


# ---------------------------------------------------------------------------
# the two coherent-information counterexamples
# ---------------------------------------------------------------------------

def _example_one_ops():
    p12 = np.diag([1.0, 1, 0, 0]).astype(complex)
    p34 = np.diag([0.0, 0, 1, 1]).astype(complex)
    u = np.zeros((4, 4), dtype=complex)
    u[2, 0] = u[3, 1] = u[0, 2] = u[1, 3] = 1.0
    channel = quantum_op([p12, dag(u) @ p34], (4,), (4,))
    coder = quantum_op([p12 / np.sqrt(2), u @ p12 / np.sqrt(2), p34], (4,), (4,))
    return channel, coder


def pipelining_example(q):
    """Example with I(rho, N . C) > I(C(rho), N) for rho = diag(q, 1-q, 0, 0).

    Returns a dict with both coherent informations, the input entropy, and
    the two closed forms S and 2S - 1 carried by the original description
    (direct computation gives S - 1 for the second quantity).
    """
    channel, coder = _example_one_ops()
    rho = np.diag([q, 1 - q, 0.0, 0.0]).astype(complex)
    s = vn_entropy(rho)
    coded = coder(rho)
    return {
        "entropy": s,
        "pipeline": coherent_information(rho, compose(channel, coder)),
        "post_coding": coherent_information(coded, channel),
        "documented_pipeline": s,
        "documented_post_coding": 2 * s - 1,
    }


def subadditivity_example():
    """Four-qubit example violating subadditivity of coherent information.

    System 1 = qubits (A, B), system 2 = (C, D); the input is I_A/2 tensor
    Bell(B, D) tensor I_C/2 and each channel swaps its second qubit out to
    the environment.  Returns (joint, marginal_1, marginal_2) = (2, 0, 0).
    """
    zero = ket(0, 2).reshape(2, 1)
    kraus = [np.kron(np.eye(2, dtype=complex), zero @ ket(i, 2).reshape(1, 2)) for i in range(2)]
    chan = quantum_op(kraus, (2, 2), (2, 2))
    bell = (np.kron(ket(0, 2), ket(0, 2)) + np.kron(ket(1, 2), ket(1, 2))) / np.sqrt(2)
    # assemble on ordering (A, B, C, D): start from (A, C, B, D) and permute
    rho_acbd = np.kron(np.eye(4, dtype=complex) / 4, projector(bell))
    perm = _permute_qubits(rho_acbd, (2, 2, 2, 2), (0, 2, 1, 3))
    joint = tensor_ops(chan, chan)  # acts on (A, B) (x) (C, D)
    rho1 = partial_trace(perm, (4, 4), 0)
    rho2 = partial_trace(perm, (4, 4), 1)
    return (
        coherent_information(perm, joint),
        coherent_information(rho1, chan),
        coherent_information(rho2, chan),
    )


def _permute_qubits(rho, dims, order):
    n = len(dims)
    t = rho.reshape(dims + dims)
    axes = list(order) + [o + n for o in order]
    new_dims = tuple(dims[o] for o in order)
    d = int(np.prod(new_dims))
    return t.transpose(axes).reshape(d, d)


def counterexample_suite(q_values=(0.8, 0.2)):
    """Computed values for both counterexamples."""
    out = {"example_two": subadditivity_example()}
    out["example_one"] = {q: pipelining_example(q) for q in q_values}
    return out


# ---------------------------------------------------------------------------
# qubit capacity region and the operator-Schmidt communication bound
# ---------------------------------------------------------------------------

def capacity_region_qubits(n_bits, n_ab, n_ba):
    """Feasibility of sending n bits with n_ab qubits A->B and n_ba B->A:
    n_ab >= ceil(n/2) and n_ab + n_ba >= n."""
    if min(n_bits, n_ab, n_ba) < 0:
        raise ValueError("counts must be nonnegative")
    return n_ab >= -(-n_bits // 2) and n_ab + n_ba >= n_bits


def capacity_region_by_counting(n_bits, n_ab, n_ba):
    """Independent feasibility check: schedule x dense-coded qubits (one
    B->A qubit and one A->B qubit carrying two bits each) plus y direct
    qubits; feasible when some x <= n_ba, x + y <= n_ab has 2x + y >= n."""
    if min(n_bits, n_ab, n_ba) < 0:
        raise ValueError("counts must be nonnegative")
    best = 0
    for x in range(min(n_ab, n_ba) + 1):
        y = n_ab - x
        best = max(best, 2 * x + y)
    return best >= n_bits


def comm_lower_bound(u, dims, cut=1):
    """ceil(log4 Sch(U)): qubits of communication any protocol for the
    unitary U across the cut must use."""
    u = np.asarray(u, dtype=complex)
    if np.linalg.norm(u @ dag(u) - np.eye(u.shape[0])) > 1e-8:
        raise ValueError("operator is not unitary")
    sch = schmidt_operator(u, dims, cut).number()
    return int(np.ceil(np.log2(sch) / 2.0)) if sch > 1 else 0


def qft_matrix(n_qubits):
    d = 2 ** n_qubits
    omega = np.exp(2j * np.pi / d)
    j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return omega ** (j * k) / np.sqrt(d)


def entropy_fidelity_report(rho, coder, decoder):
    """S(rho) <= I(rho, C) + 2 + 4 (1 - F(rho, D . C)) log d."""
    d = np.asarray(rho).shape[0]
    f = dynamic_fidelity(rho, compose(decoder, coder))
    rhs = coherent_information(rho, coder) + 2 + 4 * (1 - f) * np.log2(d)
    return MetricReport("entropy_fidelity", vn_entropy(rho), float(rhs))


def generalized_entropy_fidelity_report(rho, coder_branches, decoders):
    """S(rho) <= sum_m tr(C_m rho) I(rho, C_m) + 2 + 4 (1 - F) log d with
    F the fidelity of sum_m D_m . C_m."""
    d = np.asarray(rho).shape[0]
    total_kraus = []
    avg = 0.0
    for op, dec in zip(coder_branches, decoders):
        _, p = apply(op, rho)
        if p > 1e-12:
            avg += p * coherent_information(rho, op)
        total_kraus.extend(compose(dec, op).kraus)
    total = quantum_op(total_kraus, coder_branches[0].in_dims, decoders[0].out_dims)
    f = dynamic_fidelity(rho, total)
    rhs = avg + 2 + 4 * (1 - f) * np.log2(d)
    return MetricReport("generalized_entropy_fidelity", vn_entropy(rho), float(rhs))
