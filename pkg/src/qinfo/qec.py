"""Error-correcting codes, reversal of quantum operations, and the entropy
accounting of the correction cycle.

Codes are stored as an encoding isometry plus a family of error classes;
each class carries the unitary mapping the code space to its syndrome
subspace, so the syndrome projector is (U_c V)(U_c V)^dag and the recovery
Kraus operator is U_c^dag P_c.  Cycle fidelities contract everything
through the 2-column isometries, so even the nine-qubit code runs in
microseconds per cycle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import dag, eigh_clipped, ket, partial_trace, projector, purify, tensor
from .entropy import entropy_exchange, shannon, vn_entropy
from .metrics import dynamic_fidelity
from .ops import (
    HADAMARD,
    SIGMA_X,
    SIGMA_Z,
    QuantumOperation,
    apply,
    canonical_kraus,
    lift,
    quantum_op,
    w_matrix,
)


def _lift_mat(m, n, pos):
    return tensor(np.eye(2 ** pos, dtype=complex), m, np.eye(2 ** (n - pos - 1), dtype=complex))


@dataclass
class Code:
    name: str
    n_physical: int
    encoder: np.ndarray            # 2^n x 2 isometry onto the codewords
    error_unitaries: list          # class representatives U_c, identity first
    recovery_names: list

    @property
    def code_projector(self):
        return self.encoder @ dag(self.encoder)

    def syndrome_isometries(self):
        return [u @ self.encoder for u in self.error_unitaries]

    def syndrome_projectors(self):
        """Dense projectors, one per error class, plus the complement."""
        projs = [w @ dag(w) for w in self.syndrome_isometries()]
        total = sum(projs)
        projs.append(np.eye(total.shape[0]) - total)
        return projs

    def recovery_unitaries(self):
        return [dag(u) for u in self.error_unitaries] + [
            np.eye(2 ** self.n_physical, dtype=complex)
        ]


def make_code(name):
    """bit_flip, phase_flip or shor9."""
    if name == "bit_flip":
        enc = np.zeros((8, 2), dtype=complex)
        enc[0, 0] = 1.0  # |000>
        enc[7, 1] = 1.0  # |111>
        errors = [np.eye(8, dtype=complex)] + [
            _lift_mat(SIGMA_X, 3, i) for i in range(3)
        ]
        names = ["identity", "x0", "x1", "x2"]
        return Code(name, 3, enc, errors, names)
    if name == "phase_flip":
        bit = make_code("bit_flip")
        h3 = tensor(HADAMARD, HADAMARD, HADAMARD)
        enc = h3 @ bit.encoder
        errors = [np.eye(8, dtype=complex)] + [
            _lift_mat(SIGMA_Z, 3, i) for i in range(3)
        ]
        names = ["identity", "z0", "z1", "z2"]
        return Code(name, 3, enc, errors, names)
    if name == "shor9":
        # concatenate: phase-flip outer layer, bit-flip per block
        plus_block = np.zeros(8, dtype=complex)
        plus_block[0] = plus_block[7] = 1 / np.sqrt(2)   # (|000>+|111>)/sqrt2
        minus_block = np.zeros(8, dtype=complex)
        minus_block[0], minus_block[7] = 1 / np.sqrt(2), -1 / np.sqrt(2)
        zero_l = tensor(plus_block, plus_block, plus_block)
        one_l = tensor(minus_block, minus_block, minus_block)
        enc = np.stack([zero_l, one_l], axis=1)
        errors = [np.eye(512, dtype=complex)]
        names = ["identity"]
        for i in range(9):
            errors.append(_lift_mat(SIGMA_X, 9, i))
            names.append(f"x{i}")
        for block in range(3):
            errors.append(_lift_mat(SIGMA_Z, 9, 3 * block))
            names.append(f"z_block{block}")
        for i in range(9):
            errors.append(_lift_mat(SIGMA_Z @ SIGMA_X, 9, i))
            names.append(f"y{i}")
        return Code(name, 9, enc, errors, names)
    raise ValueError(f"unknown code '{name}'")


def cycle_operation(code, noise):
    """The full encode -> noise -> syndrome+recover -> decode channel on
    one qubit, contracted through the code isometries.

    `noise` may be a QuantumOperation on the physical register or a pair
    (single-qubit operation, position).
    """
    if isinstance(noise, tuple):
        op, pos = noise
        noise = lift(op, code.n_physical, pos)
    v = code.encoder
    isos = code.syndrome_isometries()
    noisy = [k @ v for k in noise.kraus]  # 2^n x 2 blocks
    kraus = []
    for w in isos:
        for nv in noisy:
            kraus.append(dag(w) @ nv)  # 2 x 2
    # complement-syndrome branch: identity recovery then decode
    total = sum(w @ dag(w) for w in isos)
    for nv in noisy:
        kraus.append(dag(v) @ nv - dag(v) @ total @ nv)
    kraus = [k for k in kraus if np.linalg.norm(k) > 1e-14]
    return quantum_op(kraus, (2,), (2,))


def correct_cycle(code, noise, rho_in):
    """Run one correction cycle; returns (output state, dynamic fidelity)."""
    cycle = cycle_operation(code, noise)
    out, prob = apply(cycle, rho_in)
    return out / prob, dynamic_fidelity(rho_in, cycle)


# ---------------------------------------------------------------------------
# information-theoretic reversibility
# ---------------------------------------------------------------------------

@dataclass
class ReversibilityVerdict:
    reversible: bool
    entropy_residual: float      # |S(rho) - (S(rho') - S_e)|
    constancy_residual: float    # spread of branch probabilities over the support

    def __bool__(self):
        return self.reversible


def reversibility_check(op, rho, tol=1e-8, n_probe=8, seed=0):
    """Test S(rho) = S(rho') - S(rho, E); incomplete operations additionally
    need tr E(|psi><psi|) constant over the support of rho.

    The probe set is the eigenvectors of rho plus random support vectors.
    """
    rho = np.asarray(rho, dtype=complex)
    out, prob = apply(op, rho)
    s_in = vn_entropy(rho)
    s_out = vn_entropy(out / prob)
    s_e = entropy_exchange(rho, op)
    entropy_residual = abs(s_in - (s_out - s_e))

    constancy_residual = 0.0
    defect = np.eye(op.din) - sum(dag(k) @ k for k in op.kraus)
    if np.linalg.norm(defect) > tol:
        vals, vecs = eigh_clipped(rho)
        support = vecs[:, vals > 1e-10]
        probes = [support[:, i] for i in range(support.shape[1])]
        rng = np.random.default_rng(seed)
        r = support.shape[1]
        for _ in range(n_probe):
            coef = rng.standard_normal(r) + 1j * rng.standard_normal(r)
            vec = support @ coef
            probes.append(vec / np.linalg.norm(vec))
        traces = [apply(op, projector(p))[1] for p in probes]
        constancy_residual = max(traces) - min(traces)
    return ReversibilityVerdict(
        entropy_residual < tol and constancy_residual < tol,
        float(entropy_residual),
        float(constancy_residual),
    )


def construct_reversal(op, rho, tol=1e-8):
    """Reversal operation with F(rho, R . E) = 1, built from the canonical
    representation: branch projectors P_j onto the images F_j supp(rho),
    with unitaries sending F_j |i> / sqrt(q_j) back to |i>.

    Raises if the operation is not reversible on the input.
    """
    verdict = reversibility_check(op, rho, tol)
    if not verdict:
        raise ValueError(
            "operation is not reversible on this input "
            f"(entropy residual {verdict.entropy_residual:.3g}, "
            f"constancy residual {verdict.constancy_residual:.3g})"
        )
    canon = canonical_kraus(op, rho)
    w = w_matrix(canon, rho)
    q = np.diag(w).real
    vals, vecs = eigh_clipped(np.asarray(rho, dtype=complex))
    support = vecs[:, vals > 1e-10]
    r = support.shape[1]
    d = canon.dout
    kraus = []
    total_proj = np.zeros((d, d), dtype=complex)
    for j, f in enumerate(canon.kraus):
        if q[j] <= 1e-12:
            continue
        cols = (f @ support) / np.sqrt(q[j])  # the orthonormal |i,j>
        gram = dag(cols) @ cols
        if np.linalg.norm(gram - np.eye(r)) > 1e-6:
            raise ValueError("branch images are not orthonormal; not reversible")
        p_j = cols @ dag(cols)
        u_j = support @ dag(cols)  # partial isometry |i><i,j|
        kraus.append(u_j @ p_j)
        total_proj += p_j
    pad = np.eye(d) - total_proj
    if np.linalg.norm(pad) > 1e-10:
        if canon.din == canon.dout:
            kraus.append(pad)  # benign identity branch off the reachable space
        else:
            vals_p, vecs_p = eigh_clipped(pad)
            for col in range(vals_p.size):
                if vals_p[col] > 0.5:
                    kraus.append(np.outer(ket(0, canon.din), vecs_p[:, col].conj()))
    return quantum_op(kraus, canon.out_dims, canon.in_dims)


# ---------------------------------------------------------------------------
# demon accounting of a correction step
# ---------------------------------------------------------------------------

@dataclass
class DemonLedger:
    record_probabilities: np.ndarray  # p_m of the measurement record
    shannon_record: float             # H(p_m), the stored record cost in bits
    entropy_exchange: float           # S(rho^n, R)
    delta_s_correction: float         # S(rho^c) - S(rho^n)
    total: float                      # H(p_m) + delta S^c


def demon_accounting(reversal, rho_noisy, decomposition="as_given"):
    """Entropy ledger for running `reversal` on the noisy state.

    decomposition 'canonical' rebrands the reversal into the representation
    whose W matrix at rho_noisy is diagonal, which minimizes the record
    cost: H(p_m) then equals the entropy exchange.
    """
    if decomposition == "canonical":
        reversal = canonical_kraus(reversal, rho_noisy)
    elif decomposition != "as_given":
        raise ValueError("decomposition must be 'as_given' or 'canonical'")
    rho_noisy = np.asarray(rho_noisy, dtype=complex)
    out, prob = apply(reversal, rho_noisy)
    corrected = out / prob
    p = np.array([np.trace(k @ rho_noisy @ dag(k)).real for k in reversal.kraus])
    p = np.clip(p, 0.0, None)
    p = p / p.sum()
    h = shannon(p)
    s_e = entropy_exchange(rho_noisy, reversal)
    delta = vn_entropy(corrected) - vn_entropy(rho_noisy)
    return DemonLedger(p, h, s_e, delta, h + delta)
