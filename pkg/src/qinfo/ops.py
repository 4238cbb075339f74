"""Quantum operations in operator-sum form.

A QuantumOperation is a finite list of Kraus operators with input/output
subsystem dimensions.  By convention tr(E(rho)) is the probability of the
branch occurring, so incomplete operations (sum E_i+ E_i < I) are allowed
and carry their outcome probability in the trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    DENSITY_TOL,
    EIG_TOL,
    dag,
    dims_dim,
    eigh_clipped,
    ket,
    partial_trace,
    sqrt_psd,
    tensor,
)

SIGMA_I = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_I, SIGMA_X, SIGMA_Y, SIGMA_Z)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@dataclass(frozen=True)
class QuantumOperation:
    kraus: tuple
    in_dims: tuple
    out_dims: tuple

    @property
    def din(self):
        return dims_dim(self.in_dims)

    @property
    def dout(self):
        return dims_dim(self.out_dims)

    def __call__(self, rho):
        return apply(self, rho)[0]


def quantum_op(kraus, in_dims=None, out_dims=None):
    """Build a QuantumOperation, inferring dims from the Kraus shapes."""
    mats = tuple(np.asarray(k, dtype=complex) for k in kraus)
    if not mats:
        raise ValueError("need at least one Kraus operator")
    rows, cols = mats[0].shape
    for m in mats:
        if m.shape != (rows, cols):
            raise ValueError("Kraus operators must share dimensions")
    in_dims = (cols,) if in_dims is None else tuple(int(d) for d in in_dims)
    out_dims = (rows,) if out_dims is None else tuple(int(d) for d in out_dims)
    if dims_dim(in_dims) != cols or dims_dim(out_dims) != rows:
        raise ValueError("declared dims do not match Kraus shapes")
    return QuantumOperation(mats, in_dims, out_dims)


def unitary_op(u, dims=None):
    return quantum_op([u], dims, dims)


def apply(op, rho):
    """Return (sum_i E_i rho E_i^dag, trace); the trace is the branch probability."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (op.din, op.din):
        raise ValueError("state shape does not match operation input dims")
    out = np.zeros((op.dout, op.dout), dtype=complex)
    for k in op.kraus:
        out += k @ rho @ dag(k)
    return out, float(np.trace(out).real)


def completeness_defect(op):
    """I - sum_i E_i^dag E_i (Hermitian; zero for complete operations)."""
    s = sum(dag(k) @ k for k in op.kraus)
    return np.eye(op.din) - s


def choi(op):
    """Choi state (I (x) E)(|phi><phi|), |phi> the normalized maximally
    entangled state on two copies of the input space.

    PSD iff the map is completely positive; for complete operations the
    partial trace over the output factor is I/d_in.
    """
    d = op.din
    phi = sum(np.kron(ket(i, d), ket(i, d)) for i in range(d)) / np.sqrt(d)
    out = np.zeros((d * op.dout, d * op.dout), dtype=complex)
    for k in op.kraus:
        v = np.kron(np.eye(d), k) @ phi
        out += np.outer(v, v.conj())
    return out


def choi_of_map(fn, d):
    """Choi operator of an arbitrary linear map given in map form."""
    phi = sum(np.kron(ket(i, d), ket(i, d)) for i in range(d)) / np.sqrt(d)
    rho = np.outer(phi, phi.conj())
    blocks = [
        [fn(rho[i * d : (i + 1) * d, j * d : (j + 1) * d]) for j in range(d)]
        for i in range(d)
    ]
    return np.block(blocks)


def maps_equal(a, b, tol=1e-9):
    """Equality of two operations as linear maps, via Choi comparison."""
    if a.in_dims != b.in_dims or a.dout != b.dout:
        return False
    return np.linalg.norm(choi(a) - choi(b)) <= tol


@dataclass
class Classification:
    kind: str  # 'complete' | 'physical_incomplete' | 'nonphysical'
    defect_extremes: tuple  # (min, max) eigenvalues of I - sum E+E
    choi_min_eigenvalue: float


def classify(op, tol=DENSITY_TOL):
    """Compare sum E_i^dag E_i against I and report the Choi CP certificate."""
    defect = completeness_defect(op)
    dvals = np.linalg.eigvalsh((defect + dag(defect)) / 2)
    cvals = np.linalg.eigvalsh(choi(op))
    if dvals.min() < -tol:
        kind = "nonphysical"
    elif dvals.max() > tol:
        kind = "physical_incomplete"
    else:
        kind = "complete"
    return Classification(kind, (float(dvals.min()), float(dvals.max())), float(cvals.min()))


def compose(second, first):
    """Operation applying `first` then `second`; Kraus set {F_j E_i}."""
    if first.out_dims != second.in_dims and first.dout != second.din:
        raise ValueError("operations are not composable")
    kraus = [f @ e for f in second.kraus for e in first.kraus]
    return quantum_op(kraus, first.in_dims, second.out_dims)


def tensor_ops(a, b):
    """Tensor product operation with Kraus set {E_i (x) F_j}."""
    kraus = [np.kron(e, f) for e in a.kraus for f in b.kraus]
    return quantum_op(kraus, a.in_dims + b.in_dims, a.out_dims + b.out_dims)


def _padded_vectors(op, n):
    vecs = [k.reshape(-1) for k in op.kraus]
    dim = vecs[0].size
    while len(vecs) < n:
        vecs.append(np.zeros(dim, dtype=complex))
    return np.array(vecs)


def kraus_equivalent(a, b, tol=1e-9):
    """Unitary u with E_j = sum_k u_jk F_k when a and b are the same map.

    Both Kraus lists are zero-padded to a common length first.  Returns None
    when the operations differ as maps (Choi mismatch).
    """
    if not maps_equal(a, b, tol):
        return None
    n = max(len(a.kraus), len(b.kraus))
    e = _padded_vectors(a, n)
    f = _padded_vectors(b, n)
    sigma = e.T @ e.conj()  # unnormalized Choi, sum_j |e_j><e_j|
    vals, vecs = eigh_clipped(sigma)
    support = vals > max(tol * vals.max(), EIG_TOL)
    s_vecs = vecs[:, support]
    s_vals = vals[support]
    m = (e @ s_vecs.conj()) / np.sqrt(s_vals)  # n x r isometry, e_j = sum_a M_ja shat_a
    nn = (f @ s_vecs.conj()) / np.sqrt(s_vals)
    u = m @ dag(nn)
    if s_vals.size < n:
        # complete on the orthocomplements of the column spaces
        u = u + _orthonormal_completion(m) @ dag(_orthonormal_completion(nn))
    return u


def _orthonormal_completion(iso):
    """n x (n-r) matrix whose columns complete an n x r isometry."""
    n, r = iso.shape
    proj = np.eye(n, dtype=complex) - iso @ dag(iso)
    vals, vecs = np.linalg.eigh(proj)
    return vecs[:, vals > 0.5]


@dataclass
class EnvironmentModel:
    unitary: np.ndarray          # on system (x) environment
    env_dim: int
    env_initial: int = 0         # environment starts in |env_initial>
    projector: np.ndarray | None = None  # on the environment, for incomplete ops


def environment_model(op):
    """Unitary model U|psi>|0> = sum_i E_i|psi>|i> for a physical operation.

    Incomplete operations are padded with an extra branch restoring
    completeness; the returned projector selects the non-padding branches.
    """
    if op.din != op.dout:
        raise ValueError("environment models assume equal input/output spaces")
    cls = classify(op)
    if cls.kind == "nonphysical":
        raise ValueError("operation is not physical")
    kraus = list(op.kraus)
    padded = False
    if cls.kind == "physical_incomplete":
        defect = completeness_defect(op)
        kraus.append(sqrt_psd((defect + dag(defect)) / 2))
        padded = True
    d = op.din
    k = len(kraus)
    iso = np.zeros((d * k, d), dtype=complex)
    for i, e in enumerate(kraus):
        for j in range(d):
            col = np.kron(e[:, j], ket(i, k))
            iso[:, j] += col
    u = _complete_to_unitary(iso, [j * k for j in range(d)])
    proj = None
    if padded:
        proj = np.eye(k, dtype=complex)
        proj[k - 1, k - 1] = 0.0
    return EnvironmentModel(u, k, 0, proj)


def _complete_to_unitary(iso, col_positions):
    """Unitary whose columns at col_positions equal the isometry columns."""
    n = iso.shape[0]
    u = np.zeros((n, n), dtype=complex)
    used = set(col_positions)
    for pos, col in zip(col_positions, iso.T):
        u[:, pos] = col
    rest = _orthonormal_completion(iso)
    free = [c for c in range(n) if c not in used]
    for c, col in zip(free, rest.T):
        u[:, c] = col
    return u


def kraus_from_environment(model, in_dims=None):
    """Recover the Kraus set E_k = <k| P U |psi>|0> from a unitary model."""
    k = model.env_dim
    n = model.unitary.shape[0]
    d = n // k
    u = model.unitary
    if model.projector is not None:
        u = np.kron(np.eye(d), model.projector) @ u
    kraus = []
    for env_out in range(k):
        e = np.zeros((d, d), dtype=complex)
        for s_out in range(d):
            for s_in in range(d):
                e[s_out, s_in] = u[s_out * k + env_out, s_in * k + model.env_initial]
        if np.linalg.norm(e) > 1e-12:
            kraus.append(e)
    dims = in_dims if in_dims is not None else (d,)
    return quantum_op(kraus, dims, dims)


def w_matrix(op, rho):
    """Environment state W_ij = tr(E_i rho E_j^dag) / tr(E(rho))."""
    _, prob = apply(op, rho)
    if prob <= EIG_TOL:
        raise ValueError("operation has zero probability on this input")
    n = len(op.kraus)
    w = np.empty((n, n), dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    for i in range(n):
        for j in range(i, n):
            w[i, j] = np.trace(op.kraus[i] @ rho @ dag(op.kraus[j]))
            w[j, i] = w[i, j].conjugate()
    return w / prob


def canonical_kraus(op, rho):
    """Representation of `op` whose W matrix at rho is diagonal.

    Branches are ordered by descending diagonal W entry.
    """
    w = w_matrix(op, rho)
    vals, vecs = eigh_clipped(w)  # descending; columns are eigenvectors
    v = dag(vecs)  # F_j = sum_i v_ji E_i diagonalizes W
    kraus = [sum(v[j, i] * op.kraus[i] for i in range(len(op.kraus))) for j in range(len(op.kraus))]
    return quantum_op(kraus, op.in_dims, op.out_dims)


@dataclass
class AffineMapQubit:
    """Bloch-ball action lambda -> m @ lambda + c of a complete qubit operation."""

    m: np.ndarray
    c: np.ndarray

    def __call__(self, lam):
        return self.m @ np.asarray(lam, dtype=float) + self.c


def bloch_vector(rho):
    return np.array([np.trace(rho @ s).real for s in PAULIS[1:]])


def bloch_state(lam):
    lam = np.asarray(lam, dtype=float)
    return (SIGMA_I + lam[0] * SIGMA_X + lam[1] * SIGMA_Y + lam[2] * SIGMA_Z) / 2


_EPSILON = np.zeros((3, 3, 3))
for _i, _j, _k in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
    _EPSILON[_i, _j, _k] = 1.0
    _EPSILON[_j, _i, _k] = -1.0


def qubit_affine(op):
    """Affine Bloch map of a complete qubit operation from its Kraus
    coefficients E_i = alpha_i I + sum_k a_ik sigma_k."""
    if op.din != 2 or op.dout != 2:
        raise ValueError("affine map is defined for qubit operations")
    if classify(op).kind != "complete":
        raise ValueError("affine map requires a complete operation")
    alphas = np.array([np.trace(e) / 2 for e in op.kraus])
    a = np.array([[np.trace(s @ e) / 2 for s in PAULIS[1:]] for e in op.kraus])
    m = np.zeros((3, 3), dtype=complex)
    for j in range(3):
        for k in range(3):
            acc = 0.0
            for l in range(len(op.kraus)):
                acc += a[l, j] * a[l, k].conjugate() + a[l, j].conjugate() * a[l, k]
                if j == k:
                    acc += abs(alphas[l]) ** 2 - np.sum(a[l] * a[l].conj())
                for p in range(3):
                    acc += 1j * _EPSILON[j, k, p] * (
                        alphas[l] * a[l, p].conjugate() - alphas[l].conjugate() * a[l, p]
                    )
            m[j, k] = acc
    c = np.zeros(3, dtype=complex)
    for k in range(3):
        acc = 0.0
        for l in range(len(op.kraus)):
            for j in range(3):
                for p in range(3):
                    acc += 2j * _EPSILON[j, p, k] * a[l, j] * a[l, p].conjugate()
        c[k] = acc
    return AffineMapQubit(m.real, c.real)


# ---------------------------------------------------------------------------
# channel catalog
# ---------------------------------------------------------------------------

def _check_prob(value, name):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1]")


def standard_channel(name, **params):
    """Named single-qubit channels.

    identity | bit_flip(p) | phase_flip(p) | depolarizing(p) |
    amplitude_damping(gamma) | decohere | pauli_randomizer |
    erasure(epsilon) | phase_erasure(delta) | erasure_phase_erasure(epsilon, delta)

    The erasure family enlarges the output by an orthogonal flag dimension,
    appended as the last tensor factor of the output shape.
    """
    if name == "identity":
        return quantum_op([SIGMA_I], (2,), (2,))
    if name == "bit_flip":
        p = params["p"]
        _check_prob(p, "p")
        return quantum_op([np.sqrt(1 - p) * SIGMA_I, np.sqrt(p) * SIGMA_X], (2,), (2,))
    if name == "phase_flip":
        p = params["p"]
        _check_prob(p, "p")
        return quantum_op([np.sqrt(1 - p) * SIGMA_I, np.sqrt(p) * SIGMA_Z], (2,), (2,))
    if name == "depolarizing":
        # rho -> (1-p) rho + p I/2
        p = params["p"]
        _check_prob(p, "p")
        w = np.sqrt(p / 4)
        return quantum_op(
            [np.sqrt(1 - 3 * p / 4) * SIGMA_I, w * SIGMA_X, w * SIGMA_Y, w * SIGMA_Z],
            (2,),
            (2,),
        )
    if name == "amplitude_damping":
        g = params["gamma"]
        _check_prob(g, "gamma")
        e0 = np.diag([1.0, np.sqrt(1 - g)]).astype(complex)
        e1 = np.zeros((2, 2), dtype=complex)
        e1[0, 1] = np.sqrt(g)
        return quantum_op([e0, e1], (2,), (2,))
    if name == "decohere":
        p0 = np.diag([1.0, 0.0]).astype(complex)
        p1 = np.diag([0.0, 1.0]).astype(complex)
        return quantum_op([p0, p1], (2,), (2,))
    if name == "pauli_randomizer":
        return quantum_op([s / 2 for s in PAULIS], (2,), (2,))
    if name == "erasure":
        eps = params["epsilon"]
        _check_prob(eps, "epsilon")
        keep = np.kron(np.sqrt(1 - eps) * SIGMA_I, ket(0, 2).reshape(2, 1))
        lose = [
            np.sqrt(eps) * np.kron(ket(0, 2).reshape(2, 1), ket(1, 2).reshape(2, 1)) @ ket(i, 2).reshape(1, 2)
            for i in range(2)
        ]
        return quantum_op([keep] + lose, (2,), (2, 2))
    if name == "phase_erasure":
        delta = params["delta"]
        _check_prob(delta, "delta")
        keep = np.kron(np.sqrt(1 - delta) * SIGMA_I, ket(0, 2).reshape(2, 1))
        deph = [
            np.sqrt(delta) * np.kron(np.outer(ket(i, 2), ket(i, 2).conj()), ket(1, 2).reshape(2, 1))
            for i in range(2)
        ]
        return quantum_op([keep] + deph, (2,), (2, 2))
    if name == "erasure_phase_erasure":
        eps, delta = params["epsilon"], params["delta"]
        _check_prob(eps, "epsilon")
        _check_prob(delta, "delta")
        if eps + delta > 1:
            raise ValueError("epsilon + delta must not exceed 1")
        keep = np.kron(np.sqrt(1 - eps - delta) * SIGMA_I, ket(0, 3).reshape(3, 1))
        lose = [
            np.sqrt(eps) * np.kron(ket(0, 2).reshape(2, 1), ket(1, 3).reshape(3, 1)) @ ket(i, 2).reshape(1, 2)
            for i in range(2)
        ]
        deph = [
            np.sqrt(delta) * np.kron(np.outer(ket(i, 2), ket(i, 2).conj()), ket(2, 3).reshape(3, 1))
            for i in range(2)
        ]
        return quantum_op([keep] + lose + deph, (2,), (2, 3))
    raise ValueError(f"unknown channel '{name}'")


# ---------------------------------------------------------------------------
# POVMs
# ---------------------------------------------------------------------------

@dataclass
class POVM:
    elements: list

    def validate(self, tol=DENSITY_TOL):
        d = self.elements[0].shape[0]
        total = np.zeros((d, d), dtype=complex)
        for m in self.elements:
            if np.linalg.norm(m - dag(m)) > tol:
                raise ValueError("POVM element is not Hermitian")
            if np.linalg.eigvalsh((m + dag(m)) / 2).min() < -tol:
                raise ValueError("POVM element is not positive")
            total += m
        if np.linalg.norm(total - np.eye(d)) > tol:
            raise ValueError("POVM elements do not sum to the identity")


def povm_from_branches(branch_ops):
    """POVM M_m = sum_i E_mi^dag E_mi reproducing the branch probabilities."""
    return POVM([sum(dag(k) @ k for k in op.kraus) for op in branch_ops])


def povm_outcomes(povm, rho):
    povm.validate()
    probs = np.array([np.trace(m @ rho).real for m in povm.elements])
    if probs.min() < -DENSITY_TOL or abs(probs.sum() - 1) > DENSITY_TOL:
        raise ValueError("invalid outcome distribution; check the input state")
    return np.clip(probs, 0.0, None)


def lift(op, n_qubits, position):
    """Embed a single-qubit operation at `position` in an n-qubit register."""
    kraus = []
    for e in op.kraus:
        left = np.eye(2 ** position, dtype=complex)
        right = np.eye(2 ** (n_qubits - position - 1), dtype=complex)
        kraus.append(tensor(left, e, right))
    dims = (2,) * n_qubits
    return quantum_op(kraus, dims, dims)
