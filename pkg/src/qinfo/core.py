"""Dense complex linear algebra over small multipartite Hilbert spaces.

Everything here works on plain numpy arrays.  Density operators and pure
states carry their subsystem structure as an explicit ``dims`` tuple, e.g.
``dims=(2, 2, 2)`` for three qubits, with subsystem 0 the slowest-varying
index (standard Kronecker-product ordering).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Eigenvalues within EIG_TOL of zero are clipped to zero; density-operator
# validation uses DENSITY_TOL.
EIG_TOL = 1e-10
DENSITY_TOL = 1e-8


def dag(a):
    """Conjugate transpose."""
    return np.asarray(a).conj().T


def tensor(*ops):
    """Kronecker product of one or more matrices (or vectors)."""
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def ket(index, dim):
    """Computational basis column vector |index> in `dim` dimensions."""
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def basis_ket(bits, dims):
    """Product basis vector |b1 b2 ...> for subsystem dimensions `dims`."""
    return tensor(*[ket(b, d) for b, d in zip(bits, dims)])


def projector(psi):
    """Rank-one projector |psi><psi| from a vector."""
    psi = np.asarray(psi, dtype=complex).ravel()
    return np.outer(psi, psi.conj())


def dims_dim(dims):
    return int(np.prod(dims))


def validate_density(rho, tol=DENSITY_TOL):
    """Check Hermiticity, positivity and unit trace; raise ValueError if bad."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density operator must be a square matrix")
    if np.linalg.norm(rho - dag(rho)) > tol:
        raise ValueError("density operator is not Hermitian within tolerance")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValueError("density operator trace differs from 1")
    if np.linalg.eigvalsh((rho + dag(rho)) / 2).min() < -tol:
        raise ValueError("density operator has a negative eigenvalue")


def validate_pure(psi, tol=DENSITY_TOL):
    psi = np.asarray(psi).ravel()
    if abs(np.linalg.norm(psi) - 1.0) > tol:
        raise ValueError("pure state is not normalized")


def eigh_clipped(rho):
    """Hermitian eigendecomposition with eigenvalues clipped at -EIG_TOL -> 0.

    Returns (eigenvalues, eigenvectors) in descending eigenvalue order.
    """
    vals, vecs = np.linalg.eigh(np.asarray(rho, dtype=complex))
    vals = np.where((vals < 0) & (vals > -EIG_TOL), 0.0, vals)
    order = np.argsort(vals)[::-1]
    return vals[order], vecs[:, order]


def partial_trace(rho, dims, keep):
    """Reduced state of the subsystems in `keep`.

    Parameters
    ----------
    rho : ndarray
        Density operator (or any square matrix) on the full space.
    dims : sequence of int
        Subsystem dimensions.
    keep : int or sequence of int
        Indices of the subsystems to keep, in their original order.

    Returns
    -------
    ndarray of shape (prod(kept dims), prod(kept dims)).
    """
    dims = tuple(int(d) for d in dims)
    if isinstance(keep, (int, np.integer)):
        keep = [int(keep)]
    keep = sorted(int(k) for k in keep)
    n = len(dims)
    for k in keep:
        if not 0 <= k < n:
            raise ValueError(f"subsystem index {k} out of range for {n} subsystems")
    rho = np.asarray(rho, dtype=complex)
    d = dims_dim(dims)
    if rho.shape != (d, d):
        raise ValueError(f"matrix shape {rho.shape} does not match dims {dims}")
    tensor_form = rho.reshape(dims + dims)
    cur = list(dims)
    for idx in sorted(set(range(n)) - set(keep), reverse=True):
        tensor_form = np.trace(tensor_form, axis1=idx, axis2=idx + len(cur))
        cur.pop(idx)
    dk = dims_dim(cur) if cur else 1
    return tensor_form.reshape(dk, dk)


def _hermitian_apply(m, fn):
    vals, vecs = eigh_clipped(m)
    return (vecs * fn(vals)) @ dag(vecs)


def func_hermitian(m, fn):
    """Spectral application of a named function to a matrix.

    fn is one of:
      'sqrt_psd' -- square root of a Hermitian PSD matrix
      'log2'     -- base-2 logarithm; zero eigenvalues contribute zero
      'abs'      -- |A| = sqrt(A^dag A); accepts any matrix
    """
    m = np.asarray(m, dtype=complex)
    if fn == "abs":
        # singular-value form works for non-Hermitian inputs too
        _, s, vh = np.linalg.svd(m)
        return dag(vh) @ (s[:, None] * vh)
    if np.linalg.norm(m - dag(m)) > DENSITY_TOL:
        raise ValueError(f"'{fn}' requires a Hermitian input")
    if fn == "sqrt_psd":
        return _hermitian_apply(m, lambda v: np.sqrt(np.clip(v, 0, None)))
    if fn == "log2":
        return _hermitian_apply(
            m, lambda v: np.where(v > EIG_TOL, np.log2(np.where(v > EIG_TOL, v, 1.0)), 0.0)
        )
    raise ValueError(f"unknown matrix function '{fn}'")


def sqrt_psd(m):
    return func_hermitian(m, "sqrt_psd")


def abs_op(m):
    return func_hermitian(m, "abs")


def _fix_phases(u, vh):
    """Make the first nonzero component of each left vector real positive."""
    u = u.copy()
    vh = vh.copy()
    for k in range(u.shape[1]):
        col = u[:, k]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            phase = col[nz[0]] / abs(col[nz[0]])
            u[:, k] = col / phase
            vh[k, :] = vh[k, :] * phase
    return u, vh


def _tie_break(s, u, vh, tol=EIG_TOL):
    """Deterministic column order inside degenerate singular-value groups."""
    order = list(range(len(s)))
    i = 0
    while i < len(s):
        j = i
        while j + 1 < len(s) and abs(s[j + 1] - s[i]) <= tol:
            j += 1
        if j > i:
            block = order[i : j + 1]
            keys = {
                k: tuple(
                    np.round(np.concatenate([u[:, k].real, u[:, k].imag]), 9)
                )
                for k in block
            }
            block.sort(key=lambda k: keys[k])
            order[i : j + 1] = block
        i = j + 1
    return s[order], u[:, order], vh[order, :]


@dataclass
class SchmidtDecomposition:
    """Pure-state Schmidt data across a bipartition.

    coefficients are nonnegative and descending; basis_a / basis_b hold the
    orthonormal Schmidt vectors as columns; number() counts coefficients
    above the rank cutoff.
    """

    coefficients: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray

    def number(self, cutoff=EIG_TOL):
        return int(np.sum(self.coefficients > cutoff))

    def reconstruct(self):
        psi = np.zeros(self.basis_a.shape[0] * self.basis_b.shape[0], dtype=complex)
        for k, lam in enumerate(self.coefficients):
            psi += lam * np.kron(self.basis_a[:, k], self.basis_b[:, k])
        return psi


def split_dims(dims, cut):
    dims = tuple(int(d) for d in dims)
    if not 0 < cut < len(dims):
        raise ValueError(f"cut {cut} does not bipartition dims {dims}")
    return dims_dim(dims[:cut]), dims_dim(dims[cut:])


def schmidt_pure(psi, dims, cut=1):
    """Schmidt decomposition of a pure state across dims[:cut] | dims[cut:]."""
    da, db = split_dims(dims, cut)
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size != da * db:
        raise ValueError("state length does not match dims")
    m = psi.reshape(da, db)
    u, s, vh = np.linalg.svd(m)
    r = min(da, db)
    u, s, vh = u[:, :r], s[:r], vh[:r, :]
    u, vh = _fix_phases(u, vh)
    s, u, vh = _tie_break(s, u, vh)
    return SchmidtDecomposition(s, u, vh.T)


def purify(rho, tol=EIG_TOL):
    """Canonical purification |psi> = sum_i sqrt(p_i) |v_i>|i>.

    Returns (psi, dims) where dims = (d, d); the appended reference system is
    the second factor, indexed by descending eigenvalue order of rho.
    """
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    vals, vecs = eigh_clipped(rho)
    psi = np.zeros(d * d, dtype=complex)
    for i in range(d):
        if vals[i] > tol:
            psi += np.sqrt(vals[i]) * np.kron(vecs[:, i], ket(i, d))
    return psi, (d, d)


@dataclass
class OperatorSchmidt:
    """Operator Schmidt data: U = sum_k coeff_k  ops_a[k] (x) ops_b[k].

    ops_a and ops_b are orthonormal under the trace inner product.
    """

    coefficients: np.ndarray
    ops_a: list
    ops_b: list

    def number(self, cutoff=EIG_TOL):
        return int(np.sum(self.coefficients > cutoff))

    def reconstruct(self):
        out = 0
        for k, c in enumerate(self.coefficients):
            out = out + c * np.kron(self.ops_a[k], self.ops_b[k])
        return out


def schmidt_operator(u, dims, cut=1):
    """Minimal trace-inner-product decomposition U = sum_k c_k A_k (x) B_k.

    Implemented via the singular value decomposition of the operator
    reshuffled across the cut; the singular values are the coefficients.
    """
    da, db = split_dims(dims, cut)
    u = np.asarray(u, dtype=complex)
    if u.shape != (da * db, da * db):
        raise ValueError("operator shape does not match dims")
    # reshuffle: M[(i,i'),(j,j')] = U[(i,j),(i',j')]
    m = u.reshape(da, db, da, db).transpose(0, 2, 1, 3).reshape(da * da, db * db)
    w, s, vh = np.linalg.svd(m)
    r = min(m.shape)
    w, vh = _fix_phases(w[:, :r], vh[:r, :])
    s = s[:r]
    s, w, vh = _tie_break(s, w, vh)
    ops_a = [w[:, k].reshape(da, da) for k in range(r)]
    ops_b = [vh[k, :].reshape(db, db) for k in range(r)]
    return OperatorSchmidt(s, ops_a, ops_b)


def mixed_schmidt_coefficients(rho, dims, tol=EIG_TOL):
    """Coefficient matrices a^k expanding the eigenvectors of a bipartite
    state in the local eigenbases of its reduced states.

    Writing rho = sum_k |k><k| with unnormalized |k> (eigenvalue absorbed),
    and |i>, |j> the unnormalized eigenvectors of the reductions, the
    expansion |k> = sum_ij a^k_ij |i>|j> determines the matrices returned
    here, one per nonzero eigenvalue of rho.
    """
    da, db = split_dims(dims, 1) if len(dims) == 2 else (None, None)
    if da is None:
        raise ValueError("mixed Schmidt analysis expects a bipartite dims pair")
    rho = np.asarray(rho, dtype=complex)
    r_vals, r_vecs = eigh_clipped(rho)
    a_red = partial_trace(rho, dims, 0)
    b_red = partial_trace(rho, dims, 1)
    p, va = eigh_clipped(a_red)
    q, vb = eigh_clipped(b_red)
    if p.min() < tol or q.min() < tol:
        raise ValueError("reduced states must have full rank for the expansion")
    mats = []
    for k in range(len(r_vals)):
        if r_vals[k] <= tol:
            continue
        vec = np.sqrt(r_vals[k]) * r_vecs[:, k]
        # coefficients <i|<j| k> with the sqrt(p_i q_j) normalization absorbed
        coeff = (dag(va) @ vec.reshape(da, db) @ vb.conj())
        mats.append(coeff / np.sqrt(np.outer(p, q)))
    return mats, np.diag(p), np.diag(q), r_vals[r_vals > tol]


@dataclass
class MixedSchmidtReport:
    residual_b_constraint: float   # || sum_k a^k Q a^k+ - I ||
    residual_a_constraint: float   # || sum_k a^k+ P a^k - I ||
    residual_orthogonality: float  # max | tr(a^k+ P a^k' Q) - <k|k'> |
    residual_reconstruction: float
    p_matrix: np.ndarray
    q_matrix: np.ndarray

    def max_residual(self):
        return max(
            self.residual_b_constraint,
            self.residual_a_constraint,
            self.residual_orthogonality,
            self.residual_reconstruction,
        )


def mixed_schmidt_verify(rho, dims, coeff_matrices=None):
    """Verify the bipartite consistency constraints on coefficient matrices.

    If coeff_matrices is None they are extracted from rho's eigenvectors via
    mixed_schmidt_coefficients.  Reports residuals of
    sum_k a^k Q a^k+ = I, sum_k a^k+ P a^k = I,
    tr(a^k+ P a^k' Q) = <k|k'>, and of reconstructing rho itself.
    """
    dims = tuple(int(d) for d in dims)
    da, db = split_dims(dims, 1)
    rho = np.asarray(rho, dtype=complex)
    extracted, pm, qm, r_vals = mixed_schmidt_coefficients(rho, dims)
    if coeff_matrices is None:
        coeff_matrices = extracted
    mats = [np.asarray(a, dtype=complex) for a in coeff_matrices]
    for a in mats:
        if a.shape != (da, db):
            raise ValueError("coefficient matrix shape does not match dims")
    p_diag, q_diag = np.diag(pm), np.diag(qm)
    s1 = sum(a @ qm @ dag(a) for a in mats)
    s2 = sum(dag(a) @ pm @ a for a in mats)
    gram = np.array(
        [[np.trace(dag(a) @ pm @ b @ qm) for b in mats] for a in mats]
    )
    expect = np.diag(r_vals.astype(complex)) if len(r_vals) == len(mats) else None
    if expect is None or expect.shape != gram.shape:
        # externally supplied matrices: compare against their own norms
        expect = np.diag(np.diag(gram))
    # reconstruct rho = sum_k |k><k| from the coefficient matrices
    va_scaled = None
    a_red = partial_trace(rho, dims, 0)
    b_red = partial_trace(rho, dims, 1)
    _, va = eigh_clipped(a_red)
    _, vb = eigh_clipped(b_red)
    recon = np.zeros_like(rho)
    for a in mats:
        vec = (va @ (np.sqrt(np.outer(p_diag, q_diag)) * a) @ vb.T).reshape(-1)
        recon += np.outer(vec, vec.conj())
    return MixedSchmidtReport(
        residual_b_constraint=float(np.linalg.norm(s1 - np.eye(da))),
        residual_a_constraint=float(np.linalg.norm(s2 - np.eye(db))),
        residual_orthogonality=float(np.max(np.abs(gram - expect))),
        residual_reconstruction=float(np.linalg.norm(recon - rho)),
        p_matrix=pm,
        q_matrix=qm,
    )
