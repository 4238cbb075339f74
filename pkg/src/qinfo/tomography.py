"""Process tomography: chi-matrix reconstruction from probe outputs.

The process matrix chi is defined against a fixed operator basis by
E(rho) = sum_mn chi_mn  Etil_m rho Etil_n^dag.  The default fixed basis is
the tensor power of {I, X, -iY, Z}, so the one-qubit closed form and the
general linear-algebra path share conventions.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .core import dag, ket, projector, tensor
from .ops import PAULIS, apply, quantum_op

_FIXED_1Q = (PAULIS[0], PAULIS[1], -1j * PAULIS[2], PAULIS[3])


def pauli_fixed_ops(n_qubits):
    """Tensor powers of the fixed operator set {I, X, -iY, Z}."""
    if n_qubits == 1:
        return list(_FIXED_1Q)
    return [tensor(*combo) for combo in product(_FIXED_1Q, repeat=n_qubits)]


def probe_states(d):
    """The d^2 operators |n><m| as the probe basis, row-major in (n, m)."""
    return [np.outer(ket(n, d), ket(m, d).conj()) for n in range(d) for m in range(d)]


def probe_preparations(n, m, d):
    """The four prepared pure states combining into |n><m| for n != m."""
    plus = (ket(n, d) + ket(m, d)) / np.sqrt(2)
    minus = (ket(n, d) + 1j * ket(m, d)) / np.sqrt(2)
    return ket(n, d), ket(m, d), plus, minus


def outputs_from_preparations(outs_n, outs_m, outs_plus, outs_minus):
    """Recombine measured outputs of the four preparations into E(|n><m|)."""
    return (
        outs_plus
        + 1j * outs_minus
        - (1 + 1j) * (outs_n + outs_m) / 2
    )


@dataclass
class TomographyBasis:
    fixed_ops: list
    probe_states: list

    @property
    def dim(self):
        return self.fixed_ops[0].shape[0]


def default_basis(d):
    n_qubits = int(round(np.log2(d)))
    if 2 ** n_qubits != d:
        raise ValueError("default basis assumes a qubit register")
    return TomographyBasis(pauli_fixed_ops(n_qubits), probe_states(d))


@dataclass
class ChiResult:
    chi: np.ndarray
    kraus: list
    residual: float

    def operation(self, in_dims=None, out_dims=None):
        return quantum_op(self.kraus, in_dims, out_dims)


def _expansion_matrix(probes):
    """Matrix whose columns are the vectorized probe operators."""
    return np.array([p.reshape(-1) for p in probes]).T


def recover_chi(basis, outputs, kraus_tol=1e-8):
    """Determine chi from the outputs E(rho_j) on the probe basis.

    Solves sum_mn beta^{mn}_{jk} chi_mn = lambda_jk with beta built from the
    fixed operators and the probe basis, using the singular-value
    pseudoinverse as the generalized inverse.
    """
    probes = basis.probe_states
    fixed = basis.fixed_ops
    d2 = len(probes)
    if len(outputs) != d2:
        raise ValueError("need one output per probe state")
    expand = _expansion_matrix(probes)
    inv_expand = np.linalg.inv(expand)

    def in_probe_coords(mat):
        return inv_expand @ np.asarray(mat, dtype=complex).reshape(-1)

    lam = np.zeros((d2, d2), dtype=complex)
    for j, out in enumerate(outputs):
        lam[j, :] = in_probe_coords(out)
    beta = np.zeros((d2 * d2, d2 * d2), dtype=complex)
    for j, rho_j in enumerate(probes):
        for m, em in enumerate(fixed):
            for n, en in enumerate(fixed):
                coeffs = in_probe_coords(em @ rho_j @ dag(en))
                beta[j * d2 : (j + 1) * d2, m * d2 + n] += coeffs
    kappa = np.linalg.pinv(beta, rcond=1e-10)
    chi_vec = kappa @ lam.reshape(-1)
    chi = chi_vec.reshape(d2, d2)
    chi = (chi + dag(chi)) / 2
    kraus, residual = _kraus_and_residual(chi, fixed, outputs, probes, kraus_tol)
    return ChiResult(chi, kraus, residual)


def _kraus_and_residual(chi, fixed, outputs, probes, kraus_tol):
    kraus = kraus_from_chi(chi, fixed, tol=kraus_tol)
    op = quantum_op(kraus)
    residual = 0.0
    for rho_j, out in zip(probes, outputs):
        residual = max(residual, float(np.max(np.abs(apply(op, rho_j)[0] - out))))
    return kraus, residual


def kraus_from_chi(chi, fixed_ops, tol=1e-8):
    """Operator-sum representation E_i = sqrt(d_i) sum_j U_ji Etil_j.

    Eigenvalues of chi in [-tol, 0) are clipped to zero; anything more
    negative flags unphysical data.
    """
    chi = np.asarray(chi, dtype=complex)
    vals, vecs = np.linalg.eigh((chi + dag(chi)) / 2)
    if vals.min() < -tol:
        raise ValueError(f"chi has negative eigenvalue {vals.min():.3g}: unphysical data")
    kraus = []
    for i in np.argsort(vals)[::-1]:
        if vals[i] <= tol:
            continue
        e = sum(vecs[j, i] * fixed_ops[j] for j in range(len(fixed_ops)))
        kraus.append(np.sqrt(vals[i]) * e)
    if not kraus:
        kraus = [np.zeros_like(fixed_ops[0])]
    return kraus


_LAMBDA_BLOCK = 0.5 * np.block(
    [[PAULIS[0], PAULIS[1]], [PAULIS[1], -PAULIS[0]]]
)


def one_qubit_chi(rho_out_1, rho_out_2, rho_out_3, rho_out_4):
    """Closed-form chi from the four combined one-qubit output blocks.

    The inputs are the outputs on the probe operators |0><0|, |0><1|,
    |1><0| and |1><1| respectively; chi is the Lambda-sandwich of the block
    matrix [[rho'_1, rho'_2], [rho'_3, rho'_4]].
    """
    block = np.block(
        [
            [np.asarray(rho_out_1, complex), np.asarray(rho_out_2, complex)],
            [np.asarray(rho_out_3, complex), np.asarray(rho_out_4, complex)],
        ]
    )
    chi = _LAMBDA_BLOCK @ block @ _LAMBDA_BLOCK
    chi = (chi + dag(chi)) / 2
    fixed = pauli_fixed_ops(1)
    kraus = kraus_from_chi(chi, fixed)
    op = quantum_op(kraus)
    probes = probe_states(2)
    outputs = [rho_out_1, rho_out_2, rho_out_3, rho_out_4]
    residual = max(
        float(np.max(np.abs(apply(op, p)[0] - np.asarray(o, complex))))
        for p, o in zip(probes, outputs)
    )
    return ChiResult(chi, kraus, residual)


def one_qubit_chi_from_measurements(out_0, out_1, out_plus, out_minus):
    """Closed-form chi from the measured outputs of the four prepared
    states |0>, |1>, (|0>+|1>)/sqrt2 and (|0>+i|1>)/sqrt2."""
    out_0 = np.asarray(out_0, complex)
    out_1 = np.asarray(out_1, complex)
    out_plus = np.asarray(out_plus, complex)
    out_minus = np.asarray(out_minus, complex)
    r2 = outputs_from_preparations(out_0, out_1, out_plus, out_minus)
    r3 = out_plus - 1j * out_minus - (1 - 1j) * (out_0 + out_1) / 2
    return one_qubit_chi(out_0, r2, r3, out_1)


def simulate_tomography(op, mode="complete"):
    """Probe, apply and reconstruct an operation end to end.

    In 'complete' mode the outputs are the exact matrices E(rho_j).  In
    'incomplete' mode each prepared probe yields a normalized conditional
    state and a branch probability p_m, and the reconstruction input is
    p_m * rho'_j, mirroring how measurement branches are characterized from
    repeated runs; with exact matrices the two modes coincide.
    """
    if mode not in ("complete", "incomplete"):
        raise ValueError("mode must be 'complete' or 'incomplete'")
    d = op.din
    basis = default_basis(d)

    def measured(psi):
        raw, prob = apply(op, projector(psi))
        if mode == "incomplete":
            # a probe that never triggers the branch contributes p_m rho' = 0
            if prob <= 1e-14:
                return np.zeros_like(raw)
            return prob * (raw / prob)
        return raw

    outputs = []
    for n in range(d):
        for m in range(d):
            if n == m:
                outputs.append(measured(ket(n, d)))
            else:
                outs = [measured(psi) for psi in probe_preparations(n, m, d)]
                outputs.append(outputs_from_preparations(*outs))
    return recover_chi(basis, outputs)
