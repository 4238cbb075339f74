"""Two-qubit entanglement measures and the thermal two-spin model.

The concurrence is computed exactly as prescribed: complex-conjugate the
state in the fixed entangled (magic) basis, form R = sqrt(sqrt(rho) rho*
sqrt(rho)), and take c = max(0, 2 lambda_max - tr R), evaluated in the
numerically stabler form lambda_1 - lambda_2 - lambda_3 - lambda_4 over the
sorted eigenvalues of R.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import dag, partial_trace, projector, sqrt_psd
from .entropy import binary, holevo_chi, vn_entropy, Ensemble
from .report import MetricReport
from .sampling import random_density, random_pure, random_unitary, rng_from

# columns: (|00>+|11>)/sqrt2, i(|00>-|11>)/sqrt2, i(|01>+|10>)/sqrt2, (|01>-|10>)/sqrt2
MAGIC_BASIS = np.array(
    [
        [1, 1j, 0, 0],
        [0, 0, 1j, 1],
        [0, 0, 1j, -1],
        [1, -1j, 0, 0],
    ],
    dtype=complex,
) / np.sqrt(2)


# M @ M.T for the magic basis: conjugating in the magic basis equals the
# exact signed-permutation sandwich Q rho* Q (Q symmetric, Q^2 = I), which
# keeps tiny matrix entries intact where dense basis changes would not.
_MAGIC_Q = np.array(
    [
        [0, 0, 0, 1],
        [0, 0, -1, 0],
        [0, -1, 0, 0],
        [1, 0, 0, 0],
    ],
    dtype=complex,
)


def magic_conjugate(rho):
    """Complex conjugation taken in the magic basis."""
    return _MAGIC_Q @ np.asarray(rho, dtype=complex).conj() @ _MAGIC_Q


@dataclass
class ConcurrenceReport:
    concurrence: float
    eof: float
    r_eigenvalues: np.ndarray


def concurrence(rho):
    """Concurrence and entanglement of formation of a two-qubit state.

    The eigenvalues of R = sqrt(sqrt(rho) rho* sqrt(rho)) are evaluated as
    the singular values of sqrt(rho*) sqrt(rho), which carries the same
    spectrum without squaring away nearly-degenerate small eigenvalues.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("concurrence is defined for two-qubit states")
    vals = np.linalg.svd(
        sqrt_psd(magic_conjugate(rho)) @ sqrt_psd(rho), compute_uv=False
    )
    vals = np.sort(np.clip(vals, -1e-12, None))[::-1]
    c = max(0.0, float(vals[0] - vals[1] - vals[2] - vals[3]))
    return ConcurrenceReport(c, eof_from_concurrence(c), vals)


def eof_from_concurrence(c):
    """Entanglement of formation H(1/2 + 1/2 sqrt(1 - c^2)) in bits."""
    c = float(np.clip(c, 0.0, 1.0))
    return binary(0.5 + 0.5 * np.sqrt(max(0.0, 1.0 - c * c)))


def eof_two_qubit(rho):
    return concurrence(rho).eof


def decomposition_average_entropy(rho, mixing, tol=1e-12):
    """Average sum_i p_i S(A_i) of the pure-state decomposition obtained by
    mixing the eigen-decomposition of rho with the rows of `mixing`.

    `mixing` must have orthonormal columns spanning at least the rank of
    rho; the rows then define the unnormalized ensemble members.
    """
    rho = np.asarray(rho, dtype=complex)
    vals, vecs = np.linalg.eigh(rho)
    order = np.argsort(vals)[::-1]
    vals, vecs = np.clip(vals[order], 0, None), vecs[:, order]
    rank = int(np.sum(vals > tol))
    scaled = vecs[:, :rank] * np.sqrt(vals[:rank])
    mixing = np.asarray(mixing, dtype=complex)
    if mixing.shape[1] < rank:
        raise ValueError("mixing matrix has too few columns for the state rank")
    total = 0.0
    for row in mixing:
        member = scaled @ row[:rank].conj()
        p = float(np.vdot(member, member).real)
        if p > tol:
            red = partial_trace(projector(member / np.sqrt(p)), (2, 2), 0)
            total += p * vn_entropy(red)
    return total


def eof_decomposition_search(rho, trials=60, seed=0, refine=3):
    """Smallest decomposition average found by random unitary mixings.

    Draws `trials` Haar-random mixing unitaries and polishes the best few
    with gradient-free refinement over the unitary's Hermitian generator.
    """
    from scipy.linalg import expm
    from scipy.optimize import minimize

    rng = rng_from(seed)
    rho = np.asarray(rho, dtype=complex)

    def generator(params):
        h = np.zeros((4, 4), dtype=complex)
        idx = 0
        for i in range(4):
            h[i, i] = params[idx]
            idx += 1
        for i in range(4):
            for j in range(i + 1, 4):
                h[i, j] = params[idx] + 1j * params[idx + 1]
                h[j, i] = params[idx] - 1j * params[idx + 1]
                idx += 2
        return h

    def average(params):
        return decomposition_average_entropy(rho, expm(1j * generator(params)))

    starts = [rng.standard_normal(16) for _ in range(trials)]
    scored = sorted(starts, key=average)
    best = average(scored[0])
    for x0 in scored[: max(refine, 1)]:
        res = minimize(average, x0, method="Powell", options={"xtol": 1e-9, "ftol": 1e-11})
        best = min(best, float(res.fun))
    return best


# ---------------------------------------------------------------------------
# thermal two-spin model: H = (sz_A + sz_B)/2 + (b/4) sigma_A . sigma_B
# in units with the local splitting a = 1 and k = hbar = 1
# ---------------------------------------------------------------------------

@dataclass
class ThermalModel:
    b: float  # coupling strength
    t: float  # temperature

    def __post_init__(self):
        if self.t <= 0:
            raise ValueError("temperature must be positive")


def thermal_hamiltonian(b):
    from .ops import SIGMA_X, SIGMA_Y, SIGMA_Z

    sz = np.kron(SIGMA_Z, np.eye(2)) + np.kron(np.eye(2), SIGMA_Z)
    coupling = (
        np.kron(SIGMA_X, SIGMA_X) + np.kron(SIGMA_Y, SIGMA_Y) + np.kron(SIGMA_Z, SIGMA_Z)
    )
    return sz / 2 + (b / 4) * coupling


def thermal_energies(b):
    """Energies of the singlet, |11>, triplet-0 and |00> eigenstates."""
    return np.array([-3 * b / 4, b / 4 - 1, b / 4, b / 4 + 1])


def thermal_eigenstates():
    """Energy eigenvectors in the computational basis, ordered to match
    thermal_energies: singlet, |11>, triplet-zero, |00>."""
    singlet = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
    e11 = np.array([0, 0, 0, 1], dtype=complex)
    triplet0 = np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2)
    e00 = np.array([1, 0, 0, 0], dtype=complex)
    return [singlet, e11, triplet0, e00]


def thermal_state(model):
    """Equilibrium state exp(-H/T)/Z of the two-spin model.

    Built from shifted Boltzmann weights so very low temperatures do not
    overflow.
    """
    energies = thermal_energies(model.b)
    weights = np.exp(-(energies - energies.min()) / model.t)
    weights = weights / weights.sum()
    rho = np.zeros((4, 4), dtype=complex)
    for w, vec in zip(weights, thermal_eigenstates()):
        rho += w * projector(vec)
    return rho


def _thermal_signed(b, t):
    # (e^{b/t} - 3) / (1 + e^{b/t} + 2 cosh(1/t)) rewritten overflow-safe
    m = max(b, 1.0)
    num = np.exp((b - m) / t) - 3 * np.exp(-m / t)
    den = (
        np.exp(-m / t)
        + np.exp((b - m) / t)
        + np.exp((1 - m) / t)
        + np.exp(-(1 + m) / t)
    )
    return float(num / den)


def thermal_concurrence(model):
    """Closed-form concurrence of the thermal state."""
    return max(0.0, _thermal_signed(model.b, model.t))


def thermal_concurrence_signed(model):
    """The quantity 2 lambda_max - tr R before clamping at zero."""
    return _thermal_signed(model.b, model.t)


def critical_temperature(b):
    """Temperature above which the thermal state is unentangled: b / ln 3."""
    if b < 0:
        raise ValueError("coupling must be nonnegative")
    return b / np.log(3.0)


def critical_temperature_root(b, lo=1e-3, hi=None):
    """Critical temperature located by root finding on the computed
    (unclamped) concurrence of the actual thermal state."""
    from scipy.optimize import brentq

    def signed(t):
        rho = thermal_state(ThermalModel(b, t))
        root = sqrt_psd(rho)
        r = sqrt_psd(root @ magic_conjugate(rho) @ root)
        vals = np.sort(np.linalg.eigvalsh(r))[::-1]
        return float(vals[0] - vals[1] - vals[2] - vals[3])

    hi = 10.0 * max(b, 1.0) if hi is None else hi
    return float(brentq(signed, lo, hi, xtol=1e-12))


def entanglement_inequality_suite(seed=0, samples=300):
    """Entanglement bounds on random two-qubit states.

    Checks the entropy-entanglement inequality (both orders), the entropy
    bound eof <= min(S(A), S(B)), and the accessible-information bound
    chi <= S(B) - eof(A:B) for a sampled preparation of the state.
    """
    rng = rng_from(seed)
    reports = []
    for _ in range(samples):
        rho = random_density(4, rng)
        rep = concurrence(rho)
        s_ab = vn_entropy(rho)
        s_a = vn_entropy(partial_trace(rho, (2, 2), 0))
        s_b = vn_entropy(partial_trace(rho, (2, 2), 1))
        reports.append(MetricReport("entropy_entanglement_ab", -(s_ab - s_b), rep.eof))
        reports.append(MetricReport("entropy_entanglement_ba", -(s_ab - s_a), rep.eof))
        reports.append(MetricReport("eof_entropy_bounded", rep.eof, min(s_a, s_b)))

        # accessible information of a random pure-state preparation of rho
        vals, vecs = np.linalg.eigh(rho)
        vals = np.clip(vals[::-1], 0, None)
        vecs = vecs[:, ::-1]
        u = random_unitary(4, rng)
        members, weights = [], []
        scaled = vecs * np.sqrt(vals)
        for row in u:
            member = scaled @ row.conj()
            p = float(np.vdot(member, member).real)
            if p > 1e-12:
                weights.append(p)
                members.append(projector(member / np.sqrt(p)))
        b_members = [partial_trace(m, (2, 2), 1) for m in members]
        chi = holevo_chi(Ensemble(np.array(weights), b_members))
        reports.append(MetricReport("accessible_information", chi + rep.eof, s_b))
    return reports
