"""Block compression of i.i.d. sources at desk scale.

Typical sets are enumerated by eigenvalue type class (composition counts),
never by a raw d^n scan.  A block of n copies of a source with eigenvalues
q is handled entirely inside the product eigenbasis, where the projectors,
the encoder branches and the dynamic fidelity all reduce to classical sums
over type classes.

A sequence counts as epsilon-typical when it passes either of the two
standard windows: the probability window
2^{-n(S+eps)} <= p_x <= 2^{-n(S-eps)}, or the frequency window in which
every eigenvalue index appears with empirical frequency within epsilon of
its weight.  The union keeps the degenerate cases exact (a maximally mixed
source is entirely typical) while the captured mass still climbs toward
one at the block lengths this module targets (n <= 64), where the
probability window alone is far from its asymptotic regime.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import comb, factorial

import numpy as np

from .core import eigh_clipped, ket, projector, tensor
from .entropy import shannon, vn_entropy
from .metrics import dynamic_fidelity
from .ops import quantum_op

TYPE_CLASS_BUDGET = 10_000_000  # max type-class table entries per call
MATERIALIZE_LIMIT = 4096  # largest d^n for explicit operator construction


@dataclass
class IIDSource:
    """Single-copy state of an i.i.d. source, diagonalized once."""

    rho: np.ndarray

    def __post_init__(self):
        self.rho = np.asarray(self.rho, dtype=complex)
        vals, vecs = eigh_clipped(self.rho)
        self.eigenvalues = np.clip(vals, 0.0, None)
        self.eigenvectors = vecs

    @property
    def dim(self):
        return self.rho.shape[0]

    @property
    def entropy(self):
        return shannon(self.eigenvalues)


def _compositions(n, d):
    """All tuples (k_0 .. k_{d-1}) with sum n, lexicographic order."""
    if d == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(n - first, d - 1):
            yield (first,) + rest


def _class_size(counts):
    size = factorial(sum(counts))
    for c in counts:
        size //= factorial(c)
    return size


def _log2_prob(counts, q):
    total = 0.0
    for k, qi in zip(counts, q):
        if k == 0:
            continue
        if qi <= 0:
            return -np.inf
        total += k * np.log2(qi)
    return total


@dataclass
class TypicalSubspace:
    n: int
    epsilon: float
    typical_types: list          # type-class count tuples
    projector_rank: int
    mass: float
    rank_exponent: float         # log2(rank) / n
    entropy_window: tuple        # (n(S - eps), n(S + eps)) on -log2 p
    source: IIDSource

    def sequences(self):
        """Eigenindex strings of the typical sequences (small n only)."""
        d = self.source.dim
        typical = set(self.typical_types)
        out = []
        for seq in product(range(d), repeat=self.n):
            counts = tuple(seq.count(i) for i in range(d))
            if counts in typical:
                out.append(seq)
        return out

    def projector_matrix(self):
        d = self.source.dim
        if d ** self.n > MATERIALIZE_LIMIT:
            raise ValueError("block too large to materialize the projector")
        vecs = self.source.eigenvectors
        p = np.zeros((d ** self.n, d ** self.n), dtype=complex)
        for seq in self.sequences():
            v = tensor(*[vecs[:, i] for i in seq])
            p += projector(v)
        return p


def _is_typical(counts, q, n, epsilon, entropy):
    in_freq = all(abs(k / n - qi) <= epsilon + 1e-12 for k, qi in zip(counts, q))
    if in_freq:
        return True
    neg_log_p = -_log2_prob(counts, q)
    return n * (entropy - epsilon) - 1e-9 <= neg_log_p <= n * (entropy + epsilon) + 1e-9


def typical_projector(source, n, epsilon):
    """Typical subspace of n source copies (probability or frequency window).

    Mass, rank and the rank exponent are computed exactly from the
    type-class table.
    """
    d = source.dim
    q = source.eigenvalues
    if comb(n + d - 1, d - 1) > TYPE_CLASS_BUDGET:
        raise ValueError("type-class table exceeds the enumeration budget")
    s = source.entropy
    typical = []
    mass = 0.0
    rank = 0
    for counts in _compositions(n, d):
        if _is_typical(counts, q, n, epsilon, s):
            typical.append(counts)
            size = _class_size(counts)
            rank += size
            mass += size * 2.0 ** _log2_prob(counts, q)
    return TypicalSubspace(
        n=n,
        epsilon=epsilon,
        typical_types=typical,
        projector_rank=rank,
        mass=float(mass),
        rank_exponent=float(np.log2(rank) / n) if rank else -np.inf,
        entropy_window=(n * (s - epsilon), n * (s + epsilon)),
        source=source,
    )


@dataclass
class CompressionScheme:
    n: int
    epsilon: float
    rate: float                  # qubits per source copy
    code_dimension: int          # 2^ceil(n R)
    subspace: TypicalSubspace

    def operations(self):
        """Explicit encode/decode operations (small blocks only).

        Encoding measures {P, I-P}; on failure the state is replaced by the
        lexicographically first typical basis sequence.  Decoding embeds the
        code space back into the block space.
        """
        src = self.subspace.source
        d = src.dim
        dim = d ** self.n
        if dim > MATERIALIZE_LIMIT:
            raise ValueError("block too large to materialize operations")
        seqs = sorted(self.subspace.sequences())
        if len(seqs) > self.code_dimension:
            raise ValueError("rate too small for the typical projector")
        vecs = src.eigenvectors
        basis = [tensor(*[vecs[:, i] for i in seq]) for seq in seqs]
        dc = self.code_dimension
        # isometry from the typical subspace into the code space
        v = np.zeros((dc, dim), dtype=complex)
        for row, b in enumerate(basis):
            v[row, :] = b.conj()
        keep = v  # maps typical component into code space
        fail = []
        std = ket(0, dc)  # code image of the first typical sequence
        atypical = _atypical_basis(src, self.n, self.subspace)
        for b in atypical:
            fail.append(np.outer(std, b.conj()))
        encode = quantum_op([keep] + fail, (dim,), (dc,))
        decode = quantum_op([keep.conj().T], (dc,), (dim,))
        return encode, decode


def _atypical_basis(source, n, subspace):
    d = source.dim
    typical = set(subspace.typical_types)
    vecs = source.eigenvectors
    out = []
    for seq in product(range(d), repeat=n):
        counts = tuple(seq.count(i) for i in range(d))
        if counts not in typical:
            out.append(tensor(*[vecs[:, i] for i in seq]))
    return out


def schumacher_scheme(source, n, epsilon, rate=None):
    """Measure-and-transmit scheme; returns (scheme, dynamic fidelity).

    The dynamic fidelity of decode(encode(.)) on the n-fold source equals
    |tr(rho^n P)|^2 exactly for an i.i.d. source, since every failure
    branch has zero overlap with the diagonal block state.
    """
    sub = typical_projector(source, n, epsilon)
    if rate is None:
        rate = float(np.ceil(np.log2(max(sub.projector_rank, 1)))) / n
    code_dim = 2 ** int(np.ceil(n * rate))
    if code_dim < sub.projector_rank:
        raise ValueError("rate too small for the typical projector")
    scheme = CompressionScheme(n, epsilon, rate, code_dim, sub)
    return scheme, float(sub.mass ** 2)


def strong_converse_bound(entropy, n, rate, epsilon):
    """Fidelity ceiling 2^{-n(S - R - eps)} + eps for rate-R schemes."""
    return float(2.0 ** (-n * (entropy - rate - epsilon)) + epsilon)


def best_effort_fidelity(source, n, rate):
    """Best dynamic fidelity of a rank-limited projective scheme.

    Keeps the 2^{floor(nR)} highest-probability sequences; the resulting
    dynamic fidelity is (captured mass)^2, the best achievable by any
    measure-and-transmit scheme at that rank.
    """
    budget = 2 ** int(np.floor(n * rate))
    classes = []
    for counts in _compositions(n, source.dim):
        lp = _log2_prob(counts, source.eigenvalues)
        classes.append((lp, _class_size(counts)))
    classes.sort(key=lambda t: -t[0])
    mass = 0.0
    left = budget
    for lp, size in classes:
        take = min(left, size)
        mass += take * 2.0 ** lp
        left -= take
        if left == 0:
            break
    return float(mass ** 2)


@dataclass
class LadderReport:
    source_index: int
    stop_probabilities: np.ndarray  # per measurement stage, plus give-up at the end
    fidelity_bound: float           # |tr(P_i Q_{i-1} ... Q_1 rho_i^n)|^2
    identification_probability: float


def _reference_spectra(sources):
    """Express every source's eigenvalues in one common eigenbasis.

    Uses the eigenbasis of the first source as reference; every other
    source must be diagonal in it (the commuting case the ladder handles
    classically).
    """
    ref = sources[0].eigenvectors
    spectra = []
    for s in sources:
        m = ref.conj().T @ s.rho @ ref
        off = m - np.diag(np.diag(m))
        if np.max(np.abs(off)) > 1e-9:
            raise ValueError("ladder requires simultaneously diagonal sources")
        spectra.append(np.clip(np.diag(m).real, 0.0, None))
    return spectra


def _typical_types(q, n, epsilon):
    entropy = shannon(q)
    return {
        counts
        for counts in _compositions(n, len(q))
        if _is_typical(counts, q, n, epsilon, entropy)
    }


def universal_ladder(sources, n, epsilon, entropy_margin=1e-6):
    """Sequential typical-subspace identification over an entropy-distinct
    family of commuting sources, in ascending entropy order.

    Stage i measures {P_i, I - P_i}; the first success determines the
    compression subspace, and exhausting all stages gives up.  Returns one
    report per source with its stop distribution, the fidelity lower bound
    |tr(P_i Q_{i-1} ... Q_1 rho_i^n)|^2 and the identification probability.
    """
    entropies = [s.entropy for s in sources]
    if any(
        entropies[i + 1] - entropies[i] < entropy_margin
        for i in range(len(sources) - 1)
    ):
        raise ValueError("sources must be sorted by entropy with a positive margin")
    spectra = _reference_spectra(sources)
    stage_types = [_typical_types(q, n, epsilon) for q in spectra]
    d = sources[0].dim
    all_types = list(_compositions(n, d))
    reports = []
    for i, q_true in enumerate(spectra):
        remaining = {
            counts: _class_size(counts) * 2.0 ** _log2_prob(counts, q_true)
            for counts in all_types
        }
        stops = []
        for typical in stage_types:
            caught = sum(p for c, p in remaining.items() if c in typical)
            stops.append(caught)
            remaining = {c: p for c, p in remaining.items() if c not in typical}
        give_up = sum(remaining.values())
        reports.append(
            LadderReport(
                source_index=i,
                stop_probabilities=np.array(stops + [give_up]),
                fidelity_bound=float(stops[i] ** 2),
                identification_probability=float(stops[i]),
            )
        )
    return reports


def cross_mass(sources, n, epsilon, a, b):
    """tr(P_a P_b rho_b^n) for two commuting sources: the mass source b
    leaves inside source a's typical subspace."""
    spectra = _reference_spectra(sources)
    types = _typical_types(spectra[a], n, epsilon) & _typical_types(
        spectra[b], n, epsilon
    )
    return float(
        sum(
            _class_size(c) * 2.0 ** _log2_prob(c, spectra[b])
            for c in types
        )
    )
