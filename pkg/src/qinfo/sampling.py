"""Seeded random states, unitaries and channels for the fuzz suites.

States are drawn by partial-tracing Haar-random pure states; channels by
Stinespring dilation with Haar-random unitaries.  Every sampler takes a
numpy Generator so that the seed-to-sample mapping stays deterministic.
"""

from __future__ import annotations

import numpy as np

from .core import partial_trace
from .ops import quantum_op


def rng_from(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_pure(dim, rng):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_unitary(dim, rng):
    """Haar-distributed unitary via QR with phase fixing."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_density(dim, rng, rank=None):
    """Mixed state: reduced half of a Haar-random pure state on dim x rank."""
    rank = dim if rank is None else rank
    psi = random_pure(dim * rank, rng)
    rho = np.outer(psi, psi.conj())
    return partial_trace(rho, (dim, rank), 0)


def random_channel(din, rng, dout=None, n_kraus=None):
    """Complete operation from a Haar-random Stinespring isometry."""
    dout = din if dout is None else dout
    n_kraus = din if n_kraus is None else n_kraus
    big = random_unitary(dout * n_kraus, rng)
    iso = big[:, :din]  # (dout * n_kraus) x din isometry, env index slow
    kraus = [iso[k * dout : (k + 1) * dout, :] for k in range(n_kraus)]
    return quantum_op(kraus, (din,), (dout,))
