"""Static and dynamic distance measures for quantum states and processes.

The absolute distance keeps its unnormalized form D = tr|rho - sigma|
(range [0, 2]); the fidelity is the square-root form F = tr sqrt(sqrt(rho)
sigma sqrt(rho)).  The dynamic (entanglement) fidelity of a process is
F(rho, E) = sum_i |tr(rho E_i)|^2 / tr(E(rho)).
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

from .core import EIG_TOL, abs_op, dag, partial_trace, projector, purify, sqrt_psd
from .ops import apply, compose, quantum_op
from .report import MetricReport
from .sampling import random_channel, random_density, rng_from


def absolute_distance(rho, sigma):
    """D(rho, sigma) = tr|rho - sigma|, in [0, 2] for density operators."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise ValueError("states must share a shape")
    return float(np.trace(abs_op(rho - sigma)).real)


def fidelity(rho, sigma):
    """F(rho, sigma) = tr sqrt(sqrt(rho) sigma sqrt(rho)), in [0, 1]."""
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise ValueError("states must share a shape")
    root = sqrt_psd(rho)
    inner = root @ sigma @ root
    vals = np.linalg.eigvalsh((inner + dag(inner)) / 2)
    return float(np.sum(np.sqrt(np.clip(vals, 0.0, None))))


def angle(rho, sigma):
    """Generalized angle arccos F, a metric with values in [0, pi/2]."""
    return float(np.arccos(np.clip(fidelity(rho, sigma), 0.0, 1.0)))


def error(rho, sigma):
    """Error 1 - F^2."""
    return 1.0 - fidelity(rho, sigma) ** 2


def derived_metrics(rho, sigma):
    f = fidelity(rho, sigma)
    return {"angle": float(np.arccos(np.clip(f, 0.0, 1.0))), "error": 1.0 - f * f}


def dynamic_fidelity(rho, op):
    """Entanglement fidelity sum_i |tr(rho E_i)|^2 / tr(E(rho))."""
    rho = np.asarray(rho, dtype=complex)
    _, prob = apply(op, rho)
    if prob <= EIG_TOL:
        raise ValueError("operation has zero probability on this input")
    total = sum(abs(np.trace(rho @ k)) ** 2 for k in op.kraus)
    return float(total.real / prob)


def dynamic_error(rho, op):
    return 1.0 - dynamic_fidelity(rho, op)


def _joint_states(rho, op):
    psi, dims = purify(rho)
    before = projector(psi)
    after = np.zeros_like(before)
    for k in op.kraus:
        lifted = np.kron(k, np.eye(dims[1]))
        after += lifted @ before @ dag(lifted)
    return before, after / np.trace(after).real


def dynamic_distance(rho, op):
    """D(rho, E) = D(RQ, R'Q') on the canonical purification of rho."""
    before, after = _joint_states(rho, op)
    return absolute_distance(before, after)


def uhlmann_fidelity_search(rho, sigma, restarts=20, seed=0):
    """Maximize |<psi|phi>| over reference-side unitaries on purifications.

    Gradient-free verification route for the closed-form fidelity; returns
    the best overlap found.
    """
    rng = rng_from(seed)
    psi, dims = purify(rho)
    phi, _ = purify(sigma)
    d_ref = dims[1]
    sys_eye = np.eye(dims[0])

    def overlap(params):
        h = _hermitian_from_params(params, d_ref)
        u = expm(1j * h)
        return -abs(np.vdot(psi, np.kron(sys_eye, u) @ phi))

    best = 0.0
    n_par = d_ref * d_ref
    for _ in range(restarts):
        x0 = rng.standard_normal(n_par)
        res = minimize(overlap, x0, method="Powell", options={"xtol": 1e-10, "ftol": 1e-12})
        best = max(best, -res.fun)
    return float(best)


def _hermitian_from_params(params, d):
    h = np.zeros((d, d), dtype=complex)
    idx = 0
    for i in range(d):
        h[i, i] = params[idx]
        idx += 1
    for i in range(d):
        for j in range(i + 1, d):
            h[i, j] = params[idx] + 1j * params[idx + 1]
            h[j, i] = params[idx] - 1j * params[idx + 1]
            idx += 2
    return h


def mixing_counterexample():
    """Four-dimensional example probing joint convexity of the dynamic
    fidelity in (state, operation) pairs.

    Returns (mixture_value, part_1, part_2): the dynamic fidelity of the
    averaged state under the averaged operation, and of the two
    (state, operation) parts.  The mixture evaluates to exactly 3/8; each
    part evaluates to 1/2 by direct computation.
    """
    projs = [np.diag([float(i == k) for i in range(4)]).astype(complex) for k in range(4)]
    p12 = np.diag([1.0, 1, 0, 0]).astype(complex)
    p34 = np.diag([0.0, 0, 1, 1]).astype(complex)
    op1 = quantum_op([projs[0], projs[1], p34])
    op2 = quantum_op([p12, projs[2], projs[3]])
    mixed = quantum_op([k / np.sqrt(2) for k in op1.kraus + op2.kraus])
    return (
        dynamic_fidelity(np.eye(4, dtype=complex) / 4, mixed),
        dynamic_fidelity(p12 / 2, op1),
        dynamic_fidelity(p34 / 2, op2),
    )


def metric_inequality_suite(seed=0, samples=200, dim=2):
    """Randomized distance-measure bounds; slack >= -1e-9 asserts each one.

    Covers Fannes' inequality, the chaining bound for dynamic distance, the
    continuity bound, contractivity of D and monotonicity of F under complete
    operations, strong concavity of F, the dynamic/static bound
    F(rho,E) <= F(rho, E(rho))^2, and 2E <= D <= 2 sqrt(E) in both static
    (pure vs mixed) and dynamic forms.
    """
    from .entropy import eta, vn_entropy

    rng = rng_from(seed)
    reports = []
    for _ in range(samples):
        rho = random_density(dim, rng)
        sigma = random_density(dim, rng)

        dist = absolute_distance(rho, sigma)
        if dist <= 1 / np.e:
            reports.append(
                MetricReport(
                    "fannes",
                    abs(vn_entropy(rho) - vn_entropy(sigma)),
                    dist * np.log2(dim) + eta(dist),
                )
            )
        reports.append(
            MetricReport(
                "fannes_weak",
                abs(vn_entropy(rho) - vn_entropy(sigma)),
                dist * np.log2(dim) + 1 / np.e,
            )
        )

        chan = random_channel(dim, rng)
        reports.append(
            MetricReport("distance_contractivity", absolute_distance(chan(rho), chan(sigma)), dist)
        )
        reports.append(
            MetricReport("fidelity_monotonicity", fidelity(rho, sigma), fidelity(chan(rho), chan(sigma)))
        )

        # strong concavity on two-term mixtures
        lam = rng.uniform()
        mu = rng.uniform()
        rho2 = random_density(dim, rng)
        sigma2 = random_density(dim, rng)
        lhs = np.sqrt(lam * mu) * fidelity(rho, sigma) + np.sqrt((1 - lam) * (1 - mu)) * fidelity(rho2, sigma2)
        rhs = fidelity(lam * rho + (1 - lam) * rho2, mu * sigma + (1 - mu) * sigma2)
        reports.append(MetricReport("fidelity_strong_concavity", lhs, rhs))

        # dynamic bounds
        df = dynamic_fidelity(rho, chan)
        dd = dynamic_distance(rho, chan)
        de = 1.0 - df
        reports.append(MetricReport("dynamic_2E_le_D", 2 * de, dd))
        reports.append(MetricReport("dynamic_D_le_2sqrtE", dd, 2 * np.sqrt(max(de, 0.0))))
        reports.append(
            MetricReport(
                "dynamic_le_static_squared",
                df,
                fidelity(rho, chan(rho) / np.trace(chan(rho)).real) ** 2,
            )
        )

        # chaining: D(rho, E2 . E1) <= D(rho, E1) + D(rho', E2)
        chan2 = random_channel(dim, rng)
        rho_mid = chan(rho)
        rho_mid = rho_mid / np.trace(rho_mid).real
        reports.append(
            MetricReport(
                "chaining",
                dynamic_distance(rho, compose(chan2, chan)),
                dynamic_distance(rho, chan) + dynamic_distance(rho_mid, chan2),
            )
        )

        # continuity: D(rho1, E) <= D(rho2, E) + 4 sqrt(E(rho1, rho2))
        reports.append(
            MetricReport(
                "continuity",
                dynamic_distance(rho, chan),
                dynamic_distance(sigma, chan) + 4 * np.sqrt(max(error(rho, sigma), 0.0)),
            )
        )

        # static pure-vs-mixed sandwich 2E <= D <= 2 sqrt(E)
        from .sampling import random_pure

        pure = projector(random_pure(dim, rng))
        e_val = error(pure, sigma)
        d_val = absolute_distance(pure, sigma)
        reports.append(MetricReport("static_2E_le_D", 2 * e_val, d_val))
        reports.append(MetricReport("static_D_le_2sqrtE", d_val, 2 * np.sqrt(max(e_val, 0.0))))
    return reports
