"""A minimal statevector circuit simulator and the two flagship protocols.

Qubit 0 is the slowest-varying index.  Measurements are computational-basis,
sample deterministically from a seeded generator, and store their outcome in
classical bits that later gates may be conditioned on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import ket, partial_trace, projector, tensor
from .ops import HADAMARD, PAULIS, SIGMA_X, SIGMA_Y, SIGMA_Z, quantum_op
from .sampling import rng_from

# rotations by +-90 degrees about y: exp(-+ i pi Y / 4)
RY90 = (np.eye(2) - 1j * SIGMA_Y) / np.sqrt(2)
RY90M = (np.eye(2) + 1j * SIGMA_Y) / np.sqrt(2)

GATES = {
    "I": PAULIS[0],
    "X": SIGMA_X,
    "Y": SIGMA_Y,
    "Z": SIGMA_Z,
    "H": HADAMARD,
    "S": np.diag([1.0, 1j]).astype(complex),
    "RY90": RY90,
    "RY90M": RY90M,
    "CNOT": np.eye(4, dtype=complex)[[0, 1, 3, 2]],
}


@dataclass
class Gate:
    matrix_or_name: object
    targets: tuple
    control_bit: int | None = None  # classical bit gating the application


@dataclass
class Measure:
    target: int
    bit: int


@dataclass
class Circuit:
    qubit_count: int
    steps: list = field(default_factory=list)

    def gate(self, name, *targets, control_bit=None):
        self.steps.append(Gate(name, tuple(targets), control_bit))
        return self

    def measure(self, target, bit):
        self.steps.append(Measure(target, bit))
        return self


def _gate_matrix(spec):
    if isinstance(spec, str):
        try:
            return GATES[spec]
        except KeyError:
            raise ValueError(f"unknown gate '{spec}'") from None
    return np.asarray(spec, dtype=complex)


def _apply_gate(state, n, mat, targets):
    k = len(targets)
    if mat.shape != (2 ** k, 2 ** k):
        raise ValueError("gate size does not match target count")
    for t in targets:
        if not 0 <= t < n:
            raise ValueError(f"target {t} out of range")
    tensor_state = state.reshape((2,) * n)
    rest = [a for a in range(n) if a not in targets]
    perm = list(targets) + rest
    moved = np.transpose(tensor_state, perm).reshape(2 ** k, -1)
    moved = mat @ moved
    back = moved.reshape([2] * n)
    inv = np.argsort(perm)
    return np.transpose(back, inv).reshape(-1)


def _measure(state, n, target, rng):
    tensor_state = state.reshape((2,) * n)
    moved = np.moveaxis(tensor_state, target, 0).reshape(2, -1)
    p0 = float(np.sum(np.abs(moved[0]) ** 2))
    outcome = 0 if rng.uniform() < p0 else 1
    prob = p0 if outcome == 0 else 1.0 - p0
    moved[1 - outcome] = 0.0
    moved = moved / np.sqrt(prob)
    back = np.moveaxis(moved.reshape((2,) * n), 0, target)
    return back.reshape(-1), outcome, prob


@dataclass
class RunResult:
    state: np.ndarray
    bits: dict
    probability: float  # probability of the realized measurement branch


def simulate(circuit, input_state, seed=0):
    """Run a circuit on a statevector; deterministic given the seed."""
    rng = rng_from(seed)
    n = circuit.qubit_count
    state = np.asarray(input_state, dtype=complex).ravel().copy()
    if state.size != 2 ** n:
        raise ValueError("input state size does not match qubit count")
    bits = {}
    prob = 1.0
    for step in circuit.steps:
        if isinstance(step, Measure):
            state, outcome, p = _measure(state, n, step.target, rng)
            bits[step.bit] = outcome
            prob *= p
        else:
            if step.control_bit is not None:
                if step.control_bit not in bits:
                    raise ValueError("classical control references an unset bit")
                if bits[step.control_bit] == 0:
                    continue
            state = _apply_gate(state, n, _gate_matrix(step.matrix_or_name), step.targets)
    return RunResult(state, bits, prob)


# ---------------------------------------------------------------------------
# superdense coding
# ---------------------------------------------------------------------------

_BELL = (np.kron(ket(0, 2), ket(0, 2)) + np.kron(ket(1, 2), ket(1, 2))) / np.sqrt(2)

_SUPERDENSE_ENCODING = {
    "00": PAULIS[0],
    "01": SIGMA_X,
    "10": SIGMA_Z,
    "11": 1j * SIGMA_Y,
}

_BELL_BASIS = np.array(
    [
        [1, 0, 0, 1],
        [0, 1, 1, 0],
        [1, 0, 0, -1],
        [0, 1, -1, 0],
    ],
    dtype=complex,
).T / np.sqrt(2)  # columns: encoded states for 00, 01, 10, 11


def superdense_encoded_state(bits):
    """Two-qubit state after the sender applies her encoding gate."""
    if bits not in _SUPERDENSE_ENCODING:
        raise ValueError("bits must be two characters of 0/1")
    gate = _SUPERDENSE_ENCODING[bits]
    return np.kron(gate, np.eye(2, dtype=complex)) @ _BELL


def superdense(bits):
    """Decode two classical bits sent through a shared pair; returns the
    decoded string (always equal to the input)."""
    encoded = superdense_encoded_state(bits)
    overlaps = np.abs(_BELL_BASIS.conj().T @ encoded) ** 2
    outcome = int(np.argmax(overlaps))
    if overlaps[outcome] < 1 - 1e-12:
        raise RuntimeError("encoded state is not a Bell basis element")
    return format(outcome, "02b")


def superdense_intercept_state(bits):
    """Reduced state of the transmitted qubit alone: I/2 for every message."""
    return partial_trace(projector(superdense_encoded_state(bits)), (2, 2), 0)


# ---------------------------------------------------------------------------
# teleportation
# ---------------------------------------------------------------------------

def teleport_circuit(remove_measurement=False):
    """Three-qubit teleportation circuit: data 0, ancilla 1, target 2.

    The entangling stage turns |00> on (ancilla, target) into a shared
    pair; the measuring stage rotates the Bell basis of (data, ancilla)
    into the computational basis.  With remove_measurement=True the
    measurement is replaced by fully quantum controls, which still
    transfers the data state to the target.
    """
    c = Circuit(3)
    c.gate("RY90", 2)
    c.gate("CNOT", 2, 1)  # control target-qubit, flip ancilla
    c.gate("CNOT", 0, 1)  # control data, flip ancilla
    c.gate("RY90M", 0)
    if remove_measurement:
        c.gate("CNOT", 1, 2)
        crtl_z = np.diag([1.0, 1, 1, -1]).astype(complex)
        c.gate(crtl_z, 0, 2)
    else:
        c.measure(0, 0)
        c.measure(1, 1)
        c.gate("X", 2, control_bit=1)
        c.gate("Z", 2, control_bit=0)
    return c


def teleport(psi, seed=0):
    """Teleport a single-qubit state; returns (target state, bits, branch
    probability)."""
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size != 2:
        raise ValueError("input must be a single-qubit state")
    start = tensor(psi, ket(0, 2), ket(0, 2))
    result = simulate(teleport_circuit(), start, seed)
    rho = projector(result.state)
    bob = partial_trace(rho, (2, 2, 2), 2)
    bits = (result.bits[0], result.bits[1])
    return bob, bits, result.probability


def teleport_branches(psi):
    """All four measurement branches: list of (bits, probability, target
    state after correction)."""
    psi = np.asarray(psi, dtype=complex).ravel()
    start = tensor(psi, ket(0, 2), ket(0, 2))
    out = []
    for b0 in (0, 1):
        for b1 in (0, 1):
            circuit = teleport_circuit()
            # replace sampling with post-selection on (b0, b1)
            state = start.copy()
            n = 3
            for step in circuit.steps[:4]:
                state = _apply_gate(state, n, _gate_matrix(step.matrix_or_name), step.targets)
            for target, want in ((0, b0), (1, b1)):
                tensor_state = state.reshape((2,) * n)
                moved = np.moveaxis(tensor_state, target, 0).reshape(2, -1).copy()
                moved[1 - want] = 0.0
                state = np.moveaxis(moved.reshape((2,) * n), 0, target).reshape(-1)
            prob = float(np.vdot(state, state).real)
            state = state / np.sqrt(prob)
            if b1:
                state = _apply_gate(state, n, SIGMA_X, (2,))
            if b0:
                state = _apply_gate(state, n, SIGMA_Z, (2,))
            bob = partial_trace(projector(state), (2, 2, 2), 2)
            out.append(((b0, b1), prob, bob))
    return out


def teleport_as_operations():
    """The four branch operations relating input to pre-correction output:
    N_m(rho) = sigma_m rho sigma_m / 4, summing to the full randomizer."""
    from .capacity import ObservedChannel

    return ObservedChannel([quantum_op([s / 2]) for s in PAULIS])
