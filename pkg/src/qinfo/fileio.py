"""Structured-text file formats for matrices, states and channels.

The format is JSON with a fixed canonical key order and floats rendered at
17 significant digits, so serialize(parse(text)) == text for canonical
files and parse(serialize(x)) reproduces x bit for bit.
"""

from __future__ import annotations

import json

import numpy as np

from .core import validate_density
from .ops import QuantumOperation, quantum_op


class FormatError(ValueError):
    """Malformed file, dimension mismatch, or violated invariant; the
    message names the offending field."""


def _fmt(x):
    return format(float(x), ".17g")


def _render(obj, indent=0):
    pad = "  " * indent
    if isinstance(obj, dict):
        items = []
        for key, value in obj.items():
            items.append(f'{pad}  "{key}": {_render_inline(value, indent + 1)}')
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise TypeError(type(obj))


def _render_inline(value, indent):
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _fmt(value)
    if isinstance(value, list):
        parts = [_render_inline(v, indent) for v in value]
        return "[" + ", ".join(parts) + "]"
    if isinstance(value, dict):
        return _render(value, indent)
    raise TypeError(type(value))


def _matrix_payload(mat, dims=None):
    mat = np.asarray(mat, dtype=complex)
    payload = {"dims": [int(mat.shape[0]), int(mat.shape[1])]}
    if dims is not None:
        payload["shape"] = [int(d) for d in dims]
    payload["data"] = [[float(x.real), float(x.imag)] for x in mat.reshape(-1)]
    return payload


def _matrix_from_payload(payload, path="matrix"):
    try:
        rows, cols = payload["dims"]
    except (KeyError, TypeError, ValueError):
        raise FormatError(f"{path}.dims: expected [rows, cols]") from None
    data = payload.get("data")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise FormatError(f"{path}.data: expected {rows * cols} entries")
    flat = []
    for i, pair in enumerate(data):
        if not isinstance(pair, list) or len(pair) != 2:
            raise FormatError(f"{path}.data[{i}]: expected [re, im]")
        flat.append(pair[0] + 1j * pair[1])
    mat = np.array(flat, dtype=complex).reshape(rows, cols)
    shape = payload.get("shape")
    if shape is not None:
        if int(np.prod(shape)) != rows:
            raise FormatError(f"{path}.shape: product does not match rows")
        shape = tuple(int(d) for d in shape)
    return mat, shape


def serialize_matrix(mat, dims=None, kind="matrix"):
    payload = {"kind": kind}
    payload.update(_matrix_payload(mat, dims))
    return _render(payload) + "\n"


def serialize_state(rho, dims=None):
    validate_density(rho)
    return serialize_matrix(rho, dims, kind="density")


def serialize_channel(op):
    payload = {
        "kind": "channel",
        "in_shape": [int(d) for d in op.in_dims],
        "out_shape": [int(d) for d in op.out_dims],
        "kraus": [_matrix_payload(k) for k in op.kraus],
    }
    return _render(payload) + "\n"


def parse(text):
    """Parse a structured-text payload into a matrix, density operator
    (matrix plus validation) or QuantumOperation."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid structured text: {exc}") from None
    kind = payload.get("kind")
    if kind == "channel":
        return _parse_channel(payload)
    if kind in ("matrix", "density", None):
        mat, shape = _matrix_from_payload(payload)
        if kind == "density":
            try:
                validate_density(mat)
            except ValueError as exc:
                raise FormatError(f"density invariant violated: {exc}") from None
        return mat
    raise FormatError(f"kind: unknown payload kind '{kind}'")


def _parse_channel(payload):
    for key in ("in_shape", "out_shape", "kraus"):
        if key not in payload:
            raise FormatError(f"{key}: missing")
    kraus = []
    for i, item in enumerate(payload["kraus"]):
        mat, _ = _matrix_from_payload(item, path=f"kraus[{i}]")
        kraus.append(mat)
    try:
        return quantum_op(kraus, payload["in_shape"], payload["out_shape"])
    except ValueError as exc:
        raise FormatError(f"kraus: {exc}") from None


def load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


def save(path, obj, dims=None):
    if isinstance(obj, QuantumOperation):
        text = serialize_channel(obj)
    else:
        text = serialize_matrix(obj, dims)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
