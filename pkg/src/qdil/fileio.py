"""JSON encoding of channels and dilations.

A matrix is a list of rows, each row a list of ``[re, im]`` pairs.  Floats
are written with Python's shortest round-tripping ``repr`` (at most 17
significant digits), so emit-then-parse is bit-exact.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import QuantumOperation, new_quantum_operation
from .dilations import FreeDilation, HalmosDilation, InteractingDilation, PowerDilation
from .errors import FormatError

FORMAT_VERSION = "1"


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(data, name: str = "matrix") -> np.ndarray:
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{name}: entries must be [re, im] pairs of numbers") from exc
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise FormatError(f"{name}: expected a non-empty rows x cols x [re, im] array")
    return arr[..., 0] + 1j * arr[..., 1]


def _int(doc: dict, key: str) -> int:
    value = doc.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise FormatError(f"field {key!r} must be an integer")
    return value


def _check_version(doc) -> None:
    if not isinstance(doc, dict):
        raise FormatError("top-level JSON value must be an object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise FormatError(
            f"unsupported format_version {doc.get('format_version')!r}, expected {FORMAT_VERSION!r}"
        )


def channel_to_dict(op: QuantumOperation) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": "channel",
        "dim_in": op.dim_in,
        "dim_out": op.dim_out,
        "kraus": [encode_matrix(e) for e in op.kraus],
    }


def channel_from_dict(doc) -> QuantumOperation:
    """Parse a channel document; shape and trace errors surface as validation errors."""
    _check_version(doc)
    dim_in, dim_out = _int(doc, "dim_in"), _int(doc, "dim_out")
    kraus = doc.get("kraus")
    if not isinstance(kraus, list):
        raise FormatError("field 'kraus' must be a list of matrices")
    mats = [decode_matrix(k, f"kraus[{i}]") for i, k in enumerate(kraus)]
    return new_quantum_operation(mats, dim_in, dim_out)


_DIM_FIELDS = {
    "free": ("dim_l", "dim_d", "dim_in", "dim_out"),
    "interacting": ("dim_r", "dim_l", "dim_in", "dim_out"),
    "halmos": ("dim_s", "dim_r", "dim_l", "dim_in", "dim_out"),
    "power": ("n", "dim_r", "dim_h"),
}
_MATRIX_FIELDS = {
    "free": ("u", "d", "sigma"),
    "interacting": ("u", "phi_r", "sigma"),
    "halmos": ("u", "sigma_s", "w", "phi_r", "sigma"),
    "power": ("w", "sigma_state"),
}
_MODES = {
    FreeDilation: "free",
    InteractingDilation: "interacting",
    HalmosDilation: "halmos",
    PowerDilation: "power",
}


def dilation_mode(dil) -> str:
    try:
        return _MODES[type(dil)]
    except KeyError:
        raise TypeError(f"cannot serialize {type(dil).__name__}") from None


def dilation_to_dict(dil, metadata: dict | None = None) -> dict:
    mode = dilation_mode(dil)
    return {
        "format_version": FORMAT_VERSION,
        "kind": "dilation",
        "mode": mode,
        "dims": {k: int(getattr(dil, k)) for k in _DIM_FIELDS[mode]},
        "matrices": {k: encode_matrix(getattr(dil, k)) for k in _MATRIX_FIELDS[mode]},
        "metadata": dict(metadata or {}),
    }


def dilation_from_dict(doc) -> tuple[object, dict]:
    """Rebuild a dilation and return it with its metadata block."""
    _check_version(doc)
    mode = doc.get("mode")
    if mode not in _DIM_FIELDS:
        raise FormatError(f"unknown dilation mode {mode!r}")
    dims_doc = doc.get("dims")
    mats_doc = doc.get("matrices")
    if not isinstance(dims_doc, dict) or not isinstance(mats_doc, dict):
        raise FormatError("dilation needs 'dims' and 'matrices' objects")
    dims = {k: _int(dims_doc, k) for k in _DIM_FIELDS[mode]}
    mats = {}
    for k in _MATRIX_FIELDS[mode]:
        if k not in mats_doc:
            raise FormatError(f"dilation is missing matrix {k!r}")
        mats[k] = decode_matrix(mats_doc[k], k)
    if "phi_r" in mats:
        mats["phi_r"] = mats["phi_r"].reshape(-1)
    if mode == "free":
        dil = FreeDilation(sigma_basis=(), **mats, **dims)
    elif mode == "interacting":
        dil = InteractingDilation(sigma_basis=(), **mats, **dims)
    elif mode == "halmos":
        dil = HalmosDilation(**mats, **dims)
    else:
        dil = PowerDilation(**mats, **dims)
    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise FormatError("'metadata' must be an object")
    return dil, metadata


def dumps(doc: dict) -> str:
    return json.dumps(doc) + "\n"


def read_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def load_channel(path) -> QuantumOperation:
    return channel_from_dict(read_json(path))


def load_dilation(path):
    return dilation_from_dict(read_json(path))


def write_text(path, text: str) -> None:
    Path(path).write_text(text)
