"""JSON encoding of complex matrices: entries as [re, im] pairs, row-major."""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from qsr.coding.cet import CETCode
from qsr.qcore.channels import Channel, SubChannel


def encode_matrix(m) -> list:
    arr = np.asarray(m, dtype=complex)
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def decode_matrix(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.shape[-1] != 2:
        raise ValueError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def encode_map(ch: SubChannel) -> dict:
    return {
        "dim_in": ch.dim_in,
        "dim_out": ch.dim_out,
        "trace_preserving": isinstance(ch, Channel),
        "kraus": [encode_matrix(k) for k in ch.kraus],
    }


def decode_map(data: dict) -> SubChannel:
    kraus = np.stack([decode_matrix(k) for k in data["kraus"]])
    cls = Channel if data.get("trace_preserving", True) else SubChannel
    return cls(kraus)


def canonical_json(obj: Any) -> str:
    """Stable text form: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def encode_cet(code: CETCode) -> dict:
    return {
        "kind": "cet",
        "encoders": [encode_map(e) for e in code.encoders],
        "decoders": [encode_map(r) for r in code.decoders],
    }


def decode_cet(data: dict) -> CETCode:
    if data.get("kind") != "cet":
        raise ValueError("not a CET code bundle")
    return CETCode([decode_map(e) for e in data["encoders"]], [decode_map(r) for r in data["decoders"]])
