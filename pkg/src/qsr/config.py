"""Tolerances and hard caps shared across the package.

Caps can be raised with the ``QSR_CAP_OVERRIDE`` environment variable, e.g.
``QSR_CAP_OVERRIDE="sequence_cap=5000000,eigen_cap=16384"``. Raising caps is
unsafe: exhaustive enumerations grow exponentially and nothing will stop them.
"""

from __future__ import annotations

import dataclasses
import os

STATE_TOL = 1e-10
CHANNEL_TOL = 1e-9
EIG_CLAMP = 1e-14
INEQ_SLACK = 1e-9
LP_FEAS_TOL = 1e-8


class CapExceeded(RuntimeError):
    """Raised when a computation would exceed a configured desk-scale cap."""


@dataclasses.dataclass(frozen=True)
class Caps:
    tensor_dim: int = 256
    sequence_cap: int = 1_000_000
    eigen_cap: int = 4096
    lp_variables: int = 20_000
    clifford_qubits: int = 2


def _parse_override(text: str) -> dict[str, int]:
    out: dict[str, int] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in {f.name for f in dataclasses.fields(Caps)}:
            raise ValueError(f"unknown cap {key!r} in QSR_CAP_OVERRIDE")
        out[key] = int(value)
    return out


def get_caps() -> Caps:
    """Current caps, honouring ``QSR_CAP_OVERRIDE``."""
    override = os.environ.get("QSR_CAP_OVERRIDE", "")
    caps = Caps(**_parse_override(override)) if override else Caps()
    for field in dataclasses.fields(caps):
        if getattr(caps, field.name) <= 0:
            raise ValueError(f"cap {field.name} must be positive")
    return caps


@dataclasses.dataclass(frozen=True)
class TypicalityConfig:
    # literal: p(x) = 0 <=> N(x|w) = 0; relaxed: only p(x) = 0 => N(x|w) = 0
    relaxed: bool = False


DEFAULT_TYPICALITY = TypicalityConfig()
