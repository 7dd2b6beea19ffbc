from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from qsr.config import CHANNEL_TOL
from qsr.qcore.linalg import DimensionError, hermitian_part


class Povm:
    """Finite POVM: effects 0 <= Λ_m <= I summing to the identity."""

    def __init__(self, effects: Sequence[np.ndarray], tol: float = CHANNEL_TOL):
        effects = [hermitian_part(np.asarray(e, dtype=complex)) for e in effects]
        if not effects:
            raise ValueError("POVM needs at least one effect")
        dims = {e.shape for e in effects}
        if len(dims) != 1 or effects[0].shape[0] != effects[0].shape[1]:
            raise DimensionError(f"effects have inconsistent shapes {sorted(dims)}")
        d = effects[0].shape[0]
        for m, e in enumerate(effects):
            ev = np.linalg.eigvalsh(e)
            if ev[0] < -tol or ev[-1] > 1 + tol:
                raise ValueError(f"effect {m} has spectrum outside [0, 1]")
        dev = np.max(np.abs(sum(effects) - np.eye(d)))
        if dev > tol:
            raise ValueError(f"effects sum to identity only up to {dev:.3e}")
        self.effects = tuple(effects)

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    def __len__(self) -> int:
        return len(self.effects)

    def probabilities(self, rho: np.ndarray) -> np.ndarray:
        return np.array([np.trace(e @ rho).real for e in self.effects])
