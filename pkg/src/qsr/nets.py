"""Diamond-distance brackets and finite τ-nets over channel lists.

Coverage claims only ever use upper bounds on the distance, separation claims
only lower bounds, so every reported net statement is sound even though the
exact diamond norm is never computed.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from collections.abc import Sequence

import numpy as np

from qsr.qcore.channels import Channel, SubChannel
from qsr.qcore.linalg import DimensionError, herm_eig, operator_norm, partial_trace, trace_norm
from qsr.qcore.random import random_pure, rng_from

ASCENT_RESTARTS = 20
ASCENT_ITERATIONS = 200
EXACT_COVER_LIMIT = 12


@dataclasses.dataclass(frozen=True)
class DistanceBracket:
    lower: float
    upper: float

    def __post_init__(self):
        if self.lower > self.upper + 1e-9:
            raise ValueError(f"bracket lower {self.lower} exceeds upper {self.upper}")

    def contains(self, value: float, tol: float = 1e-9) -> bool:
        return self.lower - tol <= value <= self.upper + tol

    def as_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper}


def _check_dims(n1: SubChannel, n2: SubChannel) -> None:
    if (n1.dim_in, n1.dim_out) != (n2.dim_in, n2.dim_out):
        raise DimensionError(f"channels act {n1.dim_in}->{n1.dim_out} and {n2.dim_in}->{n2.dim_out}")


def _difference_output(n1: SubChannel, n2: SubChannel, psi: np.ndarray) -> np.ndarray:
    d = n1.dim_in
    return n1.apply_on_second(psi, d) - n2.apply_on_second(psi, d)


def _difference_adjoint(n1: SubChannel, n2: SubChannel, op: np.ndarray) -> np.ndarray:
    """(id ⊗ (N1 - N2))† applied to an operator on C^d_in ⊗ H_out."""
    d, do = n1.dim_in, n1.dim_out
    t = op.reshape(d, do, d, do)
    out = np.zeros((d, n1.dim_in, d, n1.dim_in), dtype=complex)
    for ch, sign in ((n1, 1.0), (n2, -1.0)):
        a = ch.kraus
        out += sign * np.einsum("kai,rasb,kbj->risj", a.conj(), t, a)
    return out.reshape(d * n1.dim_in, d * n1.dim_in)


def _ascent(n1: SubChannel, n2: SubChannel, psi: np.ndarray) -> float:
    best = trace_norm(_difference_output(n1, n2, psi))
    for _ in range(ASCENT_ITERATIONS):
        evals, evecs = herm_eig(_difference_output(n1, n2, psi))
        sign = (evecs * np.where(evals >= 0, 1.0, -1.0)) @ evecs.conj().T
        g_evals, g_evecs = herm_eig(_difference_adjoint(n1, n2, sign))
        psi = g_evecs[:, -1]
        value = trace_norm(_difference_output(n1, n2, psi))
        if value <= best + 1e-13:
            best = max(best, value)
            break
        best = value
    return best


def diamond_upper_bound(n1: SubChannel, n2: SubChannel) -> float:
    """min(‖J‖₁, ‖Tr_out |J|‖_∞) for the unnormalised Choi difference J, capped at 2 for channels."""
    _check_dims(n1, n2)
    j = n1.choi() - n2.choi()
    evals, evecs = herm_eig(j)
    abs_j = (evecs * np.abs(evals)) @ evecs.conj().T
    upper = min(float(np.abs(evals).sum()), operator_norm(partial_trace(abs_j, [n1.dim_in, n1.dim_out], 0)))
    if isinstance(n1, Channel) and isinstance(n2, Channel):
        upper = min(upper, 2.0)
    return upper


def diamond_distance_bracket(n1: SubChannel, n2: SubChannel, seed: int = 0, restarts: int = ASCENT_RESTARTS) -> DistanceBracket:
    """Sound bracket lower <= ‖N1 - N2‖_⋄ <= upper.

    The lower side is the best of the normalised Choi trace norm and an
    alternating ascent over pure inputs with a d_in-dimensional ancilla.
    """
    _check_dims(n1, n2)
    d = n1.dim_in
    j = n1.choi() - n2.choi()
    lower = trace_norm(j) / d
    if lower > 0:
        rng = rng_from(seed)
        starts = [np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)]
        starts += [random_pure(d * d, rng) for _ in range(restarts)]
        for psi in starts:
            lower = max(lower, _ascent(n1, n2, psi))
    upper = diamond_upper_bound(n1, n2)
    # both sides are exact matrix computations; only round-off can cross them
    if lower <= upper + 1e-9:
        lower = min(lower, upper)
    return DistanceBracket(float(lower), float(upper))


@dataclasses.dataclass(frozen=True)
class CoverageCertificate:
    member: int
    center: int
    upper_bound: float  # certified distance, always an upper bound


@dataclasses.dataclass(frozen=True)
class NetReport:
    tau: float
    radius: float
    selected: tuple[int, ...]
    lower: np.ndarray
    upper: np.ndarray
    certificates: tuple[CoverageCertificate, ...]
    ceiling_log10: float  # log10 (6/τ)^{2(d d')^2}, reported only
    exact_minimum: bool

    def as_dict(self) -> dict:
        return {
            "tau": self.tau,
            "radius": self.radius,
            "selected": list(self.selected),
            "size": len(self.selected),
            "ceiling_log10": self.ceiling_log10,
            "exact_minimum": self.exact_minimum,
            "brackets": [
                [{"lower": float(self.lower[i, j]), "upper": float(self.upper[i, j])} for j in range(len(self.upper))]
                for i in range(len(self.upper))
            ],
            "certificates": [dataclasses.asdict(c) for c in self.certificates],
        }


def pairwise_brackets(channels: Sequence[SubChannel], seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    n = len(channels)
    lower = np.zeros((n, n))
    upper = np.zeros((n, n))
    for i, j in itertools.combinations(range(n), 2):
        b = diamond_distance_bracket(channels[i], channels[j], seed=seed)
        lower[i, j] = lower[j, i] = b.lower
        upper[i, j] = upper[j, i] = b.upper
    return lower, upper


def _cover(covers: np.ndarray) -> tuple[tuple[int, ...], bool]:
    n = len(covers)
    if n <= EXACT_COVER_LIMIT:
        for size in range(1, n + 1):
            for subset in itertools.combinations(range(n), size):
                if covers[list(subset)].any(axis=0).all():
                    return subset, True
    chosen: list[int] = []
    covered = np.zeros(n, dtype=bool)
    while not covered.all():
        gains = (covers & ~covered).sum(axis=1)
        best = int(np.argmax(gains))  # argmax picks the lowest index on ties
        chosen.append(best)
        covered |= covers[best]
    return tuple(sorted(chosen)), False


def tau_net(
    channels: Sequence[SubChannel],
    tau: float,
    radius_factor: float = 2.0,
    seed: int = 0,
    brackets: tuple[np.ndarray, np.ndarray] | None = None,
) -> NetReport:
    """Subset of ``channels`` covering every member within radius_factor·τ.

    Coverage uses only the upper side of each bracket. Up to
    ``EXACT_COVER_LIMIT`` channels the smallest cover is found exhaustively,
    which makes the size non-increasing in τ; beyond that a greedy cover is used.
    """
    if tau <= 0:
        raise ValueError("τ must be positive")
    if not channels:
        raise ValueError("need at least one channel")
    lower, upper = brackets if brackets is not None else pairwise_brackets(channels, seed)
    radius = radius_factor * tau
    covers = upper <= radius
    np.fill_diagonal(covers, True)
    selected, exact = _cover(covers)
    certs = []
    for j in range(len(channels)):
        center = min((i for i in selected if covers[i, j]), key=lambda i: (upper[i, j], i))
        certs.append(CoverageCertificate(j, int(center), float(upper[center, j])))
    d, dp = channels[0].dim_in, channels[0].dim_out
    ceiling = 2 * (d * dp) ** 2 * math.log10(6.0 / tau)
    return NetReport(tau, radius, tuple(int(i) for i in selected), lower, upper, tuple(certs), ceiling, exact)
