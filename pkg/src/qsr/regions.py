"""Finite-blocklength inner bounds on the classical/quantum rate region.

For an ensemble (p, Ψ) the evaluation state is
ω = Σ_x p(x) |x><x| ⊗ (id ⊗ N)(Ψ_x), and the rate rectangle has corner
(I(X;B, ω), max(0, I(A⟩BX, ω))). Both coordinates depend on Ψ_x only through
its input marginal ρ_x, so the search below optimises over (p, ρ_x) and
stores a canonical purification as the certificate.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Sequence

import numpy as np
from scipy import optimize

from qsr.config import CapExceeded, get_caps
from qsr.qcore.channels import Channel, SubChannel, coherent_information
from qsr.qcore.linalg import (
    DimensionError,
    Subspace,
    mutual_information,
    partial_trace,
    permute_subsystems,
    projector,
    purify,
    von_neumann_entropy,
)

FRONTIER_RESOLUTION = 1e-4


@dataclasses.dataclass(frozen=True)
class Ensemble:
    """Distribution p over letters and bipartite pure signals Ψ_x on ref ⊗ input."""

    p: np.ndarray
    signals: tuple[np.ndarray, ...]
    input_dim: int

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.ndim != 1 or (p < -1e-12).any() or abs(p.sum() - 1.0) > 1e-9:
            raise ValueError("p must be a probability vector")
        sigs = tuple(np.asarray(s, dtype=complex).reshape(-1) for s in self.signals)
        if len(sigs) != p.size:
            raise ValueError(f"{p.size} probabilities but {len(sigs)} signals")
        sizes = {s.size for s in sigs}
        if len(sizes) != 1 or next(iter(sizes)) % self.input_dim:
            raise DimensionError("signals must share a dimension divisible by input_dim")
        for x, s in enumerate(sigs):
            if abs(np.linalg.norm(s) - 1.0) > 1e-10:
                raise ValueError(f"signal {x} is not normalised")
        object.__setattr__(self, "p", np.clip(p, 0.0, None))
        object.__setattr__(self, "signals", sigs)

    @property
    def ref_dim(self) -> int:
        return self.signals[0].size // self.input_dim

    @property
    def alphabet_size(self) -> int:
        return self.p.size

    def input_states(self) -> list[np.ndarray]:
        """ρ_x = tr_ref Ψ_x."""
        dims = (self.ref_dim, self.input_dim)
        return [partial_trace(projector(s), dims, 1) for s in self.signals]

    @classmethod
    def from_states(cls, p, states: Sequence[np.ndarray]) -> Ensemble:
        """Ensemble whose signals are canonical purifications of the given states."""
        d = states[0].shape[0]
        return cls(np.asarray(p, dtype=float), tuple(purify(s) for s in states), d)

    @classmethod
    def maximally_entangled(cls, p, subspaces: Sequence[Subspace]) -> Ensemble:
        """Φ_x purifying π_{G_x}, reference embedded in C^{input dim}."""
        d = subspaces[0].ambient_dim
        sigs = []
        for g in subspaces:
            amp = np.zeros((d, d), dtype=complex)
            amp[: g.dim, :] = g.basis.T / np.sqrt(g.dim)
            sigs.append(amp.reshape(-1))
        return cls(np.asarray(p, dtype=float), tuple(sigs), d)

    def tensor(self, other: Ensemble) -> Ensemble:
        """Product ensemble on (x, y) with Ψ_x ⊗ Ψ_y reordered to ref1 ref2 ⊗ in1 in2."""
        p = np.outer(self.p, other.p).reshape(-1)
        dims = [self.ref_dim, self.input_dim, other.ref_dim, other.input_dim]
        sigs = tuple(
            permute_subsystems(np.kron(a, b), dims, [0, 2, 1, 3]) for a in self.signals for b in other.signals
        )
        return Ensemble(p, sigs, self.input_dim * other.input_dim)

    def as_dict(self) -> dict:
        from qsr.serialization import encode_matrix

        return {
            "p": [float(v) for v in self.p],
            "input_dim": self.input_dim,
            "signals": [encode_matrix(s) for s in self.signals],
        }


@dataclasses.dataclass(frozen=True)
class RateRectangle:
    r1_max: float
    r2_max: float
    r2_raw: float = 0.0  # signed I(A⟩BX, ω) before clamping

    def __post_init__(self):
        if self.r1_max < -1e-9 or self.r2_max < 0:
            raise ValueError("rate rectangle corners must be non-negative")

    def scaled(self, factor: float) -> RateRectangle:
        return RateRectangle(self.r1_max * factor, self.r2_max * factor, self.r2_raw * factor)

    def contains(self, r1: float, r2: float, tol: float = 0.0) -> bool:
        return -tol <= r1 <= self.r1_max + tol and -tol <= r2 <= self.r2_max + tol


def evaluation_state(ch: SubChannel, e: Ensemble) -> np.ndarray:
    """ω on X ⊗ ref ⊗ B, block diagonal in the classical register."""
    if e.input_dim != ch.dim_in:
        raise DimensionError(f"ensemble input dim {e.input_dim} != channel dim_in {ch.dim_in}")
    blocks = [px * ch.apply_on_second(s, e.ref_dim) for px, s in zip(e.p, e.signals)]
    b = blocks[0].shape[0]
    omega = np.zeros((len(blocks) * b, len(blocks) * b), dtype=complex)
    for x, blk in enumerate(blocks):
        omega[x * b : (x + 1) * b, x * b : (x + 1) * b] = blk
    return omega


def _holevo_and_coherent(ch: SubChannel, p: np.ndarray, states: Sequence[np.ndarray]) -> tuple[float, float]:
    outs = [ch(r) for r in states]
    avg = sum(px * o for px, o in zip(p, outs))
    holevo = von_neumann_entropy(avg) - sum(px * von_neumann_entropy(o) for px, o in zip(p, outs) if px > 0)
    coh = sum(px * coherent_information(r, ch) for px, r in zip(p, states) if px > 0)
    return float(holevo), float(coh)


def rate_rectangle(ch: SubChannel, e: Ensemble) -> RateRectangle:
    """Corner (I(X;B,ω), max(0, Σ_x p(x)[S(B_x) - S(ref B_x)]))."""
    if e.input_dim != ch.dim_in:
        raise DimensionError(f"ensemble input dim {e.input_dim} != channel dim_in {ch.dim_in}")
    r1, r2 = _holevo_and_coherent(ch, e.p, e.input_states())
    return RateRectangle(max(r1, 0.0), max(r2, 0.0), r2)


def rate_rectangle_from_state(ch: SubChannel, e: Ensemble) -> RateRectangle:
    """Same corner evaluated directly on the full evaluation state ω."""
    omega = evaluation_state(ch, e)
    nx, dr, db = e.alphabet_size, e.ref_dim, ch.dim_out
    xb = partial_trace(omega, (nx, dr, db), [0, 2])
    r1 = mutual_information(xb, (nx, db))
    r2 = 0.0
    for x, px in enumerate(e.p):
        if px <= 0:
            continue
        blk = ch.apply_on_second(e.signals[x], dr)
        r2 += px * (von_neumann_entropy(partial_trace(blk, (dr, db), 1)) - von_neumann_entropy(blk))
    return RateRectangle(max(r1, 0.0), max(r2, 0.0), r2)


def compound_rectangle(channels: Sequence[SubChannel], e: Ensemble) -> RateRectangle:
    """Componentwise minimum of the per-channel rectangles."""
    if not channels:
        raise ValueError("compound channel needs at least one member")
    rects = [rate_rectangle(ch, e) for ch in channels]
    return RateRectangle(
        min(r.r1_max for r in rects), min(r.r2_max for r in rects), min(r.r2_raw for r in rects)
    )


def convex_mixture_channel(channels: Sequence[SubChannel], q) -> Channel:
    """N_q = Σ_s q(s) N_s with Kraus operators √q(s) A."""
    q = np.asarray(q, dtype=float)
    if len(channels) != q.size:
        raise ValueError(f"{len(channels)} channels but {q.size} weights")
    if (q < -1e-12).any() or abs(q.sum() - 1.0) > 1e-9:
        raise ValueError("q must be a probability vector")
    kraus = np.concatenate([np.sqrt(max(w, 0.0)) * ch.kraus for w, ch in zip(q, channels) if w > 0])
    return Channel(kraus)


# --------------------------------------------------------------------------
# region search


@dataclasses.dataclass(frozen=True)
class SearchConfig:
    thetas: tuple[float, ...] = tuple(np.round(np.linspace(0.0, 1.0, 11), 10))
    restarts: int = 16
    max_alphabet: int = 2
    max_iter: int = 60
    seed: int = 0
    structured: bool = True


@dataclasses.dataclass(frozen=True)
class Certificate:
    certificate_id: int
    ensemble: Ensemble
    rectangle: RateRectangle  # already scaled by 1/l
    theta: float | None
    origin: str


@dataclasses.dataclass
class RateRegion:
    rectangles: list[RateRectangle]
    certificates: list[Certificate]
    frontier: list[tuple[float, float, int]]  # (R1, R2, certificate id)
    scale: float
    l: int

    def contains(self, r1: float, r2: float, tol: float = 1e-6) -> bool:
        return any(rect.contains(r1, r2, tol) for rect in self.rectangles)

    def frontier_contains(self, r1: float, r2: float, tol: float = 1e-6) -> bool:
        return any(abs(a - r1) <= tol and abs(b - r2) <= tol for a, b, _ in self.frontier)

    def certificate(self, cid: int) -> Certificate:
        return self.certificates[cid]


def _check_region_caps(channels: Sequence[SubChannel], l: int) -> None:
    caps = get_caps()
    for ch in channels:
        if ch.dim_in**l > caps.tensor_dim or ch.dim_out**l > caps.tensor_dim:
            raise CapExceeded(f"dimension {max(ch.dim_in, ch.dim_out)}^{l} exceeds tensor cap {caps.tensor_dim}")
        if ch.n_kraus**l > caps.eigen_cap:
            raise CapExceeded(f"environment dimension {ch.n_kraus}^{l} exceeds eigen cap {caps.eigen_cap}")


def structured_candidates(dim: int) -> list[Ensemble]:
    """Maximally entangled, classical basis and equal-block-split ensembles on C^dim."""
    out = [Ensemble.maximally_entangled([1.0], [Subspace.full(dim)])]
    for k in range(1, dim):
        if dim % k:
            continue
        blocks = dim // k
        subs = [Subspace.span(dim, range(b * k, (b + 1) * k)) for b in range(blocks)]
        out.append(Ensemble.maximally_entangled(np.full(blocks, 1.0 / blocks), subs))
    return out


def _entropy_and_log(sigma: np.ndarray) -> tuple[float, np.ndarray]:
    """S(σ) and log2 σ (eigenvalues clamped away from zero)."""
    evals, evecs = np.linalg.eigh(sigma)
    evals = np.clip(evals, 1e-15, None)
    logs = np.log2(evals)
    return float(-np.sum(evals * logs)), (evecs * logs) @ evecs.conj().T


class _Objective:
    """-(θ·min_s R1 + (1-θ)·max(0, min_s R2)) with its gradient.

    Parameters are softmax logits for p followed by a complex matrix M_x per
    letter (real and imaginary parts), with ρ_x = M_x M_x† / tr(M_x M_x†).
    """

    def __init__(self, channels: Sequence[SubChannel], dim: int, nx: int):
        self.kraus = [ch.kraus for ch in channels]
        self.comp_kraus = [ch.complementary().kraus for ch in channels]
        self.dim = dim
        self.nx = nx

    def unpack(self, params: np.ndarray):
        d, nx = self.dim, self.nx
        logits = params[:nx]
        p = np.exp(logits - logits.max())
        p /= p.sum()
        g = params[nx:].reshape(nx, 2, d, d)
        ms = g[:, 0] + 1j * g[:, 1]
        traces = np.einsum("xij,xij->x", ms, ms.conj()).real
        states = np.einsum("xij,xkj->xik", ms, ms.conj()) / traces[:, None, None]
        return p, list(states), ms, traces

    @staticmethod
    def _apply(kraus, rho):
        return np.einsum("kij,jl,kml->im", kraus, rho, kraus.conj())

    @staticmethod
    def _adjoint(kraus, op):
        return np.einsum("kji,jl,klm->im", kraus.conj(), op, kraus)

    def _channel_terms(self, s: int, p, states):
        """R1, R2 and their gradients in (p, ρ_x) for channel s."""
        a, b = self.kraus[s], self.comp_kraus[s]
        outs = [self._apply(a, r) for r in states]
        envs = [self._apply(b, r) for r in states]
        out_terms = [_entropy_and_log(o) for o in outs]
        env_terms = [_entropy_and_log(e) for e in envs]
        avg = sum(px * o for px, o in zip(p, outs))
        s_avg, log_avg = _entropy_and_log(avg)
        r1 = s_avg - sum(px * t[0] for px, t in zip(p, out_terms))
        r2 = sum(px * (t[0] - u[0]) for px, t, u in zip(p, out_terms, env_terms))
        d1p = np.array(
            [-np.trace(o @ log_avg).real - t[0] for o, t in zip(outs, out_terms)]
        )
        d2p = np.array([t[0] - u[0] for t, u in zip(out_terms, env_terms)])
        d1r, d2r = [], []
        for px, t, u in zip(p, out_terms, env_terms):
            adj_out = self._adjoint(a, t[1])
            d1r.append(px * (-self._adjoint(a, log_avg) + adj_out))
            d2r.append(px * (-adj_out + self._adjoint(b, u[1])))
        return r1, r2, d1p, d2p, d1r, d2r

    def rates(self, p, states) -> tuple[float, float]:
        terms = [self._channel_terms(s, p, states) for s in range(len(self.kraus))]
        return min(t[0] for t in terms), min(t[1] for t in terms)

    def __call__(self, params: np.ndarray, theta: float):
        p, states, ms, traces = self.unpack(params)
        terms = [self._channel_terms(s, p, states) for s in range(len(self.kraus))]
        s1 = min(range(len(terms)), key=lambda s: terms[s][0])
        s2 = min(range(len(terms)), key=lambda s: terms[s][1])
        r1 = terms[s1][0]
        r2 = terms[s2][1]
        value = theta * r1 + (1.0 - theta) * max(r2, 0.0)
        w2 = (1.0 - theta) if r2 > 0 else 0.0
        gp = theta * terms[s1][2] + w2 * terms[s2][3]
        grad_logits = p * (gp - np.dot(p, gp))
        grad_m = []
        for x in range(self.nx):
            gamma = theta * terms[s1][4][x] + w2 * terms[s2][5][x]
            gamma = 0.5 * (gamma + gamma.conj().T)
            gamma = gamma - np.trace(gamma @ states[x]).real * np.eye(self.dim)
            gm = 2.0 * gamma @ ms[x] / traces[x]
            grad_m.append(np.stack([gm.real, gm.imag]))
        grad = np.concatenate([grad_logits, np.stack(grad_m).reshape(-1)])
        return -value, -grad


def _local_ascent(obj: _Objective, theta: float, rng: np.random.Generator, max_iter: int):
    d, nx = obj.dim, obj.nx
    x0 = np.concatenate([rng.normal(size=nx) * 0.5, rng.normal(size=nx * 2 * d * d)])
    res = optimize.minimize(
        obj, x0, args=(theta,), jac=True, method="L-BFGS-B", options={"maxiter": max_iter}
    )
    p, states, _, _ = obj.unpack(res.x)
    return p, states


def inner_region(
    channels: Sequence[SubChannel], l: int, search: SearchConfig | None = None
) -> RateRegion:
    """Union over searched ensembles of the compound rectangles of N_s^{⊗l}, scaled by 1/l."""
    if not channels:
        raise ValueError("compound channel needs at least one member")
    if l < 1:
        raise ValueError("l must be >= 1")
    search = search or SearchConfig()
    _check_region_caps(channels, l)
    powered = [ch.power(l) for ch in channels]
    dim = powered[0].dim_in
    scale = 1.0 / l
    pool: list[tuple[Ensemble, str, float | None]] = []
    if search.structured:
        pool.extend((e, "structured", None) for e in structured_candidates(dim))
    rng = np.random.default_rng(search.seed)
    for nx in range(1, search.max_alphabet + 1):
        obj = _Objective(powered, dim, nx)
        # a single letter carries no classical information, so only R2 matters
        thetas = (0.0,) if nx == 1 else search.thetas
        for theta in thetas:
            for _ in range(search.restarts):
                p, states = _local_ascent(obj, float(theta), rng, search.max_iter)
                pool.append((Ensemble.from_states(p, states), "ascent", float(theta)))
    certificates = []
    for cid, (e, origin, theta) in enumerate(pool):
        rect = compound_rectangle(powered, e).scaled(scale)
        certificates.append(Certificate(cid, e, rect, theta, origin))
    frontier = pareto_frontier([(c.rectangle.r1_max, c.rectangle.r2_max, c.certificate_id) for c in certificates])
    return RateRegion([c.rectangle for c in certificates], certificates, frontier, scale, l)


def pareto_frontier(points: Sequence[tuple[float, float, int]], resolution: float = FRONTIER_RESOLUTION):
    """Non-dominated corners sorted by R1 ascending, R2 descending.

    Among non-dominated points that agree within ``resolution`` in both
    coordinates only one is kept: the one with the larger R1 + R2, then the
    smaller certificate id, so the result is deterministic.
    """
    pts = [(float(r1), float(r2), int(cid)) for r1, r2, cid in points]
    front = [
        p for p in pts
        if not any(q[0] >= p[0] and q[1] >= p[1] and (q[0] > p[0] or q[1] > p[1]) for q in pts)
    ]
    kept: list[tuple[float, float, int]] = []
    for p in sorted(front, key=lambda t: (-(t[0] + t[1]), t[2])):
        if any(abs(p[0] - q[0]) <= resolution and abs(p[1] - q[1]) <= resolution for q in kept):
            continue
        kept.append(p)
    return sorted(kept, key=lambda t: (t[0], -t[1], t[2]))


def certificate_rectangle(channels: Sequence[SubChannel], cert: Certificate, l: int) -> RateRectangle:
    """Re-evaluate a stored certificate from scratch."""
    return compound_rectangle([ch.power(l) for ch in channels], cert.ensemble).scaled(1.0 / l)


def holevo_information(p, outputs: Sequence[np.ndarray]) -> float:
    """χ = S(Σ p σ_x) - Σ p S(σ_x); handy for quick checks."""
    avg = sum(px * o for px, o in zip(p, outputs))
    return von_neumann_entropy(avg) - sum(px * von_neumann_entropy(o) for px, o in zip(p, outputs))


__all__ = [
    "Certificate",
    "Ensemble",
    "RateRectangle",
    "RateRegion",
    "SearchConfig",
    "certificate_rectangle",
    "compound_rectangle",
    "convex_mixture_channel",
    "evaluation_state",
    "inner_region",
    "pareto_frontier",
    "rate_rectangle",
    "rate_rectangle_from_state",
    "structured_candidates",
]
