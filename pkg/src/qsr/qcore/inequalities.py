"""Executable versions of auxiliary inequalities.

Each checker takes a dict instance, evaluates both sides exactly and returns
an :class:`InequalityReport`. ``slack`` is the signed margin by which the
inequality holds (negative means violated); ``holds`` allows ``INEQ_SLACK``
of round-off.

Available ids:

``coherent_continuity``
    |I(A⟩B,ρ) - I(A⟩B,σ)| <= 2/e + 4 log r √(1 - F(ρ,σ)), r = dim(A ⊗ B).
``pure_fidelity_shift``
    F(Ψ,ρ) >= F(Ψ,σ) - ½‖ρ - σ‖₁ for pure Ψ.
``entrywise_sqrt``
    Σ_{jl} (1/N) √(L_jl D_jl) <= 2 Σ_j √(L_jj D_jj) under the diagonal
    dominance hypotheses on L and D.
``projection_recovery``
    F_e(ρ, D∘Q∘A) >= 1 - ε implies F_e(ρ, D∘A) >= 1 - 3ε.
``gentle_measurement``
    tr(Λρ) >= 1 - ε implies ‖ρ - √Λρ√Λ / tr(Λρ)‖₁ <= 2√ε.
``average_product``
    mean(a) >= 1 - ε and mean(b) >= 1 - ε imply mean(a·b) >= 1 - 2ε.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from qsr.config import INEQ_SLACK
from qsr.qcore.channels import Channel, SubChannel, entanglement_fidelity
from qsr.qcore.linalg import (
    coherent_information_state,
    fidelity,
    psd_sqrt,
    trace_norm,
)
from qsr.qcore.random import (
    random_channel,
    random_density,
    random_effect,
    random_pure,
    random_unitary,
    rng_from,
)


class MalformedInstance(ValueError):
    """Instance does not match the signature or hypotheses of the inequality."""


@dataclasses.dataclass(frozen=True)
class InequalityReport:
    lemma_id: str
    lhs: float
    rhs: float
    relation: str
    holds: bool
    slack: float

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def _report(lemma_id: str, lhs: float, rhs: float, relation: str) -> InequalityReport:
    slack = rhs - lhs if relation == "<=" else lhs - rhs
    return InequalityReport(lemma_id, float(lhs), float(rhs), relation, bool(slack >= -INEQ_SLACK), float(slack))


def _get(instance: dict, *keys):
    try:
        return [instance[k] for k in keys]
    except KeyError as exc:
        raise MalformedInstance(f"instance is missing field {exc.args[0]!r}") from None


def coherent_continuity(instance: dict) -> InequalityReport:
    rho, sigma, dims = _get(instance, "rho", "sigma", "dims")
    dims = tuple(int(d) for d in dims)
    r = dims[0] * dims[1]
    if rho.shape != (r, r) or sigma.shape != (r, r):
        raise MalformedInstance("states do not match dims")
    lhs = abs(coherent_information_state(rho, dims) - coherent_information_state(sigma, dims))
    f = fidelity(rho, sigma)
    rhs = 2.0 / math.e + 4.0 * math.log2(r) * math.sqrt(max(0.0, 1.0 - f))
    return _report("coherent_continuity", lhs, rhs, "<=")


def pure_fidelity_shift(instance: dict) -> InequalityReport:
    psi, rho, sigma = _get(instance, "psi", "rho", "sigma")
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if rho.shape != (psi.size, psi.size) or sigma.shape != rho.shape:
        raise MalformedInstance("states do not match the pure vector")
    lhs = fidelity(psi, rho)
    rhs = fidelity(psi, sigma) - 0.5 * trace_norm(rho - sigma)
    return _report("pure_fidelity_shift", lhs, rhs, ">=")


def entrywise_sqrt(instance: dict) -> InequalityReport:
    big_l, big_d = (np.asarray(m, dtype=float) for m in _get(instance, "L", "D"))
    n = big_l.shape[0]
    if big_l.shape != (n, n) or big_d.shape != (n, n):
        raise MalformedInstance("L and D must be square of equal size")
    if (big_l < 0).any() or (big_d < 0).any():
        raise MalformedInstance("entries must be non-negative")
    dl, dd = np.diag(big_l), np.diag(big_d)
    tol = 1e-12
    if (big_l > dl[:, None] + tol).any() or (big_l > dl[None, :] + tol).any():
        raise MalformedInstance("L violates L_jl <= min(L_jj, L_ll)")
    if (big_d > np.maximum(dd[:, None], dd[None, :]) + tol).any():
        raise MalformedInstance("D violates D_jl <= max(D_jj, D_ll)")
    lhs = np.sum(np.sqrt(big_l * big_d)) / n
    rhs = 2.0 * np.sum(np.sqrt(dl * dd))
    return _report("entrywise_sqrt", lhs, rhs, "<=")


def projection_recovery(instance: dict) -> InequalityReport:
    rho, enc, dec, q = _get(instance, "rho", "encoder", "decoder", "projection")
    if not isinstance(enc, SubChannel) or not isinstance(dec, SubChannel):
        raise MalformedInstance("encoder and decoder must be channels")
    q = np.asarray(q, dtype=complex)
    if np.max(np.abs(q @ q - q)) > 1e-9 or np.max(np.abs(q - q.conj().T)) > 1e-9:
        raise MalformedInstance("projection is not an orthogonal projection")
    q_map = SubChannel(q[None], check=False)
    eps = 1.0 - entanglement_fidelity(rho, dec.compose(q_map).compose(enc))
    lhs = entanglement_fidelity(rho, dec.compose(enc))
    return _report("projection_recovery", lhs, 1.0 - 3.0 * eps, ">=")


def gentle_measurement(instance: dict) -> InequalityReport:
    rho, effect = _get(instance, "rho", "effect")
    effect = np.asarray(effect, dtype=complex)
    ev = np.linalg.eigvalsh(0.5 * (effect + effect.conj().T))
    if ev[0] < -1e-10 or ev[-1] > 1 + 1e-10:
        raise MalformedInstance("effect must satisfy 0 <= Λ <= I")
    p = np.trace(effect @ rho).real
    eps = max(0.0, 1.0 - p)
    if eps >= 1.0:
        raise MalformedInstance("tr(Λρ) must be positive")
    root = psd_sqrt(effect)
    post = root @ rho @ root / p
    return _report("gentle_measurement", trace_norm(rho - post), 2.0 * math.sqrt(eps), "<=")


def average_product(instance: dict) -> InequalityReport:
    a, b = (np.asarray(v, dtype=float) for v in _get(instance, "a", "b"))
    if a.shape != b.shape or a.ndim != 1 or a.size == 0:
        raise MalformedInstance("a and b must be equal-length non-empty lists")
    if (a < 0).any() or (a > 1).any() or (b < 0).any() or (b > 1).any():
        raise MalformedInstance("entries must lie in [0, 1]")
    eps = instance.get("eps")
    if eps is None:
        eps = max(1.0 - a.mean(), 1.0 - b.mean())
    elif a.mean() < 1 - eps - 1e-12 or b.mean() < 1 - eps - 1e-12:
        raise MalformedInstance("averages do not meet the stated ε")
    return _report("average_product", float(np.mean(a * b)), 1.0 - 2.0 * eps, ">=")


CHECKERS = {
    "coherent_continuity": coherent_continuity,
    "pure_fidelity_shift": pure_fidelity_shift,
    "entrywise_sqrt": entrywise_sqrt,
    "projection_recovery": projection_recovery,
    "gentle_measurement": gentle_measurement,
    "average_product": average_product,
}


def inequality_oracle(lemma_id: str, instance: dict) -> InequalityReport:
    try:
        checker = CHECKERS[lemma_id]
    except KeyError:
        raise MalformedInstance(f"unknown inequality {lemma_id!r}; known: {sorted(CHECKERS)}") from None
    return checker(instance)


# --------------------------------------------------------------------------
# random instance generators


def _near_pair(rng, dim):
    """A random state and a perturbation of it, so fidelity-based bounds are not vacuous."""
    rho = random_density(dim, rng)
    t = rng.random() ** 3
    return rho, (1 - t) * rho + t * random_density(dim, rng)


def sample_instance(lemma_id: str, rng, dim: int | None = None) -> dict:
    rng = rng_from(rng)
    if lemma_id == "coherent_continuity":
        da, db = (int(x) for x in rng.integers(1, 4, size=2)) if dim is None else (2, dim // 2)
        rho, sigma = _near_pair(rng, da * db)
        return {"rho": rho, "sigma": sigma, "dims": (da, db)}
    d = int(dim or rng.integers(2, 5))
    if lemma_id == "pure_fidelity_shift":
        rho, sigma = _near_pair(rng, d)
        return {"psi": random_pure(d, rng), "rho": rho, "sigma": sigma}
    if lemma_id == "entrywise_sqrt":
        n = d
        dl = rng.random(n)
        big_l = rng.random((n, n)) * np.minimum(dl[:, None], dl[None, :])
        np.fill_diagonal(big_l, dl)
        dd = rng.random(n) * (rng.random(n) < 0.7)
        big_d = rng.random((n, n)) * np.maximum(dd[:, None], dd[None, :])
        np.fill_diagonal(big_d, dd)
        return {"L": big_l, "D": big_d}
    if lemma_id == "projection_recovery":
        u = random_unitary(d, rng)
        noise = rng.random() * 0.3
        enc = _mix_unitary_noise(u, noise, d, rng)
        dec = Channel.unitary(u.conj().T)
        rank = int(rng.integers(1, d + 1))
        basis = random_unitary(d, rng)[:, :rank]
        return {
            "rho": random_density(d, rng),
            "encoder": enc,
            "decoder": dec,
            "projection": basis @ basis.conj().T,
        }
    if lemma_id == "gentle_measurement":
        rho = random_density(d, rng)
        effect = random_effect(d, rng)
        # push most effects towards I so that ε covers small values too
        t = rng.random() ** 2
        effect = (1 - t) * effect + t * np.eye(d)
        return {"rho": rho, "effect": effect}
    if lemma_id == "average_product":
        k = int(rng.integers(1, 20))
        scale = rng.random() ** 2
        return {"a": 1 - scale * rng.random(k), "b": 1 - scale * rng.random(k)}
    raise MalformedInstance(f"unknown inequality {lemma_id!r}")


def _mix_unitary_noise(u, noise, d, rng) -> Channel:
    """(1 - noise) U·U† + noise · random channel, as one Kraus list."""
    other = random_channel(d, d, 2, rng)
    kraus = np.concatenate([np.sqrt(1 - noise) * u[None], np.sqrt(noise) * other.kraus])
    return Channel(kraus)
