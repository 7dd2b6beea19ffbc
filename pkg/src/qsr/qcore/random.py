"""Seeded random states, unitaries, channels and POVM effects."""

from __future__ import annotations

import numpy as np

from qsr.qcore.channels import Channel, SubChannel
from qsr.qcore.linalg import psd_inv_sqrt


def rng_from(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_pure(dim: int, rng) -> np.ndarray:
    rng = rng_from(rng)
    v = ginibre(rng, dim, 1)[:, 0]
    return v / np.linalg.norm(v)


def random_density(dim: int, rng, rank: int | None = None) -> np.ndarray:
    """Hilbert-Schmidt distributed state (rank = dim) or induced measure of lower rank."""
    rng = rng_from(rng)
    g = ginibre(rng, dim, rank or dim)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(dim: int, rng) -> np.ndarray:
    """Haar unitary via QR with phase correction."""
    rng = rng_from(rng)
    q, r = np.linalg.qr(ginibre(rng, dim, dim))
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_isometry(dim_in: int, dim_out: int, rng) -> np.ndarray:
    rng = rng_from(rng)
    q, r = np.linalg.qr(ginibre(rng, dim_out, dim_in))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_channel(dim_in: int, dim_out: int, n_kraus: int, rng) -> Channel:
    """Channel from a Haar isometry H_in -> H_out ⊗ C^n_kraus."""
    v = random_isometry(dim_in, dim_out * n_kraus, rng)
    kraus = v.reshape(dim_out, n_kraus, dim_in).transpose(1, 0, 2)
    return Channel(kraus)


def random_subchannel(dim_in: int, dim_out: int, n_kraus: int, rng) -> SubChannel:
    """Random channel followed by a random contraction on the input side."""
    rng = rng_from(rng)
    ch = random_channel(dim_in, dim_out, n_kraus, rng)
    c = ginibre(rng, dim_in, dim_in)
    c /= np.linalg.norm(c, 2) * (1.0 + rng.random())
    return SubChannel(np.einsum("kij,jl->kil", ch.kraus, c))


def random_effect(dim: int, rng) -> np.ndarray:
    """Random 0 <= Λ <= I with a spread spectrum."""
    rng = rng_from(rng)
    u = random_unitary(dim, rng)
    lam = rng.random(dim)
    return (u * lam) @ u.conj().T


def random_povm(dim: int, n_outcomes: int, rng) -> list[np.ndarray]:
    rng = rng_from(rng)
    raw = [g @ g.conj().T for g in (ginibre(rng, dim, dim) for _ in range(n_outcomes))]
    s = psd_inv_sqrt(sum(raw))
    return [s @ e @ s for e in raw]
