"""Monte Carlo check of the matrix Chernoff tail for bounded Hermitian samples.

For i.i.d. X_t with 0 <= X_t <= I and E X <= m I, m < a, the probability that
λ_max((1/T) Σ X_t) exceeds a is at most d exp(-2 T (a - m)^2).
"""

from __future__ import annotations

import dataclasses
from collections.abc import Callable

import numpy as np
from scipy.stats import binom, binomtest

from qsr.qcore.random import random_effect, rng_from

Sampler = Callable[[np.random.Generator, int], np.ndarray]
BOUND_TOL = 1e-9
CHUNK = 2000


class SamplerBoundsError(ValueError):
    """A sample left the operator interval [0, I]."""


@dataclasses.dataclass(frozen=True)
class ChernoffReport:
    trials: int
    T: int
    a: float
    m: float
    dim: int
    exceedances: int
    frequency: float
    wilson_low: float
    wilson_high: float
    bound: float
    holds: bool  # the Wilson interval does not sit entirely above the bound

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def chernoff_bound(dim: int, T: int, a: float, m: float) -> float:
    return float(dim * np.exp(-2.0 * T * (a - m) ** 2))


def _check_bounds(samples: np.ndarray) -> None:
    if not np.allclose(samples, np.conj(np.swapaxes(samples, -1, -2)), atol=BOUND_TOL):
        raise SamplerBoundsError("sampler returned a non-Hermitian matrix")
    ev = np.linalg.eigvalsh(samples)
    if ev.min() < -BOUND_TOL or ev.max() > 1 + BOUND_TOL:
        raise SamplerBoundsError(f"sample spectrum [{ev.min():.3g}, {ev.max():.3g}] leaves [0, 1]")


def matrix_chernoff_mc(
    sampler: Sampler,
    T: int,
    a: float,
    trials: int,
    m: float,
    rng=0,
    confidence: float = 0.99,
) -> ChernoffReport:
    """Empirical frequency of λ_max(mean of T samples) > a against the tail bound.

    ``sampler(rng, size)`` returns ``size`` matrices stacked on axis 0. Every
    sample is checked against 0 <= X <= I. ``m`` is the caller's bound on the
    mean; it must satisfy m < a.
    """
    if not m < a:
        raise ValueError("need m < a")
    if T < 1 or trials < 1:
        raise ValueError("T and trials must be positive")
    rng = rng_from(rng)
    hits = 0
    dim = None
    done = 0
    while done < trials:
        batch = min(CHUNK, trials - done)
        x = np.asarray(sampler(rng, batch * T))
        _check_bounds(x)
        dim = x.shape[-1]
        avg = x.reshape(batch, T, dim, dim).mean(axis=1)
        hits += int(np.count_nonzero(np.linalg.eigvalsh(avg)[:, -1] > a))
        done += batch
    ci = binomtest(hits, trials).proportion_ci(confidence, method="wilson")
    bound = chernoff_bound(dim, T, a, m)
    return ChernoffReport(trials, T, a, m, dim, hits, hits / trials, float(ci.low), float(ci.high), bound, bool(ci.low <= bound))


def constant_sampler(value: float, dim: int) -> Sampler:
    def sample(rng, size):
        return np.broadcast_to(value * np.eye(dim), (size, dim, dim)).copy()

    return sample


def coin_flip_sampler(p: float, dim: int) -> Sampler:
    """Diagonal matrices with independent Bernoulli(p) entries."""

    def sample(rng, size):
        bits = (rng.random((size, dim)) < p).astype(float)
        out = np.zeros((size, dim, dim))
        idx = np.arange(dim)
        out[:, idx, idx] = bits
        return out

    return sample


def coin_flip_exceedance(p: float, dim: int, T: int, a: float) -> float:
    """Exact P(λ_max > a) for the coin-flip sampler: 1 - (1 - binomial tail)^dim."""
    k = np.arange(T + 1)
    tail = float(binom.pmf(k[k / T > a], T, p).sum())
    return 1.0 - (1.0 - tail) ** dim


def finite_effect_sampler(effects: np.ndarray) -> Sampler:
    """Uniform draws from a fixed list of effects."""
    effects = np.asarray(effects)

    def sample(rng, size):
        return effects[rng.integers(0, len(effects), size=size)]

    return sample


def random_effect_family(dim: int, count: int, rng) -> tuple[np.ndarray, float]:
    """Random effects and m = λ_max of their uniform mean."""
    rng = rng_from(rng)
    effects = np.stack([random_effect(dim, rng) for _ in range(count)])
    return effects, float(np.linalg.eigvalsh(effects.mean(axis=0))[-1])
