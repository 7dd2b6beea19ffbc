"""Classical message codes for cq channels decoded by the pretty-good measurement."""

from __future__ import annotations

import dataclasses
from collections.abc import Sequence

import numpy as np

from qsr.config import DEFAULT_TYPICALITY, TypicalityConfig
from qsr.qcore.channels import SubChannel
from qsr.qcore.linalg import DimensionError, hermitian_part, psd_inv_sqrt
from qsr.qcore.povm import Povm
from qsr.qcore.random import rng_from
from qsr.typicality import Word, is_typical, product_state, typical_set

PGM_CUTOFF = 1e-12


def pretty_good_measurement(states: Sequence[np.ndarray], residual_to: int = 0) -> Povm:
    """Λ_m = S^{-1/2} σ_m S^{-1/2} with S = Σ σ_m; I - ΣΛ_m is added to ``residual_to``."""
    if not states:
        raise ValueError("need at least one state")
    states = [hermitian_part(np.asarray(s, dtype=complex)) for s in states]
    total = sum(states)
    inv = psd_inv_sqrt(total, PGM_CUTOFF)
    effects = [hermitian_part(inv @ s @ inv) for s in states]
    d = total.shape[0]
    effects[residual_to] = effects[residual_to] + hermitian_part(np.eye(d) - sum(effects))
    return Povm(effects, tol=1e-8)


@dataclasses.dataclass
class ClassicalCode:
    codewords: list[Word]
    decoder: Povm
    outputs: list[np.ndarray]  # decoding target σ_{u_m}, one per message
    success: np.ndarray  # shape (n_channels, M): tr(σ^{(s)}_{u_m} Λ_m)
    seed: int | None = None

    @property
    def n_messages(self) -> int:
        return len(self.codewords)

    @property
    def blocklength(self) -> int:
        return len(self.codewords[0])

    def min_success(self) -> float:
        return float(self.success.min())

    def as_dict(self) -> dict:
        return {
            "codewords": [list(w) for w in self.codewords],
            "success": self.success.tolist(),
            "min_success": self.min_success(),
            "seed": self.seed,
        }


def codeword_output(cq_map: Sequence[np.ndarray], ch: SubChannel, word: Sequence[int]) -> np.ndarray:
    """(N ∘ V)^{⊗n}(u) as a product state in word order."""
    return product_state([ch(v) for v in cq_map], word)


def _as_channel_list(channels) -> list[SubChannel]:
    if isinstance(channels, SubChannel):
        return [channels]
    out = list(channels)
    if not out:
        raise ValueError("need at least one channel")
    return out


def sample_codewords(
    p,
    delta: float,
    n: int,
    m: int,
    rng=None,
    replace: bool = True,
    config: TypicalityConfig = DEFAULT_TYPICALITY,
) -> list[Word]:
    """Draw ``m`` words i.i.d. from p^n conditioned on the typical set."""
    words = typical_set(p, delta, n, config)
    if not words:
        raise ValueError("typical set is empty; increase n or δ, or use relaxed typicality")
    if not replace and m > len(words):
        raise ValueError(f"M={m} exceeds the {len(words)} distinct typical words")
    p = np.asarray(p, dtype=float)
    weights = np.array([np.prod(p[list(w)]) for w in words])
    weights = weights / weights.sum()
    idx = rng_from(rng).choice(len(words), size=m, replace=replace, p=weights)
    return [words[i] for i in idx]


def pgm_code(
    cq_map: Sequence[np.ndarray],
    channels,
    p,
    delta: float,
    n: int,
    m: int,
    seed: int | None = 0,
    replace: bool = True,
    config: TypicalityConfig = DEFAULT_TYPICALITY,
    codewords: Sequence[Word] | None = None,
) -> ClassicalCode:
    """Random typical codewords with a pretty-good-measurement decoder.

    With several channels the decoder is built from the channel-averaged
    outputs; success is reported for each channel and message.
    """
    if m < 1:
        raise ValueError("M must be >= 1")
    chans = _as_channel_list(channels)
    cq_map = [np.asarray(v, dtype=complex) for v in cq_map]
    if len(cq_map) != len(np.atleast_1d(p)):
        raise DimensionError("cq map and distribution have different alphabets")
    if codewords is None:
        words = sample_codewords(p, delta, n, m, np.random.default_rng(seed), replace, config)
    else:
        words = [tuple(int(x) for x in w) for w in codewords]
        if len(words) != m or any(len(w) != n for w in words):
            raise ValueError("supplied codewords do not match (M, n)")
        bad = [w for w in words if not is_typical(w, p, delta, config)]
        if bad:
            raise ValueError(f"codeword {bad[0]} is not typical")
    per_channel = [[codeword_output(cq_map, ch, w) for w in words] for ch in chans]
    targets = [sum(outs[i] for outs in per_channel) / len(chans) for i in range(m)]
    povm = pretty_good_measurement(targets)
    success = np.array(
        [[np.trace(outs[i] @ povm.effects[i]).real for i in range(m)] for outs in per_channel]
    )
    return ClassicalCode(words, povm, targets, success, seed)
