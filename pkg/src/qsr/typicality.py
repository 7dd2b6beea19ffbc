"""Typical sequences, types, frequency-typical projections and reduced operations.

Words are tuples of letter indices ``0..|X|-1``. Every enumeration is
lexicographic, so results are deterministic.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from collections.abc import Iterator, Sequence

import numpy as np

from qsr.config import DEFAULT_TYPICALITY, CapExceeded, TypicalityConfig, get_caps
from qsr.qcore.channels import SubChannel
from qsr.qcore.linalg import DimensionError, Subspace, herm_eig, permute_subsystems, von_neumann_entropy

Word = tuple[int, ...]

# eigenvalues at or below this count as exact zeros for the zero-count rule
ZERO_PROB = 1e-12


@dataclasses.dataclass(frozen=True)
class TypeDistribution:
    """Empirical distribution of a word: counts N(x|x^l) over the alphabet."""

    counts: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise ValueError("type counts must be non-negative")

    @property
    def length(self) -> int:
        return sum(self.counts)

    def frequencies(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float) / self.length

    @classmethod
    def of(cls, word: Sequence[int], alphabet_size: int) -> TypeDistribution:
        counts = [0] * alphabet_size
        for x in word:
            counts[x] += 1
        return cls(tuple(counts))


def _check_distribution(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0 or (p < -1e-12).any() or abs(p.sum() - 1.0) > 1e-9:
        raise ValueError(f"{p!r} is not a probability vector")
    return np.clip(p, 0.0, None)


def is_typical(word: Sequence[int], p, delta: float, config: TypicalityConfig = DEFAULT_TYPICALITY) -> bool:
    p = _check_distribution(p)
    counts = np.bincount(np.asarray(word, dtype=int), minlength=p.size)
    return _counts_typical(counts, p, delta, config)


def _counts_typical(counts: np.ndarray, p: np.ndarray, delta: float, config: TypicalityConfig) -> bool:
    l = counts.sum()
    if np.any(np.abs(counts / l - p) > delta + 1e-15):
        return False
    zero_p = p <= ZERO_PROB
    zero_n = counts == 0
    if config.relaxed:
        return bool(np.all(~zero_p | zero_n))
    return bool(np.all(zero_p == zero_n))


def all_types(alphabet_size: int, l: int) -> list[TypeDistribution]:
    """Every type of length ``l``, lexicographic in the count vector."""
    if l < 1 or alphabet_size < 1:
        raise ValueError("need l >= 1 and a non-empty alphabet")

    def rec(remaining: int, slots: int) -> Iterator[tuple[int, ...]]:
        if slots == 1:
            yield (remaining,)
            return
        for first in range(remaining + 1):
            for rest in rec(remaining - first, slots - 1):
                yield (first,) + rest

    return [TypeDistribution(c) for c in rec(l, alphabet_size)]


def type_class(counts: Sequence[int] | TypeDistribution) -> list[Word]:
    """All words with the given letter counts, in lexicographic order."""
    if isinstance(counts, TypeDistribution):
        counts = counts.counts
    counts = list(counts)
    l = sum(counts)
    caps = get_caps()
    size = multinomial(counts)
    if size > caps.sequence_cap:
        raise CapExceeded(f"type class of size {size} exceeds sequence cap {caps.sequence_cap}")
    out: list[Word] = []

    def rec(prefix: list[int]):
        if len(prefix) == l:
            out.append(tuple(prefix))
            return
        for x, c in enumerate(counts):
            if c:
                counts[x] -= 1
                prefix.append(x)
                rec(prefix)
                prefix.pop()
                counts[x] += 1

    rec([])
    return out


def multinomial(counts: Sequence[int]) -> int:
    out = math.factorial(sum(counts))
    for c in counts:
        out //= math.factorial(c)
    return out


def all_words(alphabet_size: int, l: int) -> Iterator[Word]:
    caps = get_caps()
    if alphabet_size**l > caps.sequence_cap:
        raise CapExceeded(f"{alphabet_size}^{l} words exceed sequence cap {caps.sequence_cap}")
    return itertools.product(range(alphabet_size), repeat=l)


def typical_set(p, delta: float, l: int, config: TypicalityConfig = DEFAULT_TYPICALITY) -> list[Word]:
    """Words whose empirical frequencies are within ``delta`` of ``p``.

    The zero-count rule follows ``config``: literal (p(x) = 0 exactly when
    the letter is absent) or relaxed (absent letters may have p(x) > 0).
    Built type by type, so the cost is the size of the result.
    """
    if delta <= 0:
        raise ValueError("δ must be positive")
    if l < 1:
        raise ValueError("l must be >= 1")
    p = _check_distribution(p)
    good = [t for t in all_types(p.size, l) if _counts_typical(np.array(t.counts), p, delta, config)]
    words: list[Word] = []
    for t in good:
        words.extend(type_class(t))
    return sorted(words)


# --------------------------------------------------------------------------
# frequency-typical projections


@dataclasses.dataclass(frozen=True)
class TypicalProjection:
    projector: np.ndarray
    rank: int
    trace: float  # tr(ρ q)
    phi: float  # smallest φ with q ρ q <= 2^{-(S - lφ)} q at this l
    entropy: float  # S of the underlying tensor state
    length: int

    def operator_bound(self) -> float:
        return 2.0 ** (-(self.entropy - self.length * self.phi))


def _typical_index_mask(spectrum: np.ndarray, delta: float, l: int, config: TypicalityConfig) -> np.ndarray:
    """Boolean mask over eigen-words (row-major over d^l) that are δ-typical for ``spectrum``."""
    d = spectrum.size
    p = np.clip(spectrum, 0.0, None)
    p = p / p.sum()
    p = np.where(p <= ZERO_PROB, 0.0, p)
    p = p / p.sum()
    words = np.array(list(itertools.product(range(d), repeat=l)), dtype=int).reshape(-1, l)
    counts = np.stack([(words == x).sum(axis=1) for x in range(d)], axis=1)
    return np.array([_counts_typical(c, p, delta, config) for c in counts], dtype=bool)


def _check_delta(delta: float) -> None:
    if not 0.0 < delta < 0.5:
        raise ValueError("δ must lie in (0, 1/2)")


def _tensor_cap(total: int) -> None:
    caps = get_caps()
    if total > caps.eigen_cap:
        raise CapExceeded(f"tensor dimension {total} exceeds eigen cap {caps.eigen_cap}")


def _letter_projector(rho: np.ndarray, delta: float, n: int, config: TypicalityConfig) -> np.ndarray:
    """Frequency-typical projection for ρ^{⊗n} in the eigenbasis of ρ."""
    evals, evecs = herm_eig(rho)
    mask = _typical_index_mask(evals, delta, n, config)
    basis = evecs
    for _ in range(n - 1):
        basis = np.kron(basis, evecs)
    cols = basis[:, mask]
    return cols @ cols.conj().T


def _finish(proj: np.ndarray, state: np.ndarray, l: int) -> TypicalProjection:
    rank = int(round(np.trace(proj).real))
    entropy = von_neumann_entropy(state)
    trace = float(np.trace(state @ proj).real)
    if rank == 0:
        phi = 0.0
    else:
        lam_max = max(np.linalg.eigvalsh(proj @ state @ proj)[-1], 0.0)
        phi = 0.0 if lam_max <= 0 else max(0.0, (entropy + math.log2(lam_max)) / l)
    return TypicalProjection(proj, rank, trace, phi, entropy, l)


def typical_projector(
    rho: np.ndarray, delta: float, l: int, config: TypicalityConfig = DEFAULT_TYPICALITY
) -> TypicalProjection:
    """Projection onto the span of eigen-words of ρ^{⊗l} whose eigenvalue index word is typical."""
    _check_delta(delta)
    d = rho.shape[0]
    _tensor_cap(d**l)
    proj = _letter_projector(rho, delta, l, config)
    state = rho
    for _ in range(l - 1):
        state = np.kron(state, rho)
    return _finish(proj, state, l)


def _group_positions(word: Sequence[int]) -> tuple[list[int], list[int]]:
    """Letters in first-occurrence-free sorted order and the permutation grouping them."""
    letters = sorted(set(word))
    order = [i for x in letters for i, y in enumerate(word) if y == x]
    return letters, order


def product_state(states: Sequence[np.ndarray], word: Sequence[int]) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for x in word:
        out = np.kron(out, states[x])
    return out


def typical_projector_product(
    states: Sequence[np.ndarray],
    word: Sequence[int],
    delta: float,
    config: TypicalityConfig = DEFAULT_TYPICALITY,
) -> TypicalProjection:
    """Tensor product over letters x of the typical projections of ρ_x^{⊗N(x|word)}.

    Factors are built with the letters grouped, then moved back into word
    order, so the result commutes with ρ_{x_1} ⊗ ... ⊗ ρ_{x_l}.
    """
    _check_delta(delta)
    word = tuple(int(x) for x in word)
    l = len(word)
    if l == 0:
        raise ValueError("word must be non-empty")
    dims = [states[x].shape[0] for x in word]
    _tensor_cap(int(np.prod(dims)))
    letters, order = _group_positions(word)
    grouped = np.ones((1, 1), dtype=complex)
    for x in letters:
        grouped = np.kron(grouped, _letter_projector(states[x], delta, word.count(x), config))
    # grouped factor j sits at word position order[j]; invert to restore word order
    inverse = list(np.argsort(order))
    grouped_dims = [dims[i] for i in order]
    proj = permute_subsystems(grouped, grouped_dims, inverse)
    return _finish(proj, product_state(states, word), l)


# --------------------------------------------------------------------------
# reduced operations


@dataclasses.dataclass(frozen=True)
class ReducedOperation:
    operation: SubChannel
    trace_on_pi: float  # tr N_{δ,l}(π_{x^l})
    kraus_count: int
    full_kraus_count: int
    environment_projection: TypicalProjection


def environment_states(ch: SubChannel, letter_subspaces: Sequence[Subspace]) -> list[np.ndarray]:
    """N̂(π_{G_x}) for every letter."""
    comp = ch.complementary()
    return [comp(g.maximally_mixed()) for g in letter_subspaces]


def reduced_operation(
    ch: SubChannel,
    letter_subspaces: Sequence[Subspace],
    word: Sequence[int],
    delta: float,
    config: TypicalityConfig = DEFAULT_TYPICALITY,
) -> ReducedOperation:
    """Restriction of N^{⊗l} to the environment-typical subspace for π_{x^l}.

    With V the Stinespring isometry of N^{⊗l} and P the product typical
    projection for the environment states N̂(π_x), the result is
    ρ -> tr_E (I ⊗ P) V ρ V† (I ⊗ P). Its Kraus operators are
    B_w = Σ_k <f_w|k> A_k for the eigen-word basis vectors f_w spanning P,
    a subset of a unitarily rotated Kraus set of N^{⊗l}.
    """
    _check_delta(delta)
    word = tuple(int(x) for x in word)
    for g in letter_subspaces:
        if g.ambient_dim != ch.dim_in:
            raise DimensionError("letter subspaces must live in the channel input space")
    l = len(word)
    n = ch.n_kraus
    env_states = environment_states(ch, letter_subspaces)
    env_proj = typical_projector_product(env_states, word, delta, config)
    full = ch.power(l)
    # orthonormal basis of the projection range
    evals, evecs = herm_eig(env_proj.projector)
    basis = evecs[:, evals > 0.5]  # (n^l, rank)
    if basis.shape[1] == 0:
        op = SubChannel(np.zeros((1, full.dim_out, full.dim_in)), check=False)
    else:
        # B_w = Σ_k conj(f_w[k]) A_k
        kraus = np.einsum("kw,kij->wij", basis.conj(), full.kraus)
        op = SubChannel(kraus, check=False)
    pi = _word_maximally_mixed(letter_subspaces, word)
    trace = float(np.trace(op(pi)).real)
    return ReducedOperation(op, trace, basis.shape[1], n**l, env_proj)


def _word_maximally_mixed(letter_subspaces: Sequence[Subspace], word: Sequence[int]) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for x in word:
        out = np.kron(out, letter_subspaces[x].maximally_mixed())
    return out


def word_subspace(letter_subspaces: Sequence[Subspace], word: Sequence[int]) -> Subspace:
    """G_{x^l} = G_{x_1} ⊗ ... ⊗ G_{x_l}."""
    out = letter_subspaces[word[0]]
    for x in word[1:]:
        out = out.tensor(letter_subspaces[x])
    return out
