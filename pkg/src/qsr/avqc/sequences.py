"""Arbitrarily varying channels driven by classical state sequences s^l."""

from __future__ import annotations

import dataclasses
import functools
import itertools
import math
from collections.abc import Sequence

import numpy as np

from qsr.coding.cet import CETCode, average_performance, cet_performance
from qsr.config import CapExceeded, get_caps
from qsr.qcore.channels import Channel, SubChannel, entanglement_fidelity
from qsr.qcore.linalg import DimensionError, permute_subsystems
from qsr.qcore.povm import Povm
from qsr.qcore.random import rng_from
from qsr.typicality import all_types

Sequence_ = tuple[int, ...]


@dataclasses.dataclass
class AvqcSpec:
    channels: list[Channel]
    l: int

    def __post_init__(self):
        if not self.channels:
            raise ValueError("an AVQC needs at least one channel")
        if self.l < 1:
            raise ValueError("blocklength must be >= 1")
        dims = {(c.dim_in, c.dim_out) for c in self.channels}
        if len(dims) != 1:
            raise DimensionError(f"channels have different dimensions {sorted(dims)}")

    @property
    def n_states(self) -> int:
        return len(self.channels)

    @property
    def dim_in(self) -> int:
        return self.channels[0].dim_in

    @property
    def dim_out(self) -> int:
        return self.channels[0].dim_out

    def sequences(self, length: int | None = None) -> list[Sequence_]:
        length = self.l if length is None else length
        total = self.n_states**length
        cap = get_caps().sequence_cap
        if total > cap:
            raise CapExceeded(f"|S|^l = {total} exceeds the sequence cap {cap}")
        return list(itertools.product(range(self.n_states), repeat=length))

    def sequence_channel(self, seq: Sequence[int]) -> SubChannel:
        """N_{s_1} ⊗ ... ⊗ N_{s_l}."""
        return functools.reduce(lambda a, b: a.tensor(b), [self.channels[s] for s in seq])

    def with_length(self, l: int) -> AvqcSpec:
        return AvqcSpec(self.channels, l)


def performance_table(code: CETCode, spec: AvqcSpec) -> dict[Sequence_, float]:
    """Message-averaged performance g for every s^l."""
    return {seq: average_performance(code, spec.sequence_channel(seq)) for seq in spec.sequences()}


@dataclasses.dataclass(frozen=True)
class WorstCase:
    value: float
    argmin: Sequence_
    table: dict

    def as_dict(self) -> dict:
        return {"worst_case": self.value, "argmin": list(self.argmin)}


def worst_case_performance(code: CETCode, spec: AvqcSpec) -> WorstCase:
    """Exhaustive minimum over s^l; ties resolve to the lexicographically first sequence."""
    table = performance_table(code, spec)
    arg = min(table, key=lambda s: (table[s], s))
    return WorstCase(table[arg], arg, table)


# --------------------------------------------------------------------------
# permutations


def permutation_unitary(d: int, alpha: Sequence[int]) -> np.ndarray:
    """U with U x_1 ⊗ ... ⊗ x_l = x_{α(1)} ⊗ ... ⊗ x_{α(l)}."""
    l = len(alpha)
    eye = np.eye(d**l, dtype=complex)
    return np.stack([permute_subsystems(eye[:, j], [d] * l, alpha) for j in range(d**l)], axis=1)


@dataclasses.dataclass
class RandomCetCode:
    support: list[CETCode]
    weights: np.ndarray
    labels: list | None = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if len(w) != len(self.support) or not len(w):
            raise ValueError("one weight per support code")
        if (w < 0).any() or abs(w.sum() - 1) > 1e-12:
            raise ValueError("weights must form a distribution")
        shapes = {(c.n_messages, c.code_dim, c.input_dim, c.output_dim) for c in self.support}
        if len(shapes) != 1:
            raise ValueError("support codes must share (M1, M2, blocklength)")
        self.weights = w

    def expected_performance(self, ch: SubChannel) -> float:
        return float(sum(w * average_performance(c, ch) for w, c in zip(self.weights, self.support)))

    def sample(self, count: int, rng=None) -> list[int]:
        return list(rng_from(rng).choice(len(self.support), size=count, p=self.weights))


def _permuted_code(code: CETCode, alpha: Sequence[int], d_in: int, d_out: int) -> CETCode:
    ua = permutation_unitary(d_in, alpha)
    ub_inv = permutation_unitary(d_out, alpha).conj().T
    enc = [SubChannel(np.einsum("ij,kjl->kil", ua, e.kraus), check=False) for e in code.encoders]
    dec = [SubChannel(np.einsum("kij,jl->kil", r.kraus, ub_inv), check=False) for r in code.decoders]
    return CETCode(enc, dec)


def _letter_dims(code: CETCode, l: int) -> tuple[int, int]:
    d_in = round(code.input_dim ** (1.0 / l))
    d_out = round(code.output_dim ** (1.0 / l))
    if d_in**l != code.input_dim or d_out**l != code.output_dim:
        raise DimensionError(f"code dimensions are not l={l} fold tensor powers")
    return d_in, d_out


def robustify(code: CETCode, l: int) -> RandomCetCode:
    """Uniform mixture over (U_{A,α} ∘ P_m, R_m ∘ U_{B,α}^{-1}) for all α in S_l."""
    d_in, d_out = _letter_dims(code, l)
    perms = list(itertools.permutations(range(l)))
    support = [_permuted_code(code, a, d_in, d_out) for a in perms]
    return RandomCetCode(support, np.full(len(perms), 1.0 / len(perms)), perms)


def permutation_average(table: dict[Sequence_, float], seq: Sequence[int]) -> float:
    """(1/l!) Σ_α f(α(s^l)) for a complete table f, by summing over S_l."""
    perms = list(itertools.permutations(range(len(seq))))
    return float(np.mean([table[tuple(seq[i] for i in a)] for a in perms]))


class _TypeGeometry:
    """Sequences of S^l, their types, and the matrix q^l(s^l) over types q."""

    def __init__(self, n_states: int, l: int):
        self.seqs = list(itertools.product(range(n_states), repeat=l))
        arr = np.array(self.seqs, dtype=int).reshape(len(self.seqs), l)
        counts = np.stack([(arr == s).sum(axis=1) for s in range(n_states)], axis=1)
        self.types = [t.counts for t in all_types(n_states, l)]
        tq = np.array(self.types, dtype=float) / l  # (T, |S|)
        # q^l(s^l) = Π_s q(s)^{N(s|s^l)}, with 0^0 = 1
        self.q = np.prod(np.where(counts[None] == 0, 1.0, tq[:, None, :] ** counts[None]), axis=2)
        index = {t: i for i, t in enumerate(self.types)}
        self.type_of = np.array([index[tuple(int(c) for c in row)] for row in counts])

    def vector(self, table: dict[Sequence_, float]) -> np.ndarray:
        return np.array([table[s] for s in self.seqs], dtype=float)

    def hypothesis_values(self, f: np.ndarray) -> np.ndarray:
        return self.q @ f

    def orbit_means(self, f: np.ndarray) -> np.ndarray:
        """Mean of f over each sequence's type class, equal to its permutation average."""
        sums = np.bincount(self.type_of, weights=f, minlength=len(self.types))
        sizes = np.bincount(self.type_of, minlength=len(self.types))
        return (sums / sizes)[self.type_of]


def _check_table(table: dict, n_states: int) -> int:
    if not table:
        raise ValueError("empty table")
    l = len(next(iter(table)))
    expected = set(itertools.product(range(n_states), repeat=l))
    if set(table) != expected:
        raise ValueError("table must list every sequence in S^l exactly once")
    return l


@dataclasses.dataclass(frozen=True)
class RobustReport:
    gamma: float
    hypothesis_holds: bool
    hypothesis_min: float
    conclusion_holds: bool
    conclusion_min: float
    conclusion_rhs: float
    worst_sequence: Sequence_

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["worst_sequence"] = list(self.worst_sequence)
        return d


def robustlemma_check(table: dict[Sequence_, float], n_states: int, gamma: float) -> RobustReport:
    """Check the permutation-averaging bound on a complete table f: S^l -> [0, 1].

    Hypothesis: Σ f q^l >= 1 - γ for every type q of length l. Conclusion:
    (1/l!) Σ_α f(α(s^l)) >= 1 - (l+1)^{|S|} γ for every s^l.
    """
    l = _check_table(table, n_states)
    geo = _TypeGeometry(n_states, l)
    f = geo.vector(table)
    hyp_min = float(geo.hypothesis_values(f).min())
    rhs = 1.0 - (l + 1) ** n_states * gamma
    means = geo.orbit_means(f)
    worst = int(np.argmin(means))  # first minimiser in lexicographic order
    return RobustReport(
        gamma=gamma,
        hypothesis_holds=bool(hyp_min >= 1 - gamma - 1e-12),
        hypothesis_min=hyp_min,
        conclusion_holds=bool(means[worst] >= rhs - 1e-12),
        conclusion_min=float(means[worst]),
        conclusion_rhs=rhs,
        worst_sequence=geo.seqs[worst],
    )


def iid_gamma(table: dict[Sequence_, float], n_states: int) -> float:
    """Smallest γ for which the type hypothesis holds: 1 - min_q Σ f q^l."""
    l = _check_table(table, n_states)
    geo = _TypeGeometry(n_states, l)
    return 1.0 - float(geo.hypothesis_values(geo.vector(table)).min())


def random_hypothesis_table(n_states: int, l: int, gamma: float, rng=None) -> dict[Sequence_, float]:
    """Random f: S^l -> [0,1] meeting the type hypothesis at level γ.

    Values start at 1 - γ·u with u uniform in [0, 1], so every type mixture
    is at least 1 - γ. Then a random eighth of the entries is lowered, one
    at a time, as far as the hypothesis allows, so that some constraints
    are tight.
    """
    rng = rng_from(rng)
    geo = _TypeGeometry(n_states, l)
    f = 1.0 - gamma * rng.uniform(size=len(geo.seqs))
    for j in rng.permutation(len(geo.seqs))[: max(1, len(geo.seqs) // 8)]:
        slack = geo.hypothesis_values(f) - (1.0 - gamma)
        col = geo.q[:, j]
        room = np.min(np.where(col > 0, slack / np.where(col > 0, col, 1.0), np.inf))
        f[j] = max(0.0, f[j] - max(room, 0.0))
    return {s: float(v) for s, v in zip(geo.seqs, f)}


# --------------------------------------------------------------------------
# elimination


def classical_prefix_code(states: Sequence[np.ndarray], povm: Povm) -> CETCode:
    """An (r, M, 1) CET code: P_m prepares ρ_m, R_m is X -> tr(D_m X) in C^1."""
    if len(states) != len(povm):
        raise ValueError("one effect per state")
    encoders = [Channel.constant(np.asarray(s, dtype=complex), 1) for s in states]
    decoders = []
    for eff in povm.effects:
        evals, evecs = np.linalg.eigh(eff)
        rows = [np.sqrt(max(lam, 0.0)) * v.conj()[None, :] for lam, v in zip(evals, evecs.T) if lam > 1e-15]
        if not rows:
            rows = [np.zeros((1, povm.dim), dtype=complex)]
        decoders.append(SubChannel(np.stack(rows), check=False))
    return CETCode(encoders, decoders)


def _kron_kraus(a: SubChannel, b: SubChannel, weight: float = 1.0) -> np.ndarray:
    return np.sqrt(weight) * np.einsum("aij,bkl->abikjl", a.kraus, b.kraus).reshape(
        a.n_kraus * b.n_kraus, a.dim_out * b.dim_out, a.dim_in * b.dim_in
    )


def combine_with_prefix(prefix: CETCode, codes: Sequence[CETCode]) -> CETCode:
    """P^{(m)} = (1/K) Σ_i P̃^{(i)} ⊗ P̂_i^{(m)},  R^{(m)} = Σ_i R̃^{(i)} ⊗ R̂_i^{(m)}."""
    k = len(codes)
    if prefix.n_messages != k:
        raise ValueError(f"prefix code has {prefix.n_messages} messages, need {k}")
    if prefix.code_dim != 1:
        raise ValueError("prefix code must carry no quantum part (M2 = 1)")
    m1 = codes[0].n_messages
    enc, dec = [], []
    for m in range(m1):
        ek = np.concatenate([_kron_kraus(prefix.encoders[i], c.encoders[m], 1.0 / k) for i, c in enumerate(codes)])
        dk = np.concatenate([_kron_kraus(prefix.decoders[i], c.decoders[m]) for i, c in enumerate(codes)])
        enc.append(SubChannel(ek, check=False))
        dec.append(SubChannel(dk, check=False))
    return CETCode(enc, dec)


@dataclasses.dataclass
class EliminationResult:
    sampled: list[int]  # indices into the random code's support
    codes: list[CETCode]
    combined: CETCode
    empirical: dict  # s^l -> (1/K) Σ_i h_{s^l}(i)
    failure_fraction: float  # share of s^l with empirical average < 1 - ε
    markov_bound: float  # |S|^l 2^{-K ε/2}
    rate_factor: float  # l / (r_l + l)
    seed: int | None


def eliminate(
    rc: RandomCetCode,
    spec: AvqcSpec,
    eps: float,
    prefix: CETCode | None,
    seed: int | None = 0,
    count: int | None = None,
) -> EliminationResult:
    """Sample K = l² codes from ``rc`` and index them through a prefix code."""
    if prefix is None:
        raise ValueError("elimination needs a prefix code with l^2 messages")
    l = spec.l
    k = count if count is not None else l * l
    idx = rc.sample(k, np.random.default_rng(seed))
    codes = [rc.support[i] for i in idx]
    empirical = {}
    cache: dict[int, dict] = {}
    for i in set(idx):
        cache[i] = performance_table(rc.support[i], spec)
    for seq in spec.sequences():
        empirical[seq] = float(np.mean([cache[i][seq] for i in idx]))
    fails = sum(1 for v in empirical.values() if v < 1 - eps)
    combined = combine_with_prefix(prefix, codes)
    r = round(math.log(prefix.input_dim, spec.dim_in))
    return EliminationResult(
        sampled=[int(i) for i in idx],
        codes=codes,
        combined=combined,
        empirical=empirical,
        failure_fraction=fails / len(empirical),
        markov_bound=spec.n_states**l * 2.0 ** (-k * eps / 2),
        rate_factor=l / (r + l),
        seed=seed,
    )


# --------------------------------------------------------------------------
# classical reduction


@dataclasses.dataclass
class ClassicalReduction:
    states: list[np.ndarray]  # ρ_m = P(|m><m|)
    povm: Povm  # D_m = R_*(|m><m|)
    table: dict  # s^l -> (entanglement fidelity, classical success)

    def holds(self, tol: float = 1e-10) -> bool:
        return all(c >= q - tol for q, c in self.table.values())


def classical_reduction(encoder: SubChannel, decoder: SubChannel, spec: AvqcSpec) -> ClassicalReduction:
    """Basis states through P and the decoder's adjoint on basis projectors."""
    if not decoder.is_trace_preserving(1e-8):
        raise ValueError("decoder must be trace preserving")
    m = encoder.dim_in
    if decoder.dim_out != m:
        raise DimensionError("decoder output must be the code space")
    basis = np.eye(m, dtype=complex)
    states = [encoder(np.outer(basis[i], basis[i])) for i in range(m)]
    povm = Povm([decoder.adjoint_apply(np.outer(basis[i], basis[i])) for i in range(m)], tol=1e-8)
    pi = np.eye(m, dtype=complex) / m
    table = {}
    for seq in spec.sequences():
        ch = spec.sequence_channel(seq)
        q = entanglement_fidelity(pi, decoder.compose(ch).compose(encoder))
        c = float(np.mean([np.trace(povm.effects[i] @ ch(states[i])).real for i in range(m)]))
        table[seq] = (q, c)
    return ClassicalReduction(states, povm, table)


def per_message_table(code: CETCode, spec: AvqcSpec) -> dict:
    return {seq: [cet_performance(code, spec.sequence_channel(seq), m) for m in range(code.n_messages)]
            for seq in spec.sequences()}

