"""Random entanglement-transmission code families from unitary designs."""

from __future__ import annotations

import dataclasses
from collections.abc import Sequence

import numpy as np

from qsr.coding.designs import UnitaryDesign, make_design
from qsr.coding.recovery import SUPPORT_CUTOFF, bk_recovery
from qsr.config import DEFAULT_TYPICALITY, TypicalityConfig
from qsr.qcore.channels import Channel, SubChannel, average_maps, entanglement_fidelity
from qsr.qcore.linalg import DimensionError, Subspace, hs_norm
from qsr.typicality import (
    reduced_operation,
    typical_projector_product,
    word_subspace,
)


def decoupling_bound(k: int, subspace: Subspace, subchannels: Sequence[SubChannel]) -> float:
    """tr(N̄(π_G)) - 2 Σ_j √(k n_j) ‖N_j(π_G)‖₂ with N̄ the uniform average of the N_j."""
    if not subchannels:
        raise ValueError("need at least one map")
    if not 1 <= k <= subspace.dim:
        raise ValueError(f"k={k} must lie in 1..dim(G)={subspace.dim}")
    pi = subspace.maximally_mixed()
    outs = [ch(pi) for ch in subchannels]
    avg_trace = float(np.mean([np.trace(o).real for o in outs]))
    penalty = sum(2.0 * np.sqrt(k * ch.n_kraus) * hs_norm(o) for ch, o in zip(subchannels, outs))
    return avg_trace - float(penalty)


@dataclasses.dataclass(frozen=True)
class EtMember:
    encoder: Channel  # C^k -> H^{⊗l}, isometric
    recovery: Channel  # H_B^{⊗l} -> C^k
    unitary_index: int


@dataclasses.dataclass
class EtCodeFamily:
    """One (encoder, recovery) pair per design element, all on a k-dim code space."""

    word: tuple[int, ...]
    code_space: Subspace  # F inside G_{x^l}
    word_subspace: Subspace  # G_{x^l}
    design: UnitaryDesign
    members: list[EtMember]
    reduced: bool
    averaged_channel: SubChannel  # the map the recoveries were fitted to
    decoupling_bound: float

    @property
    def k(self) -> int:
        return self.code_space.dim

    def code_state(self) -> np.ndarray:
        return np.eye(self.k, dtype=complex) / self.k

    def average_encoder_output(self) -> np.ndarray:
        pi = self.code_state()
        return sum(m.encoder(pi) for m in self.members) / len(self.members)

    def member_fidelity(self, index: int, ch: SubChannel) -> float:
        """F_e(π_F, R_i ∘ N ∘ P_i) for a channel N on the l-fold input."""
        m = self.members[index]
        return entanglement_fidelity(self.code_state(), m.recovery.compose(ch).compose(m.encoder))

    def average_fidelity(self, ch: SubChannel) -> float:
        return float(np.mean([self.member_fidelity(i, ch) for i in range(len(self.members))]))


def _anchor_state(k: int) -> np.ndarray:
    out = np.zeros((k, k), dtype=complex)
    out[0, 0] = 1.0
    return out


def output_typical_map(
    ch: SubChannel,
    letter_subspaces: Sequence[Subspace],
    word: Sequence[int],
    delta: float,
    config: TypicalityConfig,
) -> SubChannel:
    """Q ∘ N_{δ,l}: reduced operation followed by the output typical projection.

    The projection is the product typical projection of the per-letter
    output states N(π_x).
    """
    red = reduced_operation(ch, letter_subspaces, word, delta, config).operation
    outs = [ch(g.maximally_mixed()) for g in letter_subspaces]
    q = typical_projector_product(outs, word, delta, config).projector
    return SubChannel(q[None], check=False).compose(red)


def random_et_family(
    letter_subspaces: Sequence[Subspace],
    word: Sequence[int],
    k: int,
    channels: Sequence[SubChannel],
    delta: float = 0.25,
    reduced: bool = False,
    config: TypicalityConfig = DEFAULT_TYPICALITY,
    design: UnitaryDesign | None = None,
) -> EtCodeFamily:
    """Design-randomised family of entanglement-transmission codes on G_{x^l}.

    The code space F is spanned by the first ``k`` basis vectors of G_{x^l};
    member i encodes by the isometry C^k -> F followed by the design unitary
    U_i on G_{x^l}. Each recovery is the transpose recovery of π_F through
    N̄ ∘ P_i, where N̄ averages the l-fold channels (``reduced=False``) or
    their output-projected reduced operations (``reduced=True``).
    """
    word = tuple(int(x) for x in word)
    if not channels:
        raise ValueError("need at least one channel")
    l = len(word)
    g = word_subspace(letter_subspaces, word)
    if not 1 <= k <= g.dim:
        raise ValueError(f"k={k} must lie in 1..dim(G_x^l)={g.dim}")
    for ch in channels:
        if ch.dim_in != letter_subspaces[0].ambient_dim:
            raise DimensionError("channel input does not match letter subspaces")
    design = design or make_design(g)
    if design.subspace.dim != g.dim:
        raise DimensionError("design dimension does not match G_x^l")
    if reduced:
        maps = [output_typical_map(ch, letter_subspaces, word, delta, config) for ch in channels]
    else:
        maps = [ch.power(l) for ch in channels]
    avg = average_maps(maps)
    bound = decoupling_bound(k, g, maps)
    f = g.first(k)
    pi_k = np.eye(k, dtype=complex) / k
    members = []
    for i, u in enumerate(design.unitaries):
        iso = g.basis @ u[:, :k]  # C^k -> ambient, image inside G
        enc = Channel(iso[None])
        fitted = avg.compose(enc)
        if np.trace(fitted(pi_k)).real <= SUPPORT_CUTOFF:
            # the reduced map annihilates this code space; nothing to invert
            rec = Channel.constant(_anchor_state(k), fitted.dim_out)
        else:
            rec = bk_recovery(pi_k, fitted)
        members.append(EtMember(enc, rec, i))
    return EtCodeFamily(word, f, g, design, members, reduced, avg, bound)
