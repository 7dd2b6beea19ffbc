"""Classically enhanced entanglement transmission (CET) and generation (CEG) codes."""

from __future__ import annotations

import dataclasses
from collections.abc import Sequence

import numpy as np

from qsr.coding.classical import ClassicalCode
from qsr.coding.entanglement import EtCodeFamily
from qsr.qcore.channels import SubChannel, entanglement_fidelity, sum_maps
from qsr.qcore.linalg import (
    DimensionError,
    fidelity,
    herm_eig,
    maximally_entangled,
    projector,
    psd_sqrt,
)


@dataclasses.dataclass
class CETCode:
    """Encoders P_m: C^k -> H_A^{⊗n} and decoders R_m: H_B^{⊗n} -> C^k."""

    encoders: list[SubChannel]
    decoders: list[SubChannel]
    selected: list[int] | None = None  # family index i(m), when assembled
    selection_scores: list[float] | None = None

    def __post_init__(self):
        if len(self.encoders) != len(self.decoders) or not self.encoders:
            raise ValueError("need one encoder and one decoder per message")
        k = self.encoders[0].dim_in
        if any(e.dim_in != k for e in self.encoders) or any(r.dim_out != k for r in self.decoders):
            raise DimensionError("all encoders and decoders must share the code dimension")
        if len({e.dim_out for e in self.encoders}) != 1 or len({r.dim_in for r in self.decoders}) != 1:
            raise DimensionError("inconsistent channel-side dimensions")

    @property
    def n_messages(self) -> int:
        return len(self.encoders)

    @property
    def code_dim(self) -> int:
        return self.encoders[0].dim_in

    @property
    def input_dim(self) -> int:
        return self.encoders[0].dim_out

    @property
    def output_dim(self) -> int:
        return self.decoders[0].dim_in

    def decoder_sum(self) -> SubChannel:
        return sum_maps(self.decoders)

    def decoder_deviation(self) -> float:
        """max |Σ_m Σ_k A†A - I| over the combined decoder."""
        return float(np.max(np.abs(self.decoder_sum().kraus_sum() - np.eye(self.output_dim))))


@dataclasses.dataclass
class CEGCode:
    states: list[np.ndarray]  # pure vectors on C^k ⊗ H_A^{⊗n}
    decoders: list[SubChannel]
    dominance_certified: bool = True

    def __post_init__(self):
        if len(self.states) != len(self.decoders) or not self.states:
            raise ValueError("need one state and one decoder per message")
        for psi in self.states:
            if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
                raise ValueError("CEG states must be normalised pure vectors")

    @property
    def n_messages(self) -> int:
        return len(self.states)

    @property
    def code_dim(self) -> int:
        return self.decoders[0].dim_out


def _channel_for(code_input_dim: int, ch: SubChannel, n: int | None) -> SubChannel:
    if n is not None and ch.dim_in ** n == code_input_dim and ch.dim_in != code_input_dim:
        return ch.power(n)
    if ch.dim_in != code_input_dim:
        raise DimensionError(f"channel input {ch.dim_in} does not match code input {code_input_dim}")
    return ch


def _sqrt_effect_map(effect: np.ndarray) -> SubChannel:
    return SubChannel(psd_sqrt(effect)[None], check=False)


def assemble_cet(
    cc: ClassicalCode,
    families: Sequence[EtCodeFamily],
    channels: Sequence[SubChannel],
) -> CETCode:
    """Glue the classical decoder to one entanglement code per message.

    For message m the decoder is ρ -> R̃_i(√Λ_m ρ √Λ_m), and i(m) maximises
    the channel-averaged entanglement fidelity of that composed decoder.
    ``channels`` act on the full block (already tensored).
    """
    if len(families) != cc.n_messages:
        raise ValueError("need one code family per message")
    if not channels:
        raise ValueError("need at least one channel")
    encoders, decoders, chosen, scores = [], [], [], []
    for m, fam in enumerate(families):
        if fam.word != tuple(cc.codewords[m]):
            raise ValueError(f"family {m} is built on {fam.word}, codeword is {cc.codewords[m]}")
        gate = _sqrt_effect_map(cc.decoder.effects[m])
        best, best_score = None, -np.inf
        for i, member in enumerate(fam.members):
            rec = member.recovery.compose(gate)
            for ch in channels:
                if ch.dim_in != member.encoder.dim_out or ch.dim_out != gate.dim_in:
                    raise DimensionError("channel does not match code dimensions")
            score = float(np.mean([
                entanglement_fidelity(fam.code_state(), rec.compose(ch).compose(member.encoder))
                for ch in channels
            ]))
            if score > best_score + 1e-12:
                best, best_score = (i, member.encoder, rec), score
        chosen.append(best[0])
        scores.append(best_score)
        encoders.append(best[1])
        decoders.append(best[2])
    return CETCode(encoders, decoders, chosen, scores)


def cet_performance(code: CETCode, ch: SubChannel, m: int, n: int | None = None) -> float:
    """F(|m><m| ⊗ Φ, (id ⊗ R) ∘ N^{⊗n} ∘ P_m (Φ)) built as an explicit state.

    R = Σ_m |m><m| ⊗ R_m, so the output is block diagonal in the message
    register and the fidelity picks out block m.
    """
    ch = _channel_for(code.input_dim, ch, n)
    k = code.code_dim
    phi = maximally_entangled(k)
    sent = code.encoders[m].apply_on_second(projector(phi), k)
    received = ch.apply_on_second(sent, k)
    mcount = code.n_messages
    out = np.zeros((mcount * k * k, mcount * k * k), dtype=complex)
    for j, dec in enumerate(code.decoders):
        block = dec.apply_on_second(received, k)
        out[j * k * k:(j + 1) * k * k, j * k * k:(j + 1) * k * k] = block
    target = np.zeros(mcount * k * k, dtype=complex)
    target[m * k * k:(m + 1) * k * k] = phi
    return fidelity(target, out)


def cet_performance_direct(code: CETCode, ch: SubChannel, m: int, n: int | None = None) -> float:
    """F_e(π_F, R_m ∘ N ∘ P_m); equal to :func:`cet_performance`."""
    ch = _channel_for(code.input_dim, ch, n)
    pi = np.eye(code.code_dim, dtype=complex) / code.code_dim
    return entanglement_fidelity(pi, code.decoders[m].compose(ch).compose(code.encoders[m]))


def average_performance(code: CETCode | CEGCode, ch: SubChannel, n: int | None = None) -> float:
    perf = cet_performance if isinstance(code, CETCode) else ceg_performance
    return float(np.mean([perf(code, ch, m, n) for m in range(code.n_messages)]))


def ceg_performance(code: CEGCode, ch: SubChannel, m: int, n: int | None = None) -> float:
    """F(|m><m| ⊗ Φ, (id ⊗ R) ∘ N^{⊗n} (Ψ_m))."""
    k = code.code_dim
    input_dim = code.states[m].size // k
    ch = _channel_for(input_dim, ch, n)
    received = ch.apply_on_second(projector(code.states[m]), k)
    block = code.decoders[m].apply_on_second(received, k)
    return fidelity(maximally_entangled(k), block)


def _is_isometric(ch: SubChannel, tol: float = 1e-9) -> bool:
    if ch.n_kraus != 1:
        reduced = ch.without_zero_kraus()
        if reduced.n_kraus != 1:
            return False
        ch = reduced
    v = ch.kraus[0]
    return bool(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))) <= tol)


def ceg_from_cet(code: CETCode, channels: Sequence[SubChannel] | None = None) -> CEGCode:
    """Ψ_m = (id ⊗ P_m)(Φ), which is pure when P_m is an isometry.

    For a non-isometric encoder the output is a mixture of pure states and
    the performance is linear in it, so some eigencomponent does at least
    as well on any single channel. With ``channels`` the component
    maximising the worst channel is kept; that choice is certified only for
    a single channel, because a mixture can beat every component on the
    worst case. Without channels the dominant eigencomponent is kept. In the
    uncertified cases the code is flagged.
    """
    k = code.code_dim
    phi = projector(maximally_entangled(k))
    states, certified = [], True
    for m, enc in enumerate(code.encoders):
        if _is_isometric(enc):
            v = enc.without_zero_kraus().kraus[0]
            psi = np.kron(np.eye(k), v) @ maximally_entangled(k)
            states.append(psi / np.linalg.norm(psi))
            continue
        mixed = enc.apply_on_second(phi, k)
        evals, evecs = herm_eig(mixed)
        comps = [evecs[:, i] for i in range(len(evals)) if evals[i] > 1e-12]
        if channels:
            trial = [
                min(ceg_performance(CEGCode([c], [code.decoders[m]]), ch, 0) for ch in channels)
                for c in comps
            ]
            states.append(comps[int(np.argmax(trial))])
            certified = certified and len(channels) == 1
        else:
            states.append(evecs[:, -1])
            certified = False
    return CEGCode(states, list(code.decoders), certified)

