"""Fully quantum jammer: the jammer feeds an arbitrary state on H_J^{⊗n}.

The code's error 1 - P̄(σ) is linear in the jammer state, so it equals
tr(X σ) for an effect X. The worst jammer is the top eigenvector of X.
"""

from __future__ import annotations

import dataclasses
import itertools
from collections.abc import Sequence

import numpy as np
from scipy.optimize import minimize

from qsr.avqc.sequences import permutation_unitary
from qsr.coding.cet import CETCode, average_performance
from qsr.config import CapExceeded, get_caps
from qsr.qcore.channels import Channel, SubChannel
from qsr.qcore.linalg import DimensionError, herm_eig, hermitian_part, maximally_entangled, permute_subsystems
from qsr.qcore.random import rng_from


@dataclasses.dataclass
class QuantumJammerChannel:
    """N: H_A ⊗ H_J -> H_B, sender factor first."""

    channel: Channel
    d_a: int
    d_j: int

    def __post_init__(self):
        if self.channel.dim_in != self.d_a * self.d_j:
            raise DimensionError("channel input must be d_A * d_J")

    @property
    def d_b(self) -> int:
        return self.channel.dim_out

    def block_channel(self, n: int) -> SubChannel:
        """N^{⊗n} reading its input as A_1..A_n J_1..J_n."""
        cap = get_caps().eigen_cap
        if self.d_j**n > cap:
            raise CapExceeded(f"jammer dimension {self.d_j}^{n} exceeds the eigen cap {cap}")
        big = self.channel.power(n)
        # interleaved order A1 J1 A2 J2 ...; perm takes grouped -> interleaved
        dims = [self.d_a] * n + [self.d_j] * n
        perm = [x for i in range(n) for x in (i, n + i)]
        eye = np.eye(int(np.prod(dims)), dtype=complex)
        shuffle = np.stack([permute_subsystems(eye[:, c], dims, perm) for c in range(eye.shape[1])], axis=1)
        return SubChannel(np.einsum("kij,jl->kil", big.kraus, shuffle), check=False)

    def with_jammer_state(self, sigma: np.ndarray, n: int = 1) -> SubChannel:
        """ρ -> N^{⊗n}(ρ ⊗ σ) as a map on H_A^{⊗n}."""
        w = self.block_channel(n)
        da = self.d_a**n
        evals, evecs = herm_eig(hermitian_part(np.asarray(sigma, dtype=complex)))
        kraus = []
        for lam, v in zip(evals, evecs.T):
            if lam <= 1e-15:
                continue
            embed = np.kron(np.eye(da), v[:, None])  # (da*dj, da)
            kraus.append(np.sqrt(lam) * np.einsum("kij,jl->kil", w.kraus, embed))
        return SubChannel(np.concatenate(kraus), check=False)

    def iid(self, sigma: np.ndarray) -> SubChannel:
        return self.with_jammer_state(sigma, 1)


def _code_blocklength(code: CETCode, qj: QuantumJammerChannel) -> int:
    n = round(np.log(code.input_dim) / np.log(qj.d_a)) if qj.d_a > 1 else 1
    if qj.d_a**n != code.input_dim or qj.d_b**n != code.output_dim:
        raise DimensionError("code is not a block code for this jammer channel")
    return n


def jammer_effect_operator(code: CETCode, qj: QuantumJammerChannel, n: int | None = None) -> np.ndarray:
    """X = I - T_*(Φ) on H_J^{⊗n}, with 1 - P̄(σ) = tr(X σ)."""
    n = _code_blocklength(code, qj) if n is None else n
    w = qj.block_channel(n)
    k = code.code_dim
    da, dj = qj.d_a**n, qj.d_j**n
    phi = maximally_entangled(k)
    y = np.zeros((dj, dj), dtype=complex)
    for enc, dec in zip(code.encoders, code.decoders):
        full = dec.compose(w)  # A^n J^n -> C^k
        # |v_{e,r}> = (id ⊗ K_r)(id ⊗ E_e)|Φ> carries the jammer index as a free leg
        e = np.einsum("eaj,ij->eia", enc.kraus, phi.reshape(k, k))  # (ne, k, da)
        kr = full.kraus.reshape(full.n_kraus, k, da, dj)
        # amplitude <Φ| (id ⊗ K_r)(ψ_e ⊗ |J>) as a row vector over the jammer basis
        amp = np.einsum("ib,rbaj,eia->erj", phi.reshape(k, k).conj(), kr, e)
        y += np.einsum("erj,erl->lj", amp, amp.conj())
    y /= code.n_messages
    return hermitian_part(np.eye(dj) - y)


def performance_under_jammer(code: CETCode, qj: QuantumJammerChannel, sigma: np.ndarray, n: int | None = None) -> float:
    """Direct route: P̄ of the code through ρ -> N^{⊗n}(ρ ⊗ σ)."""
    n = _code_blocklength(code, qj) if n is None else n
    return average_performance(code, qj.with_jammer_state(sigma, n))


@dataclasses.dataclass(frozen=True)
class JammerWorstCase:
    value: float  # 1 - λ_max(X)
    spectrum: np.ndarray
    optimizer: np.ndarray  # top eigenvector

    def as_dict(self) -> dict:
        return {"worst_case": self.value, "spectrum": [float(v) for v in self.spectrum]}


def jammer_worst_case(x: np.ndarray) -> JammerWorstCase:
    evals, evecs = herm_eig(x)
    return JammerWorstCase(float(1.0 - evals[-1]), evals, evecs[:, -1])


def permutation_twirl(x: np.ndarray, d: int, n: int) -> np.ndarray:
    """(1/n!) Σ_π U_π† X U_π, the effect seen by a permutation-averaged code."""
    out = np.zeros_like(x)
    perms = list(itertools.permutations(range(n)))
    for p in perms:
        u = permutation_unitary(d, p)
        out += u.conj().T @ x @ u
    return out / len(perms)


def _state_from_params(theta: np.ndarray, d: int) -> np.ndarray:
    m = (theta[: d * d] + 1j * theta[d * d:]).reshape(d, d)
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def iid_error_sup(x: np.ndarray, d: int, n: int, restarts: int = 24, seed: int = 0) -> tuple[float, np.ndarray]:
    """Multi-start estimate of sup_σ tr(X σ^{⊗n}) over single-letter states.

    The estimate can only undershoot the supremum.
    """
    rng = rng_from(seed)

    def value(theta):
        s = _state_from_params(theta, d)
        big = s
        for _ in range(n - 1):
            big = np.kron(big, s)
        return -float(np.trace(x @ big).real)

    starts = [rng.normal(size=2 * d * d) for _ in range(restarts)]
    # pure basis states and the maximally mixed state as structured seeds
    for i in range(d):
        t = np.zeros(2 * d * d)
        t[i * d + i] = 1.0
        starts.append(t)
    starts.append(np.concatenate([np.eye(d).reshape(-1), np.zeros(d * d)]))
    best, arg = -np.inf, None
    for t0 in starts:
        res = minimize(value, t0, method="L-BFGS-B")
        if -res.fun > best:
            best, arg = -res.fun, _state_from_params(res.x, d)
    return float(best), arg


@dataclasses.dataclass(frozen=True)
class PermutationBoundReport:
    n: int
    factor: float  # (n+1)^{d_J^2}
    iid_error: float  # λ, lower estimate of sup_σ tr(X σ^{⊗n})
    averaged_worst: float  # min_τ of the permutation-averaged performance, exact
    rhs: float
    holds: bool

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def permutation_bound_check(code: CETCode, qj: QuantumJammerChannel, restarts: int = 24, seed: int = 0) -> PermutationBoundReport:
    """min_τ (1/n!) Σ_π P̄(C_π, τ) >= 1 - (n+1)^{d_J^2} λ with λ the i.i.d. jammer error.

    The left side is exact (top eigenvalue of the permutation-twirled effect).
    λ is a lower estimate of a supremum, which makes the right side larger,
    so a pass remains a valid certificate.
    """
    n = _code_blocklength(code, qj)
    x = jammer_effect_operator(code, qj, n)
    lam, _ = iid_error_sup(x, qj.d_j, n, restarts, seed)
    twirled = permutation_twirl(x, qj.d_j, n)
    lhs = jammer_worst_case(twirled).value
    factor = float((n + 1) ** (qj.d_j**2))
    rhs = 1.0 - factor * lam
    return PermutationBoundReport(n, factor, lam, lhs, rhs, bool(lhs >= rhs - 1e-12))


def replacement_jammer(eta: float, d: int = 2) -> QuantumJammerChannel:
    """With probability 1-η pass the sender's system, else pass the jammer's."""
    swap_kraus = []
    for a in range(d):
        # keep J: <a|_A ⊗ I_J
        op = np.zeros((d, d * d), dtype=complex)
        for j in range(d):
            op[j, a * d + j] = 1.0
        swap_kraus.append(np.sqrt(eta) * op)
    keep_kraus = []
    for j in range(d):
        op = np.zeros((d, d * d), dtype=complex)
        for a in range(d):
            op[a, a * d + j] = 1.0
        keep_kraus.append(np.sqrt(1 - eta) * op)
    return QuantumJammerChannel(Channel(keep_kraus + swap_kraus), d, d)


def jammer_ignoring(ch: Channel, d_j: int) -> QuantumJammerChannel:
    """N(ρ ⊗ σ) = ch(ρ) tr σ."""
    kraus = [np.kron(k, np.eye(d_j)[j][None, :]) for k in ch.kraus for j in range(d_j)]
    return QuantumJammerChannel(Channel(kraus), ch.dim_in, d_j)


def basis_jammer_values(code: CETCode, qj: QuantumJammerChannel, n: int | None = None) -> list[tuple[Sequence[int], float]]:
    """Performance for each computational-basis product jammer state."""
    n = _code_blocklength(code, qj) if n is None else n
    out = []
    for word in itertools.product(range(qj.d_j), repeat=n):
        idx = int(np.ravel_multi_index(word, [qj.d_j] * n)) if n else 0
        sigma = np.zeros((qj.d_j**n, qj.d_j**n), dtype=complex)
        sigma[idx, idx] = 1.0
        out.append((word, performance_under_jammer(code, qj, sigma, n)))
    return out
