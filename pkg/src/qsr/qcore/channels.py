"""Completely positive maps in Kraus form.

Kraus operators are stored as a single ``(n, d_out, d_in)`` array so that
applying, composing and tensoring stay vectorised.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from qsr.config import CHANNEL_TOL
from qsr.qcore.linalg import (
    DimensionError,
    hermitian_part,
    partial_trace,
    projector,
    purify,
    von_neumann_entropy,
)

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _as_kraus_array(kraus) -> np.ndarray:
    if isinstance(kraus, np.ndarray) and kraus.ndim == 3:
        arr = kraus.astype(complex, copy=True)
    else:
        ops = [np.atleast_2d(np.asarray(k, dtype=complex)) for k in kraus]
        if not ops:
            raise ValueError("Kraus list must be non-empty")
        shapes = {op.shape for op in ops}
        if len(shapes) != 1:
            raise DimensionError(f"Kraus operators have differing shapes {sorted(shapes)}")
        arr = np.stack(ops)
    if arr.shape[0] == 0:
        raise ValueError("Kraus list must be non-empty")
    return arr


class SubChannel:
    """Trace non-increasing completely positive map Σ_k A_k · A_k†."""

    def __init__(self, kraus, tol: float = CHANNEL_TOL, check: bool = True):
        self._kraus = _as_kraus_array(kraus)
        self._kraus.setflags(write=False)
        if check:
            self._validate(tol)

    def _validate(self, tol: float) -> None:
        top = np.linalg.eigvalsh(hermitian_part(self.kraus_sum()))[-1]
        if top > 1.0 + tol:
            raise ValueError(f"Σ A†A has eigenvalue {top:.3e} > 1; map is trace increasing")

    # -- basic data -----------------------------------------------------------

    @property
    def kraus(self) -> np.ndarray:
        return self._kraus

    @property
    def n_kraus(self) -> int:
        return self._kraus.shape[0]

    @property
    def dim_in(self) -> int:
        return self._kraus.shape[2]

    @property
    def dim_out(self) -> int:
        return self._kraus.shape[1]

    def kraus_sum(self) -> np.ndarray:
        """Σ A_k† A_k, the operator whose defect from I measures trace loss."""
        return np.einsum("kij,kil->jl", self._kraus.conj(), self._kraus)

    def is_trace_preserving(self, tol: float = CHANNEL_TOL) -> bool:
        return bool(np.max(np.abs(self.kraus_sum() - np.eye(self.dim_in))) <= tol)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim_in={self.dim_in}, dim_out={self.dim_out}, n_kraus={self.n_kraus})"

    # -- action ------------------------------------------------------------------

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        if rho.ndim == 1:
            rho = projector(rho)
        if rho.shape != (self.dim_in, self.dim_in):
            raise DimensionError(f"input of shape {rho.shape} for channel with dim_in={self.dim_in}")
        a = self._kraus
        return np.einsum("kij,jl,kml->im", a, rho, a.conj())

    def adjoint_apply(self, op: np.ndarray) -> np.ndarray:
        """Heisenberg picture: Σ A_k† X A_k."""
        op = np.asarray(op, dtype=complex)
        if op.shape != (self.dim_out, self.dim_out):
            raise DimensionError(f"operator of shape {op.shape} for dim_out={self.dim_out}")
        a = self._kraus
        return np.einsum("kji,jl,klm->im", a.conj(), op, a)

    def apply_on_second(self, state: np.ndarray, dim_ref: int) -> np.ndarray:
        """(id_ref ⊗ self) applied to a state on C^dim_ref ⊗ H_in."""
        state = np.asarray(state, dtype=complex)
        if state.ndim == 1:
            state = projector(state)
        d = self.dim_in
        if state.shape != (dim_ref * d, dim_ref * d):
            raise DimensionError(f"state of shape {state.shape} incompatible with ref {dim_ref} ⊗ {d}")
        t = state.reshape(dim_ref, d, dim_ref, d)
        a = self._kraus
        out = np.einsum("kij,rjsl,kml->rism", a, t, a.conj())
        do = self.dim_out
        return out.reshape(dim_ref * do, dim_ref * do)

    def choi(self) -> np.ndarray:
        """Unnormalised Choi matrix Σ_ij |i><j| ⊗ N(|i><j|), input factor first."""
        a = self._kraus
        d_in, d_out = self.dim_in, self.dim_out
        # (id ⊗ N)(|Γ><Γ|) with |Γ> = Σ_i |i>|i>
        c = np.einsum("kai,kbj->iajb", a, a.conj())
        return c.reshape(d_in * d_out, d_in * d_out)

    # -- algebra ---------------------------------------------------------------

    def compose(self, first: SubChannel) -> SubChannel:
        """self ∘ first (apply ``first``, then ``self``)."""
        if first.dim_out != self.dim_in:
            raise DimensionError(f"cannot compose: {first.dim_out} -> {self.dim_in}")
        prod = np.einsum("aij,bjk->abik", self._kraus, first.kraus)
        kraus = prod.reshape(-1, self.dim_out, first.dim_in)
        return _closure_class(self, first)(kraus, check=False)

    def tensor(self, other: SubChannel) -> SubChannel:
        prod = np.einsum("aij,bkl->abikjl", self._kraus, other.kraus)
        kraus = prod.reshape(
            self.n_kraus * other.n_kraus, self.dim_out * other.dim_out, self.dim_in * other.dim_in
        )
        return _closure_class(self, other)(kraus, check=False)

    def power(self, l: int) -> SubChannel:
        if l < 1:
            raise ValueError("tensor power needs l >= 1")
        out = self
        for _ in range(l - 1):
            out = out.tensor(self)
        return out

    def scaled(self, weight: float) -> SubChannel:
        """The map weight · N, as a SubChannel."""
        if weight < 0:
            raise ValueError("weight must be non-negative")
        return SubChannel(np.sqrt(weight) * self._kraus, check=False)

    def complementary(self) -> SubChannel:
        """Environment output N̂(ρ)_{kl} = tr(A_k ρ A_l†), environment dim = n_kraus.

        Built from the Stinespring isometry V = Σ_k A_k ⊗ |k>_E.
        """
        a = self._kraus
        n, d_out, d_in = a.shape
        # Kraus of N̂: B_i = Σ_k |k><i|_out A_k, i.e. B_i[k, :] = A_k[i, :]
        kraus = np.transpose(a, (1, 0, 2))
        return _closure_class(self, self)(kraus.reshape(d_out, n, d_in), check=False)

    def stinespring(self) -> np.ndarray:
        """V : H_in -> H_out ⊗ H_env with V = Σ_k A_k ⊗ |k>."""
        a = self._kraus
        return np.transpose(a, (1, 0, 2)).reshape(self.dim_out * self.n_kraus, self.dim_in)

    def without_zero_kraus(self, tol: float = 1e-13) -> SubChannel:
        keep = np.linalg.norm(self._kraus.reshape(self.n_kraus, -1), axis=1) > tol
        if not keep.any():
            return type(self)(np.zeros((1, self.dim_out, self.dim_in)), check=False)
        return type(self)(self._kraus[keep], check=False)


class Channel(SubChannel):
    """Trace preserving completely positive map."""

    def _validate(self, tol: float) -> None:
        dev = np.max(np.abs(self.kraus_sum() - np.eye(self.dim_in)))
        if dev > tol:
            raise ValueError(f"Σ A†A deviates from identity by {dev:.3e}; map is not trace preserving")

    # -- standard constructors -------------------------------------------------

    @classmethod
    def identity(cls, dim: int) -> Channel:
        return cls(np.eye(dim, dtype=complex)[None])

    @classmethod
    def unitary(cls, u: np.ndarray) -> Channel:
        return cls(np.asarray(u, dtype=complex)[None])

    @classmethod
    def constant(cls, sigma: np.ndarray, dim_in: int) -> Channel:
        """ρ -> tr(ρ) σ with Kraus √λ_a |e_a><i|."""
        evals, evecs = np.linalg.eigh(hermitian_part(np.asarray(sigma, dtype=complex)))
        ops = []
        for lam, vec in zip(evals, evecs.T):
            if lam <= 1e-15:
                continue
            for i in range(dim_in):
                op = np.zeros((len(vec), dim_in), dtype=complex)
                op[:, i] = np.sqrt(lam) * vec
                ops.append(op)
        return cls(ops)

    @classmethod
    def completely_depolarizing(cls, dim: int) -> Channel:
        """Kraus {|i><j| / √d}; every input goes to I/d."""
        ops = []
        for i in range(dim):
            for j in range(dim):
                op = np.zeros((dim, dim), dtype=complex)
                op[i, j] = 1.0 / np.sqrt(dim)
                ops.append(op)
        return cls(ops)

    @classmethod
    def dephasing(cls, q: float, pauli: str = "Z") -> Channel:
        """ρ -> (1-q) ρ + q P ρ P for a qubit Pauli P."""
        if not 0.0 <= q <= 1.0:
            raise ValueError("dephasing probability must lie in [0, 1]")
        return cls([np.sqrt(1 - q) * PAULI["I"], np.sqrt(q) * PAULI[pauli]])

    @classmethod
    def depolarizing(cls, p: float) -> Channel:
        """Qubit channel ρ -> (1-p) ρ + p I/2."""
        if not 0.0 <= p <= 1.0:
            raise ValueError("depolarizing parameter must lie in [0, 1]")
        w = [1 - 3 * p / 4, p / 4, p / 4, p / 4]
        return cls([np.sqrt(wi) * PAULI[k] for wi, k in zip(w, "IXYZ")])

    @classmethod
    def amplitude_damping(cls, gamma: float) -> Channel:
        a0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
        a1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
        return cls([a0, a1])

    @classmethod
    def from_isometry(cls, v: np.ndarray) -> Channel:
        return cls(np.asarray(v, dtype=complex)[None])


def _closure_class(a: SubChannel, b: SubChannel) -> type:
    return Channel if isinstance(a, Channel) and isinstance(b, Channel) else SubChannel


def as_channel(sub: SubChannel, tol: float = CHANNEL_TOL) -> Channel:
    """Re-validate a SubChannel as trace preserving."""
    return Channel(sub.kraus, tol=tol)


def sum_maps(maps: Sequence[SubChannel]) -> SubChannel:
    """Σ_j N_j as a single Kraus list; Channel if the sum is trace preserving."""
    if not maps:
        raise ValueError("need at least one map")
    shapes = {(m.dim_out, m.dim_in) for m in maps}
    if len(shapes) != 1:
        raise DimensionError(f"maps have differing shapes {sorted(shapes)}")
    kraus = np.concatenate([m.kraus for m in maps])
    out = SubChannel(kraus, check=False)
    return Channel(kraus, check=False) if out.is_trace_preserving() else out


def average_maps(maps: Sequence[SubChannel]) -> SubChannel:
    """(1/|S|) Σ_j N_j."""
    n = len(maps)
    return sum_maps([m.scaled(1.0 / n) for m in maps])


def choi_to_kraus(choi: np.ndarray, dim_in: int, dim_out: int, cutoff: float = 1e-13) -> np.ndarray:
    """Kraus operators from an (unnormalised, input-first) Choi matrix."""
    evals, evecs = np.linalg.eigh(hermitian_part(choi))
    ops = [
        np.sqrt(lam) * vec.reshape(dim_in, dim_out).T
        for lam, vec in zip(evals[::-1], evecs[:, ::-1].T)
        if lam > cutoff
    ]
    if not ops:
        return np.zeros((1, dim_out, dim_in), dtype=complex)
    return np.stack(ops)


# --------------------------------------------------------------------------
# entropic and fidelity functionals of (state, channel)


def apply_channel(ch: SubChannel, rho: np.ndarray) -> np.ndarray:
    return ch(rho)


def complementary_channel(ch: SubChannel) -> SubChannel:
    return ch.complementary()


def entropy_exchange(rho: np.ndarray, ch: SubChannel) -> float:
    """S_e(ρ, N) = S((id ⊗ N)(ψψ)) for a purification ψ of ρ."""
    psi = purify(rho)
    return von_neumann_entropy(ch.apply_on_second(psi, rho.shape[0]))


def coherent_information(rho: np.ndarray, ch: SubChannel) -> float:
    """I_c(ρ, N) = S(N(ρ)) - S(N̂(ρ))."""
    if rho.shape[0] != ch.dim_in:
        raise DimensionError(f"state dim {rho.shape[0]} != channel dim_in {ch.dim_in}")
    return von_neumann_entropy(ch(rho)) - von_neumann_entropy(ch.complementary()(rho))


def coherent_information_purified(rho: np.ndarray, ch: SubChannel, psi: np.ndarray | None = None) -> float:
    """Purification route S(N(ρ)) - S((id ⊗ N)(ψψ)), ψ any purification of ρ."""
    d = rho.shape[0]
    if psi is None:
        psi = purify(rho)
    d_ref = psi.shape[0] // d
    return von_neumann_entropy(ch(rho)) - von_neumann_entropy(ch.apply_on_second(psi, d_ref))


def entanglement_fidelity(rho: np.ndarray, ch: SubChannel) -> float:
    """F_e(ρ, N) = Σ_k |tr(ρ A_k)|²; needs dim_out == dim_in."""
    if ch.dim_in != ch.dim_out:
        raise DimensionError("entanglement fidelity needs a map with equal input and output dims")
    if rho.shape[0] != ch.dim_in:
        raise DimensionError(f"state dim {rho.shape[0]} != channel dim_in {ch.dim_in}")
    traces = np.einsum("ij,kji->k", rho, ch.kraus)
    return float(np.clip(np.sum(np.abs(traces) ** 2), 0.0, 1.0))


def entanglement_fidelity_purified(rho: np.ndarray, ch: SubChannel) -> float:
    """<ψ, (id ⊗ N)(ψψ) ψ> for the canonical purification ψ of ρ."""
    d = rho.shape[0]
    psi = purify(rho)
    out = ch.apply_on_second(psi, d)
    return float(np.vdot(psi, out @ psi).real)


def reduced_output(ch: SubChannel, state: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Partial trace of a channel output, convenience for tests and reports."""
    return partial_trace(ch(state), dims, keep)
