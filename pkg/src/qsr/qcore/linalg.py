"""States, entropies, fidelities and norms on small Hilbert spaces.

States are plain complex numpy arrays: density operators are ``(d, d)``
Hermitian matrices and pure states are ``(d,)`` unit vectors. Constructors
below validate and lightly repair round-off; everything else assumes valid
input. All logarithms are base 2.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Sequence
from functools import reduce

import numpy as np

from qsr.config import EIG_CLAMP, STATE_TOL


class DimensionError(ValueError):
    """Raised on inconsistent Hilbert-space dimensions."""


# --------------------------------------------------------------------------
# construction and validation


def density_operator(matrix, tol: float = STATE_TOL) -> np.ndarray:
    """Validate ``matrix`` as a density operator and return a clean copy.

    Negative eigenvalues down to ``-tol`` are clamped to zero and the result
    renormalised. Anything further from a state raises ``ValueError``.
    """
    rho = np.array(matrix, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"density operator must be square, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T), initial=0.0) > tol:
        raise ValueError("matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ValueError(f"trace {np.trace(rho).real!r} differs from 1")
    evals, evecs = np.linalg.eigh(hermitian_part(rho))
    if evals.min() < -tol:
        raise ValueError(f"matrix has eigenvalue {evals.min():.3e} < 0")
    if evals.min() < 0:
        evals = np.clip(evals, 0.0, None)
        rho = (evecs * evals) @ evecs.conj().T
        rho /= np.trace(rho).real
    return hermitian_part(rho)


def pure_vector(amplitudes, tol: float = STATE_TOL) -> np.ndarray:
    vec = np.array(amplitudes, dtype=complex).reshape(-1)
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"vector norm {norm!r} differs from 1")
    return vec / norm


def is_density(rho: np.ndarray, tol: float = STATE_TOL) -> bool:
    try:
        density_operator(rho, tol)
    except ValueError:
        return False
    return True


def hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(vec: np.ndarray) -> np.ndarray:
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    return np.outer(vec, vec.conj())


def maximally_mixed(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex) / dim


def maximally_entangled(dim: int) -> np.ndarray:
    """|Φ> = Σ_i |i>|i> / √d on C^d ⊗ C^d."""
    return np.eye(dim, dtype=complex).reshape(-1) / np.sqrt(dim)


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of any number of vectors or matrices."""
    if not ops:
        return np.ones((1, 1), dtype=complex)
    return reduce(np.kron, ops)


# --------------------------------------------------------------------------
# spectral helpers


def herm_eig(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of the Hermitian part of ``m`` (ascending order)."""
    return np.linalg.eigh(hermitian_part(np.asarray(m, dtype=complex)))


def matrix_function(m: np.ndarray, fn) -> np.ndarray:
    evals, evecs = herm_eig(m)
    return (evecs * fn(evals)) @ evecs.conj().T


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    return matrix_function(m, lambda x: np.sqrt(np.clip(x, 0.0, None)))


def psd_inv_sqrt(m: np.ndarray, cutoff: float = 1e-12) -> np.ndarray:
    """Moore-Penrose inverse square root on the support of ``m``."""

    def f(x):
        out = np.zeros_like(x)
        keep = x > cutoff
        out[keep] = 1.0 / np.sqrt(x[keep])
        return out

    return matrix_function(m, f)


def shannon_entropy(p) -> float:
    p = np.asarray(p, dtype=float)
    p = p[p > EIG_CLAMP]
    return float(-np.sum(p * np.log2(p)))


def von_neumann_entropy(rho: np.ndarray) -> float:
    """S(ρ) = -tr ρ log ρ with 0 log 0 = 0 and round-off eigenvalues clamped."""
    evals = np.linalg.eigvalsh(hermitian_part(np.asarray(rho, dtype=complex)))
    return shannon_entropy(np.clip(evals, 0.0, None))


def binary_entropy(q: float) -> float:
    return shannon_entropy([q, 1.0 - q])


# --------------------------------------------------------------------------
# partial traces and purification


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Sequence[int] | int) -> np.ndarray:
    """Trace out every subsystem of ``rho`` not listed in ``keep``.

    ``dims`` lists subsystem dimensions in tensor order; kept subsystems stay
    in their original relative order.
    """
    dims = [int(d) for d in dims]
    if isinstance(keep, (int, np.integer)):
        keep = [int(keep)]
    keep = sorted(int(k) for k in keep)
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise DimensionError(f"state of shape {rho.shape} does not match dims {dims}")
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionError(f"keep={keep} out of range for {len(dims)} subsystems")
    n = len(dims)
    t = rho.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # einsum with explicit index lists to contract each traced pair
    row = list(range(n))
    col = [n + i for i in range(n)]
    for i in traced:
        col[i] = row[i]
    out = [row[i] for i in keep] + [col[i] for i in keep]
    reduced = np.einsum(t, row + col, out)
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    return reduced.reshape(d_keep, d_keep)


def permute_subsystems(op: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors: new factor ``i`` is old factor ``perm[i]``.

    Works on vectors and on square matrices.
    """
    dims = list(dims)
    n = len(dims)
    perm = list(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of {n} factors")
    new_dims = [dims[p] for p in perm]
    if op.ndim == 1:
        return op.reshape(dims).transpose(perm).reshape(-1)
    t = op.reshape(dims + dims).transpose(perm + [n + p for p in perm])
    d = int(np.prod(new_dims))
    return t.reshape(d, d)


def purify(rho: np.ndarray) -> np.ndarray:
    """A purification ψ ∈ C^d ⊗ C^d of ρ with the reference as first factor.

    ψ = Σ_i √λ_i |i> ⊗ |e_i>, so tracing out the first factor returns ρ.
    """
    evals, evecs = herm_eig(rho)
    evals = np.clip(evals, 0.0, None)
    d = rho.shape[0]
    # column i of evecs is |e_i>; amplitude matrix M[i, j] = √λ_i <j|e_i>
    amp = (np.sqrt(evals)[:, None] * evecs.T)
    return amp.reshape(d * d)


# --------------------------------------------------------------------------
# norms and fidelities


def trace_norm(m: np.ndarray) -> float:
    m = np.asarray(m, dtype=complex)
    if m.shape[0] == m.shape[1] and np.allclose(m, m.conj().T, atol=1e-13):
        return float(np.sum(np.abs(np.linalg.eigvalsh(hermitian_part(m)))))
    return float(np.sum(np.linalg.svd(m, compute_uv=False)))


def hs_norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(m), "fro"))


def operator_norm(m: np.ndarray) -> float:
    return float(np.linalg.norm(np.asarray(m), 2))


def _as_pure(x: np.ndarray, tol: float = 1e-12) -> np.ndarray | None:
    if x.ndim == 1:
        return x
    evals, evecs = herm_eig(x)
    if evals[-1] > 1.0 - tol and abs(np.trace(x).real - 1.0) < tol:
        return evecs[:, -1]
    return None


def fidelity(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Squared fidelity F(ρ, σ) = ‖√ρ √σ‖₁².

    Either argument may be a state vector; a pure argument uses <φ, σ φ>.
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    phi = _as_pure(rho)
    if phi is not None:
        other = projector(sigma) if sigma.ndim == 1 else sigma
        return float(np.clip(np.vdot(phi, other @ phi).real, 0.0, 1.0))
    phi = _as_pure(sigma)
    if phi is not None:
        return float(np.clip(np.vdot(phi, rho @ phi).real, 0.0, 1.0))
    value = np.sum(np.linalg.svd(psd_sqrt(rho) @ psd_sqrt(sigma), compute_uv=False)) ** 2
    return float(np.clip(value, 0.0, 1.0))


def coherent_information_state(sigma: np.ndarray, dims: tuple[int, int]) -> float:
    """I(A⟩B, σ) = S(σ^B) - S(σ) for a bipartite state on A ⊗ B."""
    return von_neumann_entropy(partial_trace(sigma, dims, 1)) - von_neumann_entropy(sigma)


def mutual_information(rho_xb: np.ndarray, split: tuple[int, int]) -> float:
    """I(X;B, ρ) = S(ρ^X) + S(ρ^B) - S(ρ)."""
    dx, db = (int(s) for s in split)
    if dx * db != rho_xb.shape[0]:
        raise DimensionError(f"split {split} inconsistent with dimension {rho_xb.shape[0]}")
    return (
        von_neumann_entropy(partial_trace(rho_xb, (dx, db), 0))
        + von_neumann_entropy(partial_trace(rho_xb, (dx, db), 1))
        - von_neumann_entropy(rho_xb)
    )


@dataclasses.dataclass(frozen=True)
class Subspace:
    """Subspace of C^ambient_dim spanned by orthonormal columns of ``basis``."""

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex)
        if b.ndim == 1:
            b = b[:, None]
        if b.shape[0] != self.ambient_dim:
            raise DimensionError("basis rows must equal ambient dimension")
        if b.shape[1] < 1:
            raise ValueError("subspace must have dimension >= 1")
        if np.max(np.abs(b.conj().T @ b - np.eye(b.shape[1]))) > STATE_TOL:
            raise ValueError("subspace basis is not orthonormal")
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def span(cls, ambient_dim: int, indices: Sequence[int]) -> Subspace:
        """Span of computational basis vectors."""
        return cls(ambient_dim, np.eye(ambient_dim, dtype=complex)[:, list(indices)])

    @classmethod
    def full(cls, dim: int) -> Subspace:
        return cls(dim, np.eye(dim, dtype=complex))

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def maximally_mixed(self) -> np.ndarray:
        return self.projector() / self.dim

    def maximally_entangled(self) -> np.ndarray:
        """Σ_i |i>_ref ⊗ |b_i> / √k, reference C^dim first."""
        return self.basis.T.reshape(-1) / np.sqrt(self.dim)

    def tensor(self, other: Subspace) -> Subspace:
        return Subspace(self.ambient_dim * other.ambient_dim, np.kron(self.basis, other.basis))

    def first(self, k: int) -> Subspace:
        """Subspace spanned by the first ``k`` basis vectors."""
        if not 1 <= k <= self.dim:
            raise ValueError(f"k={k} outside 1..{self.dim}")
        return Subspace(self.ambient_dim, self.basis[:, :k])


def tensor_subspaces(subspaces: Sequence[Subspace]) -> Subspace:
    return reduce(lambda a, b: a.tensor(b), subspaces)
