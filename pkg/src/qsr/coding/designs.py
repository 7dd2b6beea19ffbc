"""Unitary 2-designs on subspaces and their verification against the Haar twirl.

Qubit dimensions (2 and 4) are built from the Clifford group. Besides the
full group, a smaller design is available: the Pauli group times one
Clifford representative per element of a subgroup of the symplectic group
that acts transitively on the non-identity Paulis. For one qubit this gives
the 12-element tetrahedral design; for two qubits a 960-element design.
"""

from __future__ import annotations

import dataclasses
import functools
import itertools
import math
from collections.abc import Sequence

import numpy as np

from qsr.config import CapExceeded, get_caps
from qsr.qcore.linalg import Subspace

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j]).astype(complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.diag([1, -1]).astype(complex)
_CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


class DesignUnavailable(ValueError):
    """No verified design exists for the requested subspace dimension."""


@dataclasses.dataclass(frozen=True)
class UnitaryDesign:
    """Unitaries acting on the coordinates of ``subspace`` (shape ``(K, k, k)``)."""

    subspace: Subspace
    unitaries: np.ndarray
    label: str = "custom"

    def __post_init__(self):
        u = np.asarray(self.unitaries, dtype=complex)
        if u.ndim == 2:
            u = u[None]
        k = self.subspace.dim
        if u.shape[1:] != (k, k):
            raise ValueError(f"design unitaries must be {k}x{k}")
        dev = np.max(np.abs(np.einsum("nji,njk->nik", u.conj(), u) - np.eye(k)))
        if dev > 1e-10:
            raise ValueError(f"design element deviates from unitarity by {dev:.2e}")
        u.setflags(write=False)
        object.__setattr__(self, "unitaries", u)

    def __len__(self) -> int:
        return self.unitaries.shape[0]

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def within_size_bound(self) -> bool:
        return len(self) <= self.dim**4

    def embedded(self, index: int) -> np.ndarray:
        """B U B† as an operator on the ambient space (zero off the subspace)."""
        b = self.subspace.basis
        return b @ self.unitaries[index] @ b.conj().T


@dataclasses.dataclass(frozen=True)
class DesignReport:
    size: int
    dim: int
    twirl_deviation: float
    one_design_deviation: float
    within_size_bound: bool
    passed: bool

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


# --------------------------------------------------------------------------
# Clifford and Pauli groups


def _canonical(u: np.ndarray) -> np.ndarray:
    flat = u.reshape(-1)
    i = int(np.argmax(np.abs(flat) > 1e-8))
    return u * (abs(flat[i]) / flat[i])


def _key(u: np.ndarray) -> bytes:
    # adding 0 turns -0.0 into 0.0 so equal matrices hash equally
    return (np.round(u, 8) + 0.0).tobytes()


def _local(op: np.ndarray, qubit: int, n: int) -> np.ndarray:
    ops = [np.eye(2, dtype=complex)] * n
    ops[qubit] = op
    return functools.reduce(np.kron, ops)


def _check_qubits(n: int) -> None:
    if n < 1:
        raise ValueError("need at least one qubit")
    cap = get_caps().clifford_qubits
    if n > cap:
        raise CapExceeded(f"Clifford group on {n} qubits exceeds clifford_qubits cap {cap}")


@functools.lru_cache(maxsize=None)
def clifford_group(n: int) -> np.ndarray:
    """All n-qubit Cliffords modulo global phase, by breadth-first search."""
    _check_qubits(n)
    gens = [_local(g, q, n) for q in range(n) for g in (_H, _S)]
    if n == 2:
        gens.append(_CNOT)
    start = _canonical(np.eye(2**n, dtype=complex))
    seen = {_key(start): start}
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for g in gens:
                v = _canonical(g @ u)
                k = _key(v)
                if k not in seen:
                    seen[k] = v
                    nxt.append(v)
        frontier = nxt
    out = np.stack([seen[k] for k in sorted(seen)])
    out.setflags(write=False)
    return out


@functools.lru_cache(maxsize=None)
def pauli_group(n: int) -> np.ndarray:
    """The 4^n Pauli operators X^a Z^b (tensor order), modulo phase."""
    single = [np.eye(2, dtype=complex), _X, _Z, _X @ _Z]
    out = np.stack([functools.reduce(np.kron, [single[b] for b in bits]) for bits in itertools.product(range(4), repeat=n)])
    out.setflags(write=False)
    return out


def _pauli_permutations(cliffords: np.ndarray, paulis: np.ndarray) -> np.ndarray:
    """Row c, column p: index of the Pauli proportional to C P C†."""
    img = np.einsum("nij,pjk,nlk->npil", cliffords, paulis, cliffords.conj(), optimize=True)
    overlap = np.abs(np.einsum("qji,npji->npq", paulis.conj(), img, optimize=True))
    return overlap.argmax(axis=2)


def _compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(a[i] for i in b)


def _closure(gens: Sequence[tuple[int, ...]], limit: int) -> set | None:
    e = tuple(range(len(gens[0])))
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _compose(g, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > limit:
                        return None
        frontier = nxt
    return seen


def _perm_order(a: tuple[int, ...]) -> int:
    e = tuple(range(len(a)))
    x, k = a, 1
    while x != e:
        x, k = _compose(a, x), k + 1
    return k


@functools.lru_cache(maxsize=None)
def pauli_mixing_design(n: int) -> np.ndarray:
    """Paulis times Clifford representatives of a small transitive symplectic subgroup."""
    _check_qubits(n)
    paulis = pauli_group(n)
    cliffords = clifford_group(n)
    reps: dict[tuple[int, ...], np.ndarray] = {}
    for c, perm in zip(cliffords, _pauli_permutations(cliffords, paulis)):
        reps.setdefault(tuple(int(x) for x in perm), c)
    perms = sorted(reps)
    nonzero = len(paulis) - 1
    limit = 4 * nonzero
    # a transitive group's order is divisible by every prime factor of the
    # orbit size, so generators whose order carries the largest one go first
    big_prime = max(q for q in range(2, nonzero + 1) if nonzero % q == 0 and all(q % r for r in range(2, q)))
    ordered = sorted(perms, key=lambda p: (_perm_order(p) % big_prime != 0, _perm_order(p), p))
    group = None
    for a in ordered:
        for b in perms:
            g = _closure([a, b], limit)
            if g is not None and len({x[1] for x in g}) == nonzero:
                group = g
                break
        if group is not None:
            break
    if group is None:  # pragma: no cover - the search always succeeds for n <= 2
        raise DesignUnavailable("no transitive symplectic subgroup found")
    chosen = [reps[p] for p in sorted(group)]
    out = np.stack([_canonical(p @ c) for c in chosen for p in paulis])
    out.setflags(write=False)
    return out


# --------------------------------------------------------------------------
# construction and verification


def make_design(
    subspace: Subspace, candidates: np.ndarray | None = None, kind: str = "minimal"
) -> UnitaryDesign:
    """A verified 2-design on ``subspace``.

    ``kind`` selects ``"minimal"`` (Pauli-mixing design) or ``"clifford"``
    (full Clifford group) for qubit dimensions. For other dimensions a
    candidate set must be supplied; it is returned only if it verifies.
    """
    k = subspace.dim
    if candidates is not None:
        design = UnitaryDesign(subspace, np.asarray(candidates), "candidate")
        report = verify_design(design)
        if not report.passed:
            raise DesignUnavailable(
                f"candidate set fails verification (twirl deviation {report.twirl_deviation:.2e})"
            )
        return design
    if k == 1:
        return UnitaryDesign(subspace, np.ones((1, 1, 1), dtype=complex), "trivial")
    n = int(round(math.log2(k)))
    if 2**n != k:
        raise DesignUnavailable(f"no built-in design for dimension {k}; supply verified candidates")
    if kind == "clifford":
        return UnitaryDesign(subspace, clifford_group(n), "clifford")
    if kind == "minimal":
        return UnitaryDesign(subspace, pauli_mixing_design(n), "pauli-mixing")
    raise ValueError(f"unknown design kind {kind!r}")


def twirl_superoperator(unitaries: np.ndarray) -> np.ndarray:
    """Superoperator of X -> mean (U⊗U) X (U⊗U)†, acting on row-major vec(X)."""
    w = np.einsum("nab,ncd->nacbd", unitaries, unitaries)
    k2 = unitaries.shape[1] ** 2
    w = w.reshape(len(unitaries), k2 * k2)
    # M[(a,b),(c,d)] = mean W_ab conj(W_cd), regrouped to ((a,c),(b,d))
    m = (w.T @ w.conj()) / len(unitaries)
    return m.reshape(k2, k2, k2, k2).transpose(0, 2, 1, 3).reshape(k2 * k2, k2 * k2)


def haar_twirl_superoperator(k: int) -> np.ndarray:
    """X -> P_s tr(P_s X)/d_s + P_a tr(P_a X)/d_a on C^k ⊗ C^k."""
    swap = np.eye(k * k).reshape(k, k, k, k).transpose(0, 1, 3, 2).reshape(k * k, k * k)
    ident = np.eye(k * k)
    out = np.zeros((k**4, k**4), dtype=complex)
    for proj, d in ((ident + swap) / 2, k * (k + 1) // 2), ((ident - swap) / 2, k * (k - 1) // 2):
        if d == 0:
            continue
        vec = proj.reshape(-1)
        # vec(P tr(P X)) = |P>> <<P^T| ... with P real symmetric this is vec vec^T
        out += np.outer(vec, vec.conj()) / d
    return out


def haar_twirl(x: np.ndarray) -> np.ndarray:
    """Closed-form Haar two-fold twirl of an operator on C^k ⊗ C^k."""
    k = int(round(math.sqrt(x.shape[0])))
    return (haar_twirl_superoperator(k) @ x.reshape(-1)).reshape(x.shape)


def design_twirl(design: UnitaryDesign, x: np.ndarray) -> np.ndarray:
    ww = np.einsum("nab,ncd->nacbd", design.unitaries, design.unitaries)
    k2 = design.dim**2
    ww = ww.reshape(len(design), k2, k2)
    return np.einsum("nij,jk,nlk->il", ww, x, ww.conj()) / len(design)


def one_design_average(design: UnitaryDesign, rho: np.ndarray) -> np.ndarray:
    u = design.unitaries
    return np.einsum("nij,jk,nlk->il", u, rho, u.conj()) / len(design)


def verify_design(design: UnitaryDesign, tol: float = 1e-8) -> DesignReport:
    """Compare the design's two-fold twirl with the Haar twirl entrywise."""
    k = design.dim
    twirl = twirl_superoperator(design.unitaries)
    dev2 = float(np.max(np.abs(twirl - haar_twirl_superoperator(k))))
    # 1-design: mean U X U† = tr(X) I/k, i.e. superoperator |I>><<I|/k
    u = design.unitaries
    one = np.einsum("nab,ncd->acbd", u, u.conj()).reshape(k * k, k * k) / len(design)
    ident = np.eye(k).reshape(-1)
    dev1 = float(np.max(np.abs(one - np.outer(ident, ident) / k)))
    return DesignReport(
        size=len(design),
        dim=k,
        twirl_deviation=dev2,
        one_design_deviation=dev1,
        within_size_bound=design.within_size_bound(),
        passed=bool(dev2 <= tol and dev1 <= tol),
    )
