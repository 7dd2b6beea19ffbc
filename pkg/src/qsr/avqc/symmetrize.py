"""Symmetrizability of an AVQC on a finite set of input states, as an LP."""

from __future__ import annotations

import dataclasses
import itertools
from collections.abc import Sequence

import numpy as np

from qsr.avqc.lp import LpResult, solve_feasibility
from qsr.avqc.sequences import AvqcSpec
from qsr.config import CapExceeded, get_caps
from qsr.qcore.linalg import DimensionError, density_operator


@dataclasses.dataclass
class SymmetrizabilityInstance:
    states: list[np.ndarray]
    l: int

    def __post_init__(self):
        if not self.states:
            raise ValueError("need at least one input state")
        self.states = [density_operator(s) for s in self.states]
        if len({s.shape for s in self.states}) != 1:
            raise DimensionError("input states must share one dimension")

    @property
    def k(self) -> int:
        return len(self.states)


@dataclasses.dataclass
class SymmetrizabilityResult:
    feasible: bool
    maps: list[dict] | None  # per state: s^l -> probability
    certificate: np.ndarray | None
    certificate_margins: tuple[float, float] | None  # (max A^T y, b^T y)
    residual: float | None  # max |A x - b| for the returned maps
    lp: LpResult
    n_variables: int
    n_constraints: int

    def as_dict(self) -> dict:
        out = {
            "status": "feasible" if self.feasible else "infeasible",
            "n_variables": self.n_variables,
            "n_constraints": self.n_constraints,
            "exact": self.lp.exact,
            "phase_one_value": self.lp.phase_one_value,
        }
        if self.feasible:
            out["maps"] = [{",".join(map(str, k)): v for k, v in sorted(m.items())} for m in self.maps]
            out["residual"] = self.residual
        else:
            out["certificate"] = [float(v) for v in self.certificate]
            out["certificate_max_ATy"], out["certificate_bTy"] = self.certificate_margins
        return out


def _hermitian_rows(m: np.ndarray) -> np.ndarray:
    """Real coordinates of a Hermitian matrix: Re of the upper triangle, Im strictly above."""
    iu = np.triu_indices(m.shape[-1])
    iu1 = np.triu_indices(m.shape[-1], 1)
    return np.concatenate([m[..., iu[0], iu[1]].real, m[..., iu1[0], iu1[1]].imag], axis=-1)


def symmetrizability_system(spec: AvqcSpec, inst: SymmetrizabilityInstance):
    """Equality system A x = b, x >= 0 over x = (p_1(s^l), ..., p_K(s^l))."""
    if inst.l != spec.l:
        raise ValueError("instance and spec blocklengths differ")
    d = spec.dim_in**spec.l
    if inst.states[0].shape != (d, d):
        raise DimensionError(f"states must live on H_A^(⊗l) of dimension {d}")
    seqs = spec.sequences()
    n_seq, k = len(seqs), inst.k
    n_var = k * n_seq
    cap = get_caps().lp_variables
    if n_var > cap:
        raise CapExceeded(f"{n_var} LP variables exceed the cap {cap}")
    chans = [spec.sequence_channel(s) for s in seqs]
    # outputs[i][t] = N_{s_t}(ρ_i) in real coordinates
    outputs = np.stack([np.stack([_hermitian_rows(ch(rho)) for ch in chans]) for rho in inst.states])
    blocks = []
    for i, j in itertools.combinations(range(k), 2):
        rows = np.zeros((outputs.shape[2], n_var))
        rows[:, i * n_seq:(i + 1) * n_seq] = outputs[j].T
        rows[:, j * n_seq:(j + 1) * n_seq] = -outputs[i].T
        blocks.append(rows)
    simplex = np.zeros((k, n_var))
    for i in range(k):
        simplex[i, i * n_seq:(i + 1) * n_seq] = 1.0
    a = np.vstack(blocks + [simplex]) if blocks else simplex
    b = np.concatenate([np.zeros(a.shape[0] - k), np.ones(k)])
    return a, b, seqs


def symmetrizability_lp(spec: AvqcSpec, inst: SymmetrizabilityInstance, exact: bool | None = None) -> SymmetrizabilityResult:
    """Search maps p: ρ_i -> P(S^l) with Σ p(ρ_i) N(ρ_j) = Σ p(ρ_j) N(ρ_i) for all i, j."""
    a, b, seqs = symmetrizability_system(spec, inst)
    res = solve_feasibility(a, b, exact=exact)
    n_seq = len(seqs)
    if res.feasible:
        x = np.clip(res.x, 0.0, None)
        maps = [{seqs[t]: float(x[i * n_seq + t]) for t in range(n_seq)} for i in range(inst.k)]
        return SymmetrizabilityResult(True, maps, None, None, float(np.max(np.abs(a @ x - b))), res, a.shape[1], a.shape[0])
    margins = res.certificate_margins(a, b)
    return SymmetrizabilityResult(False, None, res.certificate, margins, None, res, a.shape[1], a.shape[0])


def check_symmetrizing_maps(spec: AvqcSpec, inst: SymmetrizabilityInstance, maps: Sequence[dict], tol: float = 1e-8) -> float:
    """Largest entrywise violation of the symmetry condition for given maps."""
    worst = 0.0
    for i, j in itertools.combinations(range(inst.k), 2):
        lhs = sum(p * spec.sequence_channel(s)(inst.states[j]) for s, p in maps[i].items())
        rhs = sum(p * spec.sequence_channel(s)(inst.states[i]) for s, p in maps[j].items())
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst
