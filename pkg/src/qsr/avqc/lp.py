"""Phase-one simplex with Bland's rule for {x : A x = b, x >= 0}.

Infeasible systems come with a Farkas certificate y (A^T y <= 0, b^T y > 0)
read off the final phase-one tableau. The same routine runs on floats or on
``fractions.Fraction`` entries for an exact re-check of small instances.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction

import numpy as np

from qsr.config import LP_FEAS_TOL

PIVOT_TOL = 1e-11
EXACT_DENOMINATOR = 10**9
EXACT_SIZE_LIMIT = 40_000  # rows * columns


@dataclasses.dataclass
class LpResult:
    feasible: bool
    x: np.ndarray | None
    certificate: np.ndarray | None  # Farkas vector when infeasible
    phase_one_value: float
    iterations: int
    exact: bool

    def certificate_margins(self, a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
        """(max_j (A^T y)_j, b^T y); a valid certificate has the first <= 0 < second."""
        y = np.asarray(self.certificate, dtype=float)
        return float(np.max(a.T @ y)) if a.size else 0.0, float(b @ y)


def _to_fraction(v) -> Fraction:
    return Fraction(float(v)).limit_denominator(EXACT_DENOMINATOR)


def phase_one(a, b, exact: bool = False, max_iter: int | None = None) -> LpResult:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = a.shape
    sign = np.where(b < 0, -1.0, 1.0)
    if exact:
        zero, one, eps = Fraction(0), Fraction(1), Fraction(0)
        tab = np.empty((m + 1, n + m + 1), dtype=object)
        tab[:] = zero
        for i in range(m):
            s = int(sign[i])
            for j in range(n):
                tab[i, j] = s * _to_fraction(a[i, j])
            tab[i, n + i] = one
            tab[i, -1] = s * _to_fraction(b[i])
    else:
        one, eps = 1.0, PIVOT_TOL
        tab = np.zeros((m + 1, n + m + 1))
        tab[:m, :n] = a * sign[:, None]
        tab[:m, n:n + m] = np.eye(m)
        tab[:m, -1] = b * sign
    # objective row holds reduced costs of min Σ artificials
    tab[m, :] = -tab[:m, :].sum(axis=0)
    for i in range(m):
        tab[m, n + i] = tab[m, n + i] + one
    basis = list(range(n, n + m))
    limit = max_iter or 50 * (n + m) + 1000
    it = 0
    while it < limit:
        costs = tab[m, :-1]
        entering = next((j for j in range(n + m) if costs[j] < -eps), None)
        if entering is None:
            break
        col = tab[:m, entering]
        best, leave = None, None
        for i in range(m):
            if col[i] > eps:
                ratio = tab[i, -1] / col[i]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # pragma: no cover - phase one is bounded below by 0
            raise RuntimeError("unbounded phase-one problem")
        tab[leave, :] = tab[leave, :] / tab[leave, entering]
        for i in range(m + 1):
            if i != leave and tab[i, entering] != 0:
                tab[i, :] = tab[i, :] - tab[i, entering] * tab[leave, :]
        basis[leave] = entering
        it += 1
    else:
        raise RuntimeError(f"simplex did not converge in {limit} iterations")
    value = -tab[m, -1]
    x = np.zeros(n)
    for i, j in enumerate(basis):
        if j < n:
            x[j] = float(tab[i, -1])
    # y = c_B B^{-1}; artificial columns start as I with cost 1, so y = 1 - r_art
    y = np.array([float(one - tab[m, n + i]) for i in range(m)]) * sign
    feasible = (value == 0) if exact else bool(float(value) <= LP_FEAS_TOL)
    return LpResult(
        feasible=bool(feasible),
        x=x if feasible else None,
        certificate=None if feasible else y,
        phase_one_value=float(value),
        iterations=it,
        exact=exact,
    )


def solve_feasibility(a, b, exact: bool | None = None) -> LpResult:
    """Float solve, re-run exactly when small and the float verdict is marginal."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if exact:
        return phase_one(a, b, exact=True)
    res = phase_one(a, b)
    marginal = 1e-3 * LP_FEAS_TOL < res.phase_one_value < 1e3 * LP_FEAS_TOL
    if res.feasible:
        bad = np.max(np.abs(a @ res.x - b)) > 1e2 * LP_FEAS_TOL if a.size else False
    else:
        lhs, rhs = res.certificate_margins(a, b)
        bad = lhs > LP_FEAS_TOL or rhs <= 0
    if (marginal or bad) and exact is None and a.size <= EXACT_SIZE_LIMIT:
        return phase_one(a, b, exact=True)
    return res
