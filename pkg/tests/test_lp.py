from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog

from qsr.avqc.lp import phase_one, solve_feasibility

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def scipy_feasible(a, b):
    res = linprog(np.zeros(a.shape[1]), A_eq=a, b_eq=b, bounds=(0, None), method="highs")
    return res.status == 0


def random_system(rng, feasible, dyadic=False):
    m, n = int(rng.integers(1, 6)), int(rng.integers(1, 8))
    a = rng.integers(-3, 4, size=(m, n)).astype(float)
    if feasible:
        # dyadic witnesses keep b exactly representable for the rational path
        raw = rng.integers(0, 8, size=n) / 8 if dyadic else rng.random(n)
        x = raw * (rng.random(n) < 0.7)
        b = a @ x
    else:
        b = rng.integers(-3, 4, size=m).astype(float)
    return a, b


class TestSmallSystems:
    def test_simplex_point(self):
        res = phase_one(np.ones((1, 3)), np.array([1.0]))
        assert res.feasible
        assert res.x.sum() == pytest.approx(1.0)
        assert (res.x >= 0).all()

    def test_negative_rhs_is_infeasible(self):
        a, b = np.ones((1, 2)), np.array([-1.0])
        res = phase_one(a, b)
        assert not res.feasible
        lhs, rhs = res.certificate_margins(a, b)
        assert lhs <= 1e-12 and rhs > 0

    def test_contradictory_rows(self):
        a = np.array([[1.0, 1.0], [1.0, 1.0]])
        b = np.array([1.0, 2.0])
        for exact in (False, True):
            res = phase_one(a, b, exact=exact)
            assert not res.feasible
            lhs, rhs = res.certificate_margins(a, b)
            assert lhs <= 1e-9 and rhs > 0

    def test_exact_mode_flag(self):
        res = solve_feasibility(np.ones((1, 2)), np.array([1.0]), exact=True)
        assert res.exact and res.feasible


class TestAgainstHighs:
    @given(seeds, st.booleans())
    def test_verdict_matches(self, seed, feasible):
        rng = np.random.default_rng(seed)
        a, b = random_system(rng, feasible)
        res = solve_feasibility(a, b)
        assert res.feasible == scipy_feasible(a, b)
        if res.feasible:
            assert np.max(np.abs(a @ res.x - b)) <= 1e-7
            assert (res.x >= -1e-12).all()
        else:
            lhs, rhs = res.certificate_margins(a, b)
            assert lhs <= 1e-8 and rhs > 0

    @given(seeds)
    def test_exact_and_float_agree(self, seed):
        rng = np.random.default_rng(seed)
        a, b = random_system(rng, bool(rng.random() < 0.5), dyadic=True)
        assert phase_one(a, b).feasible == phase_one(a, b, exact=True).feasible
