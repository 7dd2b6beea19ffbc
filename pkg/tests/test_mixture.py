from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsr.coding.mixture import mixture_decomposition, reconstruct
from qsr.config import CapExceeded
from qsr.qcore import projector
from qsr.qcore.random import random_density, random_pure

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def tensor_word(cq, word):
    out = np.ones((1, 1))
    for x in word:
        out = np.kron(out, cq[x])
    return out


class TestExamples:
    def test_pure_letters_single_term(self, rng):
        cq = [projector(random_pure(2, rng)) for _ in range(2)]
        terms = mixture_decomposition(cq, (0, 1, 1))
        assert len(terms) == 1
        assert terms[0].weight == pytest.approx(1.0)
        assert terms[0].subspace.dim == 1

    def test_maximally_mixed_qubit_single_letter(self):
        terms = mixture_decomposition([np.eye(2) / 2], (0,))
        assert [t.weight for t in terms] == pytest.approx([0.5, 0.5])
        assert np.allclose(reconstruct(terms), np.eye(2) / 2, atol=1e-12)

    def test_two_letter_weights(self):
        rho = np.diag([0.75, 0.25])
        terms = mixture_decomposition([rho], (0, 0))
        # multinomial times eigenvalue products
        got = sorted((t.weight, t.subspace.dim) for t in terms)
        expected = [(0.25**2, 1), (2 * 0.75 * 0.25, 2), (0.75**2, 1)]
        assert [g[1] for g in got] == [e[1] for e in expected]
        assert [g[0] for g in got] == pytest.approx([e[0] for e in expected], abs=1e-12)


class TestProperties:
    @given(seeds)
    def test_reconstruction(self, seed):
        rng = np.random.default_rng(seed)
        cq = [random_density(2, rng) for _ in range(2)]
        word = tuple(int(x) for x in rng.integers(0, 2, size=int(rng.integers(1, 5))))
        terms = mixture_decomposition(cq, word)
        assert sum(t.weight for t in terms) == pytest.approx(1.0, abs=1e-12)
        assert np.max(np.abs(reconstruct(terms) - tensor_word(cq, word))) <= 1e-9

    @given(seeds)
    def test_subspaces_orthogonal(self, seed):
        rng = np.random.default_rng(seed)
        cq = [random_density(2, rng), random_density(2, rng)]
        terms = mixture_decomposition(cq, (0, 1, 0))
        for a, b in itertools.combinations(terms, 2):
            assert np.allclose(a.subspace.basis.conj().T @ b.subspace.basis, 0, atol=1e-10)

    def test_mismatched_dimensions(self, rng):
        with pytest.raises(ValueError):
            mixture_decomposition([random_density(2, rng), random_density(3, rng)], (0, 1))

    def test_cap(self):
        with pytest.raises(CapExceeded):
            mixture_decomposition([np.eye(2) / 2], (0,) * 9)
