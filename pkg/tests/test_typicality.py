from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsr.config import TypicalityConfig
from qsr.qcore import Channel, Subspace, entanglement_fidelity, ket, permute_subsystems, projector
from qsr.qcore.random import random_channel, random_density, random_pure, random_unitary
from qsr.typicality import (
    TypeDistribution,
    all_types,
    all_words,
    is_typical,
    multinomial,
    product_state,
    reduced_operation,
    type_class,
    typical_projector,
    typical_projector_product,
    typical_set,
)

RELAXED = TypicalityConfig(relaxed=True)
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def brute_typical(p, delta, l, relaxed=False):
    """Enumerate X^l against the frequency window and zero-count rule."""
    out = []
    for w in itertools.product(range(len(p)), repeat=l):
        counts = np.bincount(w, minlength=len(p))
        if np.any(np.abs(counts / l - p) > delta):
            continue
        zero_p, zero_n = np.asarray(p) == 0, counts == 0
        ok = np.all(~zero_p | zero_n) if relaxed else np.all(zero_p == zero_n)
        if ok:
            out.append(w)
    return sorted(out)


class TestTypicalSet:
    def test_deterministic_source(self):
        assert typical_set([1.0, 0.0], 0.2, 3) == [(0, 0, 0)]

    def test_fair_coin_length_two(self):
        assert typical_set([0.5, 0.5], 0.1, 2) == [(0, 1), (1, 0)]

    def test_fair_coin_length_one_is_empty(self):
        assert typical_set([0.5, 0.5], 0.1, 1) == []

    def test_literal_rule_excludes_absent_letters(self):
        # counts (3, 0) are within δ of (0.9, 0.1) but the letter with p > 0 is missing
        assert (0, 0, 0) not in typical_set([0.9, 0.1], 0.2, 3)
        assert (0, 0, 0) in typical_set([0.9, 0.1], 0.2, 3, RELAXED)

    @pytest.mark.parametrize("bad", [0.0, -0.1])
    def test_delta_must_be_positive(self, bad):
        with pytest.raises(ValueError):
            typical_set([0.5, 0.5], bad, 2)

    @given(seeds, st.booleans())
    def test_matches_enumeration(self, seed, relaxed):
        rng = np.random.default_rng(seed)
        a = int(rng.integers(2, 4))
        p = rng.dirichlet(np.ones(a))
        if rng.random() < 0.3:
            p[0] = 0.0
            p /= p.sum()
        delta, l = float(rng.uniform(0.05, 0.5)), int(rng.integers(1, 6))
        cfg = TypicalityConfig(relaxed=relaxed)
        assert typical_set(p, delta, l, cfg) == brute_typical(p, delta, l, relaxed)

    @given(seeds)
    def test_monotone_in_delta(self, seed):
        rng = np.random.default_rng(seed)
        p = rng.dirichlet(np.ones(3))
        d1, d2 = sorted(rng.uniform(0.01, 0.5, size=2))
        l = int(rng.integers(1, 6))
        assert set(typical_set(p, d1, l)) <= set(typical_set(p, d2, l))

    def test_is_typical_agrees(self):
        for w in all_words(2, 4):
            assert is_typical(w, [0.5, 0.5], 0.25) == (w in typical_set([0.5, 0.5], 0.25, 4))


class TestTypes:
    def test_small_type_lists(self):
        assert sorted(t.counts for t in all_types(2, 2)) == [(0, 2), (1, 1), (2, 0)]
        assert len(all_types(2, 4)) == 5
        assert sorted(type_class((1, 1))) == [(0, 1), (1, 0)]

    @pytest.mark.parametrize("a,l", [(2, 1), (2, 5), (3, 4), (4, 3)])
    def test_stars_and_bars(self, a, l):
        types = all_types(a, l)
        assert len(types) == math.comb(l + a - 1, a - 1)
        assert len({t.counts for t in types}) == len(types)

    @pytest.mark.parametrize("a,l", [(2, 4), (3, 3)])
    def test_type_classes_partition_words(self, a, l):
        seen = []
        for t in all_types(a, l):
            cls = type_class(t)
            assert len(cls) == multinomial(t.counts)
            assert all(TypeDistribution.of(w, a) == t for w in cls)
            seen.extend(cls)
        assert sorted(seen) == sorted(all_words(a, l))

    @given(seeds)
    def test_type_class_inside_or_outside(self, seed):
        rng = np.random.default_rng(seed)
        p = rng.dirichlet(np.ones(2))
        delta = float(rng.uniform(0.05, 0.5))
        typ = set(typical_set(p, delta, 4))
        for t in all_types(2, 4):
            cls = set(type_class(t))
            assert cls <= typ or not (cls & typ)


class TestTypicalProjector:
    def test_pure_state(self, rng):
        psi = random_pure(2, rng)
        tp = typical_projector(projector(psi), 0.2, 3)
        target = projector(np.kron(np.kron(psi, psi), psi))
        assert np.allclose(tp.projector, target, atol=1e-10)
        assert tp.trace == pytest.approx(1.0)

    def test_maximally_mixed_pair(self):
        tp = typical_projector(np.eye(2) / 2, 0.1, 2)
        assert tp.rank == 2
        expected = projector(ket(1, 4)) + projector(ket(2, 4))
        assert np.allclose(tp.projector, expected)

    @pytest.mark.parametrize("delta", [0.0, 0.5, 0.7])
    def test_delta_range(self, delta):
        with pytest.raises(ValueError):
            typical_projector(np.eye(2) / 2, delta, 2)

    @given(seeds)
    def test_commutes_and_operator_bound(self, seed):
        rng = np.random.default_rng(seed)
        rho = random_density(2, rng)
        l = int(rng.integers(1, 5))
        tp = typical_projector(rho, float(rng.uniform(0.05, 0.45)), l)
        q = tp.projector
        state = rho
        for _ in range(l - 1):
            state = np.kron(state, rho)
        assert np.max(np.abs(q @ state - state @ q)) <= 1e-10
        assert np.allclose(q @ q, q, atol=1e-10)
        if tp.rank:
            gap = tp.operator_bound() * q - q @ state @ q
            assert np.linalg.eigvalsh(gap)[0] >= -1e-10
        assert 0.0 <= tp.trace <= 1.0 + 1e-12

    def test_product_form_is_tensor_of_letter_projectors(self, rng):
        a = projector(random_pure(2, rng))
        b = np.eye(2) / 2
        tp = typical_projector_product([a, b], (0, 1), 0.3, RELAXED)
        qa = typical_projector(a, 0.3, 1, RELAXED).projector
        qb = typical_projector(b, 0.3, 1, RELAXED).projector
        assert np.allclose(tp.projector, np.kron(qa, qb))

    @given(seeds)
    def test_product_form_commutes(self, seed):
        rng = np.random.default_rng(seed)
        states = [random_density(2, rng) for _ in range(2)]
        word = tuple(int(x) for x in rng.integers(0, 2, size=int(rng.integers(1, 5))))
        tp = typical_projector_product(states, word, 0.3, RELAXED)
        rho = product_state(states, word)
        assert np.max(np.abs(tp.projector @ rho - rho @ tp.projector)) <= 1e-10

    def test_permutation_covariance(self, rng):
        states = [random_density(2, rng) for _ in range(2)]
        word = (0, 1, 1)
        perm = [2, 0, 1]
        permuted_word = tuple(word[i] for i in perm)
        q = typical_projector_product(states, word, 0.3, RELAXED).projector
        q_perm = typical_projector_product(states, permuted_word, 0.3, RELAXED).projector
        assert np.allclose(permute_subsystems(q, [2, 2, 2], perm), q_perm, atol=1e-10)


class TestReducedOperation:
    def test_unitary_channel_is_unchanged(self, rng):
        u = random_unitary(2, rng)
        ch = Channel.unitary(u)
        g = [Subspace.full(2)]
        red = reduced_operation(ch, g, (0, 0), 0.2, RELAXED)
        assert red.kraus_count == 1
        assert red.trace_on_pi == pytest.approx(1.0)
        rho = random_density(4, rng)
        assert np.allclose(red.operation(rho), ch.power(2)(rho))

    def test_ordering_and_fidelity_monotonicity(self, rng):
        ch = random_channel(2, 2, 2, rng)
        g = [Subspace.full(2)]
        red = reduced_operation(ch, g, (0, 0), 0.3, RELAXED)
        full = ch.power(2)
        assert red.kraus_count <= red.full_kraus_count
        for _ in range(100):
            sigma = random_density(4, rng)
            gap = full(sigma) - red.operation(sigma)
            assert np.linalg.eigvalsh(gap)[0] >= -1e-10
        for _ in range(20):
            rho = random_density(4, rng)
            assert entanglement_fidelity(rho, red.operation) <= entanglement_fidelity(rho, full) + 1e-10

    def test_subspaces_must_match_channel(self):
        with pytest.raises(ValueError):
            reduced_operation(Channel.identity(2), [Subspace.full(3)], (0,), 0.2)
