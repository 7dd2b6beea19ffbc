from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsr.qcore import (
    Channel,
    DimensionError,
    Povm,
    Subspace,
    SubChannel,
    apply_channel,
    binary_entropy,
    choi_to_kraus,
    coherent_information,
    coherent_information_purified,
    complementary_channel,
    density_operator,
    entanglement_fidelity,
    entanglement_fidelity_purified,
    entropy_exchange,
    fidelity,
    hs_norm,
    ket,
    maximally_entangled,
    maximally_mixed,
    mutual_information,
    partial_trace,
    permute_subsystems,
    projector,
    pure_vector,
    purify,
    tensor,
    trace_norm,
    von_neumann_entropy,
)
from qsr.qcore.random import random_channel, random_density, random_pure, random_subchannel, random_unitary

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def entropy_oracle(rho):
    """-Σ λ log2 λ from a scipy eigensolver, independent of the package's helper."""
    from scipy.linalg import eigh

    lam = eigh(rho, eigvals_only=True)
    lam = lam[lam > 1e-14]
    return float(-np.sum(lam * np.log2(lam)))


class TestStates:
    def test_density_operator_accepts_small_negative_round_off(self):
        rho = np.diag([1.0 + 1e-12, -1e-12])
        out = density_operator(rho)
        assert np.isclose(np.trace(out).real, 1.0)

    def test_density_operator_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            density_operator(np.array([[0.5, 0.3], [0.0, 0.5]]))

    def test_density_operator_rejects_negative_spectrum(self):
        with pytest.raises(ValueError):
            density_operator(np.diag([1.2, -0.2]))

    def test_pure_vector_norm(self):
        with pytest.raises(ValueError):
            pure_vector([1.0, 1.0])
        assert np.isclose(np.linalg.norm(pure_vector(np.array([1, 1j]) / np.sqrt(2))), 1.0)

    def test_subspace_columns_orthonormal(self):
        with pytest.raises(ValueError):
            Subspace(2, np.array([[1.0, 1.0], [0.0, 0.0]]))
        g = Subspace.span(4, [1, 3])
        assert g.dim == 2
        assert np.allclose(g.projector(), np.diag([0, 1, 0, 1]))
        assert np.allclose(g.maximally_mixed(), np.diag([0, 0.5, 0, 0.5]))


class TestChannelAction:
    def test_identity_returns_input(self, rng):
        rho = random_density(3, rng)
        assert np.allclose(apply_channel(Channel.identity(3), rho), rho)

    def test_completely_depolarizing_outputs_maximally_mixed(self, rng):
        rho = random_density(2, rng)
        assert np.allclose(apply_channel(Channel.completely_depolarizing(2), rho), np.eye(2) / 2)

    def test_half_dephasing_on_plus_state(self):
        plus = projector(np.array([1, 1]) / np.sqrt(2))
        assert np.allclose(Channel.dephasing(0.5)(plus), np.eye(2) / 2)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            Channel.identity(2)(np.eye(3) / 3)

    def test_non_trace_preserving_kraus_rejected_as_channel(self):
        with pytest.raises(ValueError):
            Channel([np.eye(2), np.eye(2)])

    def test_subchannel_may_lose_trace(self):
        sub = SubChannel([np.diag([1.0, 0.5])])
        assert np.trace(sub(np.eye(2) / 2)).real < 1

    def test_subchannel_cannot_amplify(self):
        with pytest.raises(ValueError):
            SubChannel([np.diag([1.0, 1.5])])

    @given(seeds)
    def test_channel_output_is_a_state(self, seed):
        rng = np.random.default_rng(seed)
        ch = random_channel(3, 2, 4, rng)
        out = ch(random_density(3, rng))
        assert np.isclose(np.trace(out).real, 1.0, atol=1e-9)
        assert np.linalg.eigvalsh(out)[0] > -1e-10

    @given(seeds)
    def test_choi_round_trip(self, seed):
        rng = np.random.default_rng(seed)
        ch = random_channel(2, 3, 3, rng)
        again = Channel(choi_to_kraus(ch.choi(), 2, 3))
        rho = random_density(2, rng)
        assert np.allclose(again(rho), ch(rho), atol=1e-10)

    def test_compose_and_tensor(self, rng):
        a = random_channel(2, 2, 2, rng)
        b = random_channel(2, 2, 2, rng)
        rho = random_density(2, rng)
        assert np.allclose(b.compose(a)(rho), b(a(rho)))
        sigma = random_density(2, rng)
        assert np.allclose(a.tensor(b)(np.kron(rho, sigma)), np.kron(a(rho), b(sigma)))

    def test_adjoint_is_dual(self, rng):
        ch = random_channel(2, 3, 2, rng)
        rho = random_density(2, rng)
        x = random_density(3, rng)
        assert np.isclose(np.trace(ch(rho) @ x), np.trace(rho @ ch.adjoint_apply(x)))

    def test_povm_validation(self):
        Povm([np.diag([1, 0]), np.diag([0, 1])])
        with pytest.raises(ValueError):
            Povm([np.diag([1, 0]), np.diag([0, 0.5])])


class TestComplementary:
    def test_identity_environment_is_trivial(self, rng):
        comp = complementary_channel(Channel.identity(2))
        assert comp.dim_out == 1
        assert von_neumann_entropy(comp(random_density(2, rng))) == pytest.approx(0.0, abs=1e-12)

    def test_unitary_environment_output_is_fixed(self, rng):
        comp = Channel.unitary(random_unitary(3, rng)).complementary()
        outs = [comp(random_density(3, rng)) for _ in range(3)]
        for o in outs:
            assert np.allclose(o, outs[0])

    @given(seeds)
    def test_environment_entropy_equals_entropy_exchange(self, seed):
        rng = np.random.default_rng(seed)
        ch = random_channel(2, 2, 2, rng)
        rho = random_density(2, rng)
        psi = purify(rho)
        joint = ch.apply_on_second(psi, 2)
        assert entropy_oracle(ch.complementary()(rho)) == pytest.approx(entropy_oracle(joint), abs=1e-8)
        assert entropy_exchange(rho, ch) == pytest.approx(entropy_oracle(joint), abs=1e-8)

    def test_environment_dimension(self, rng):
        ch = random_channel(2, 2, 3, rng)
        assert ch.complementary().dim_out == 3


class TestEntropies:
    @pytest.mark.parametrize("d", [1, 2, 3, 5])
    def test_maximally_mixed_entropy(self, d):
        assert von_neumann_entropy(maximally_mixed(d)) == pytest.approx(np.log2(d), abs=1e-12)

    def test_unitary_entropy_exchange_zero(self, rng):
        ch = Channel.unitary(random_unitary(2, rng))
        assert entropy_exchange(random_density(2, rng), ch) == pytest.approx(0.0, abs=1e-9)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_coherent_information_identity(self, d):
        assert coherent_information(maximally_mixed(d), Channel.identity(d)) == pytest.approx(np.log2(d), abs=1e-10)

    @pytest.mark.parametrize("q", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
    def test_coherent_information_dephasing(self, q):
        ch = Channel.dephasing(q)
        # output stays maximally mixed; the environment state is diag(1-q, q)
        expected = entropy_oracle(np.eye(2) / 2) - entropy_oracle(np.diag([1 - q, q]))
        assert coherent_information(maximally_mixed(2), ch) == pytest.approx(expected, abs=1e-8)
        assert expected == pytest.approx(1 - binary_entropy(q), abs=1e-12)

    def test_coherent_information_constant_channel(self, rng):
        rho = random_density(3, rng)
        ch = Channel.constant(random_density(2, rng), 3)
        assert coherent_information(rho, ch) == pytest.approx(-entropy_oracle(rho), abs=1e-8)

    @given(seeds)
    def test_coherent_information_purification_invariant(self, seed):
        rng = np.random.default_rng(seed)
        ch = random_channel(2, 3, 2, rng)
        rho = random_density(2, rng)
        # a second purification: rotate the reference of the canonical one
        u = random_unitary(2, rng)
        psi2 = np.kron(u, np.eye(2)) @ purify(rho)
        a = coherent_information(rho, ch)
        assert coherent_information_purified(rho, ch) == pytest.approx(a, abs=1e-8)
        assert coherent_information_purified(rho, ch, psi2) == pytest.approx(a, abs=1e-9)

    def test_mutual_information_examples(self, rng):
        assert mutual_information(np.kron(random_density(2, rng), random_density(3, rng)), (2, 3)) == pytest.approx(0, abs=1e-9)
        phi = maximally_entangled(2)
        assert mutual_information(projector(phi), (2, 2)) == pytest.approx(2.0, abs=1e-10)
        p = np.array([0.2, 0.5, 0.3])
        cq = sum(pi * np.kron(projector(ket(i, 3)), projector(ket(i, 3))) for i, pi in enumerate(p))
        assert mutual_information(cq, (3, 3)) == pytest.approx(-np.sum(p * np.log2(p)), abs=1e-10)

    def test_mutual_information_bad_split(self):
        with pytest.raises(DimensionError):
            mutual_information(np.eye(6) / 6, (4, 2))

    @given(seeds)
    def test_mutual_information_non_negative(self, seed):
        rng = np.random.default_rng(seed)
        assert mutual_information(random_density(6, rng), (2, 3)) >= -1e-9


class TestFidelities:
    def test_entanglement_fidelity_examples(self, rng):
        assert entanglement_fidelity(random_density(3, rng), Channel.identity(3)) == pytest.approx(1.0)
        assert entanglement_fidelity(maximally_mixed(2), Channel.dephasing(0.25)) == pytest.approx(0.75, abs=1e-12)
        for d in (2, 3):
            assert entanglement_fidelity(maximally_mixed(d), Channel.completely_depolarizing(d)) == pytest.approx(1 / d**2)

    @given(seeds)
    def test_entanglement_fidelity_two_forms(self, seed):
        rng = np.random.default_rng(seed)
        ch = random_subchannel(3, 3, 2, rng)
        rho = random_density(3, rng)
        assert entanglement_fidelity(rho, ch) == pytest.approx(entanglement_fidelity_purified(rho, ch), abs=1e-9)

    def test_fidelity_examples(self, rng):
        rho = random_density(3, rng)
        assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-9)
        assert trace_norm(rho - rho) == 0.0
        assert fidelity(projector(ket(0, 2)), maximally_mixed(2)) == pytest.approx(0.5)

    @given(seeds)
    def test_fidelity_symmetric_and_squared(self, seed):
        rng = np.random.default_rng(seed)
        rho, sigma = random_density(3, rng), random_density(3, rng)
        f = fidelity(rho, sigma)
        assert f == pytest.approx(fidelity(sigma, rho), abs=1e-9)
        assert 0 <= f <= 1
        # squared convention: pure states give |<a|b>|^2
        a, b = random_pure(3, rng), random_pure(3, rng)
        assert fidelity(projector(a), projector(b)) == pytest.approx(abs(np.vdot(a, b)) ** 2, abs=1e-10)

    def test_norms(self):
        m = np.diag([1.0, -2.0])
        assert trace_norm(m) == pytest.approx(3.0)
        assert hs_norm(m) == pytest.approx(np.sqrt(5))


class TestTensorAlgebra:
    @given(seeds)
    def test_partial_trace_of_product(self, seed):
        rng = np.random.default_rng(seed)
        rho, sigma = random_density(2, rng), random_density(3, rng)
        prod = tensor(rho, sigma)
        assert np.max(np.abs(partial_trace(prod, [2, 3], 0) - rho)) <= 1e-12
        assert np.max(np.abs(partial_trace(prod, [2, 3], 1) - sigma)) <= 1e-12

    @given(seeds)
    def test_purify_then_trace(self, seed):
        rng = np.random.default_rng(seed)
        rho = random_density(3, rng)
        assert np.allclose(partial_trace(projector(purify(rho)), [3, 3], 1), rho, atol=1e-10)

    def test_permute_subsystems_swaps(self, rng):
        a, b = random_density(2, rng), random_density(3, rng)
        swapped = permute_subsystems(np.kron(a, b), [2, 3], [1, 0])
        assert np.allclose(swapped, np.kron(b, a))
        vec = np.kron(ket(0, 2), ket(2, 3))
        assert np.allclose(permute_subsystems(vec, [2, 3], [1, 0]), np.kron(ket(2, 3), ket(0, 2)))

    def test_partial_trace_bad_dims(self):
        with pytest.raises(DimensionError):
            partial_trace(np.eye(4), [2, 3], 0)
