from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsr.qcore import Channel, projector
from qsr.qcore.inequalities import (
    CHECKERS,
    InequalityReport,
    MalformedInstance,
    inequality_oracle,
    sample_instance,
)
from qsr.qcore.random import random_density, random_pure

seeds = st.integers(min_value=0, max_value=2**32 - 1)


class TestFixedInstances:
    def test_gentle_measurement_identity_effect(self, rng):
        rho = random_density(3, rng)
        rep = inequality_oracle("gentle_measurement", {"rho": rho, "effect": np.eye(3)})
        assert rep.lhs == pytest.approx(0.0, abs=1e-12)
        assert rep.rhs == 0.0
        assert rep.holds

    def test_average_product_all_ones(self):
        rep = inequality_oracle("average_product", {"a": [1, 1, 1], "b": [1, 1, 1], "eps": 0.0})
        assert (rep.lhs, rep.rhs, rep.holds) == (1.0, 1.0, True)
        assert rep.slack == 0.0

    def test_coherent_continuity_identical_states(self, rng):
        rho = random_density(4, rng)
        rep = inequality_oracle("coherent_continuity", {"rho": rho, "sigma": rho, "dims": (2, 2)})
        assert rep.lhs == pytest.approx(0.0, abs=1e-12)
        assert rep.rhs == pytest.approx(2 / math.e, abs=1e-6)

    def test_pure_fidelity_shift_equal_states(self, rng):
        rho = random_density(2, rng)
        psi = random_pure(2, rng)
        rep = inequality_oracle("pure_fidelity_shift", {"psi": psi, "rho": rho, "sigma": rho})
        assert rep.slack == pytest.approx(0.0, abs=1e-12)

    def test_projection_recovery_full_projection(self, rng):
        rho = random_density(2, rng)
        ident = Channel.identity(2)
        rep = inequality_oracle(
            "projection_recovery", {"rho": rho, "encoder": ident, "decoder": ident, "projection": np.eye(2)}
        )
        assert rep.lhs == pytest.approx(1.0)
        assert rep.rhs == pytest.approx(1.0)

    def test_entrywise_sqrt_diagonal(self):
        rep = inequality_oracle("entrywise_sqrt", {"L": np.diag([1.0, 4.0]), "D": np.diag([1.0, 1.0])})
        # lhs = (1 + 2) / 2, rhs = 2 (1 + 2)
        assert rep.lhs == pytest.approx(1.5)
        assert rep.rhs == pytest.approx(6.0)

    def test_report_serializes(self):
        rep = inequality_oracle("average_product", {"a": [0.9], "b": [0.8]})
        assert isinstance(rep, InequalityReport)
        assert set(rep.as_dict()) == {"lemma_id", "lhs", "rhs", "relation", "holds", "slack"}


class TestMalformed:
    def test_unknown_name(self):
        with pytest.raises(MalformedInstance):
            inequality_oracle("nope", {})

    def test_missing_field(self):
        with pytest.raises(MalformedInstance):
            inequality_oracle("gentle_measurement", {"rho": np.eye(2) / 2})

    def test_effect_out_of_range(self):
        with pytest.raises(MalformedInstance):
            inequality_oracle("gentle_measurement", {"rho": np.eye(2) / 2, "effect": 2 * np.eye(2)})

    def test_non_projection(self, rng):
        ident = Channel.identity(2)
        with pytest.raises(MalformedInstance):
            inequality_oracle(
                "projection_recovery",
                {"rho": np.eye(2) / 2, "encoder": ident, "decoder": ident, "projection": 0.5 * np.eye(2)},
            )

    def test_negative_matrix_entries(self):
        with pytest.raises(MalformedInstance):
            inequality_oracle("entrywise_sqrt", {"L": -np.eye(2), "D": np.eye(2)})

    def test_stated_eps_too_small(self):
        with pytest.raises(MalformedInstance):
            inequality_oracle("average_product", {"a": [0.5], "b": [1.0], "eps": 0.1})

    def test_dims_mismatch(self):
        with pytest.raises(MalformedInstance):
            inequality_oracle("coherent_continuity", {"rho": np.eye(4) / 4, "sigma": np.eye(4) / 4, "dims": (2, 3)})

    def test_malformed_is_value_error(self):
        assert issubclass(MalformedInstance, ValueError)


@pytest.mark.parametrize("name", sorted(CHECKERS))
class TestRandomInstances:
    @given(seed=seeds)
    def test_holds(self, name, seed):
        rep = inequality_oracle(name, sample_instance(name, np.random.default_rng(seed)))
        assert rep.holds, rep

    def test_batch(self, name, rng):
        worst = min(inequality_oracle(name, sample_instance(name, rng)).slack for _ in range(300))
        assert worst >= -1e-9


def test_gentle_measurement_against_direct_formula(rng):
    # rank-one effect: post-measurement state is the projector itself
    psi = random_pure(2, rng)
    rho = random_density(2, rng)
    eff = projector(psi)
    p = float(np.real(psi.conj() @ rho @ psi))
    rep = inequality_oracle("gentle_measurement", {"rho": rho, "effect": eff})
    diff = np.linalg.eigvalsh(rho - eff)
    # the operator square root of a projector amplifies round-off on the zero eigenvalue
    assert rep.lhs == pytest.approx(np.abs(diff).sum(), abs=1e-7)
    assert rep.rhs == pytest.approx(2 * math.sqrt(1 - p), abs=1e-12)
