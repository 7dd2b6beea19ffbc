"""Acceptance criteria 1-12; a per-criterion PASS/FAIL summary is printed at the end of the run."""

from __future__ import annotations

import itertools
import json
import math
import time

import numpy as np
import pytest
import scipy.linalg

from qsr.avqc.jammer import (
    jammer_effect_operator,
    performance_under_jammer,
    permutation_bound_check,
    replacement_jammer,
)
from qsr.avqc.sequences import AvqcSpec, random_hypothesis_table, robustlemma_check
from qsr.avqc.symmetrize import SymmetrizabilityInstance, check_symmetrizing_maps, symmetrizability_lp
from qsr.cli import main, run_suite
from qsr.coding.cet import CETCode
from qsr.coding.classical import pgm_code
from qsr.coding.designs import design_twirl, make_design, one_design_average
from qsr.coding.entanglement import decoupling_bound, random_et_family
from qsr.coding.recovery import bk_recovery
from qsr.config import TypicalityConfig
from qsr.nets import diamond_distance_bracket, tau_net
from qsr.qcore import Channel, Subspace, coherent_information, ket, projector
from qsr.qcore.random import random_channel, random_density, random_isometry
from qsr.regions import Ensemble, compound_rectangle, inner_region, rate_rectangle
from qsr.serialization import encode_matrix

RELAXED = TypicalityConfig(relaxed=True)


def h2(q):
    return -q * math.log2(q) - (1 - q) * math.log2(1 - q)


def oracle_entropy(rho):
    ev = scipy.linalg.eigvalsh(rho)
    ev = ev[ev > 1e-15]
    return float(-(ev * np.log2(ev)).sum())


def oracle_coherent_information(ch, d):
    """S(B) - S(RB) on the normalised Choi state, with scipy eigenvalues."""
    choi = ch.choi() / d
    out = choi.reshape(d, ch.dim_out, d, ch.dim_out).trace(axis1=0, axis2=2)
    return oracle_entropy(out) - oracle_entropy(choi)


def symmetric_projector(k):
    vecs = []
    for i, j in itertools.combinations_with_replacement(range(k), 2):
        v = np.zeros(k * k)
        v[i * k + j] += 1
        v[j * k + i] += 1
        vecs.append(v / np.linalg.norm(v))
    return sum(np.outer(v, v) for v in vecs)


def haar_oracle(x):
    k = int(round(math.sqrt(x.shape[0])))
    ps = symmetric_projector(k)
    pa = np.eye(k * k) - ps
    return ps * np.trace(ps @ x) / (k * (k + 1) / 2) + pa * np.trace(pa @ x) / (k * (k - 1) / 2)


@pytest.mark.criterion(1)
def test_entropic_exactness():
    start = time.perf_counter()
    for d in (2, 3, 4):
        ident = Channel.identity(d)
        value = coherent_information(np.eye(d) / d, ident)
        assert value == pytest.approx(math.log2(d), abs=1e-8)
        assert value == pytest.approx(oracle_coherent_information(ident, d), abs=1e-8)
    for q in np.round(np.arange(0.1, 1.0, 0.1), 10):
        ch = Channel.dephasing(float(q))
        value = coherent_information(np.eye(2) / 2, ch)
        assert value == pytest.approx(1 - h2(q), abs=1e-8)
        assert value == pytest.approx(oracle_coherent_information(ch, 2), abs=1e-8)
    assert time.perf_counter() - start < 1.0


@pytest.mark.criterion(2)
def test_identity_qubit_region():
    start = time.perf_counter()
    ident = Channel.identity(2)
    r1 = inner_region([ident], 1)
    assert r1.frontier_contains(1.0, 0.0, 1e-6)
    assert r1.frontier_contains(0.0, 1.0, 1e-6)
    r2 = inner_region([ident], 2)
    assert r2.frontier_contains(0.5, 0.5, 1e-6)
    # the certificate ensembles themselves
    classical = Ensemble.maximally_entangled([0.5, 0.5], [Subspace.span(2, [0]), Subspace.span(2, [1])])
    quantum = Ensemble.maximally_entangled([1.0], [Subspace.full(2)])
    split = Ensemble.maximally_entangled([0.5, 0.5], [Subspace.span(4, [0, 1]), Subspace.span(4, [2, 3])])
    assert (rate_rectangle(ident, classical).r1_max, rate_rectangle(ident, classical).r2_max) == pytest.approx((1, 0), abs=1e-6)
    assert (rate_rectangle(ident, quantum).r1_max, rate_rectangle(ident, quantum).r2_max) == pytest.approx((0, 1), abs=1e-6)
    half = rate_rectangle(ident.power(2), split).scaled(0.5)
    assert (half.r1_max, half.r2_max) == pytest.approx((0.5, 0.5), abs=1e-6)
    assert time.perf_counter() - start < 10.0


@pytest.mark.criterion(3)
def test_compound_shrinkage():
    e = Ensemble.maximally_entangled([1.0], [Subspace.full(2)])
    rect = compound_rectangle([Channel.identity(2), Channel.dephasing(0.2)], e)
    assert rect.r1_max == pytest.approx(0.0, abs=1e-8)
    assert rect.r2_max == pytest.approx(1 - h2(0.2), abs=1e-8)


@pytest.mark.criterion(4)
def test_design_correctness():
    design = make_design(Subspace.full(2), kind="clifford")
    assert len(design) == 24
    rng = np.random.default_rng(4)
    for x in [projector(ket(0, 4))] + [rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)) for _ in range(20)]:
        assert np.max(np.abs(design_twirl(design, x) - haar_oracle(x))) <= 1e-8
    for rho in [projector(ket(0, 2))] + [random_density(2, rng) for _ in range(10)]:
        assert np.max(np.abs(one_design_average(design, rho) - np.eye(2) / 2)) <= 1e-10


@pytest.mark.criterion(5)
def test_decoupling_transfer():
    start = time.perf_counter()
    chans = [Channel.dephasing(0.05, "Z"), Channel.dephasing(0.05, "X")]
    g = Subspace.full(4)
    bounds = {k: decoupling_bound(k, g, [ch.power(2) for ch in chans]) for k in range(1, 5)}
    chosen = [k for k, b in bounds.items() if b >= 0.9]
    assert chosen, f"no code dimension reaches decoupling bound 0.9 on a 4-dim G: {bounds}"
    k = chosen[-1]
    fam = random_et_family([Subspace.full(2)], (0, 0), k, chans)
    for ch in chans:
        assert fam.average_fidelity(ch.power(2)) >= 2 * bounds[k] - 1
    assert time.perf_counter() - start < 60.0


@pytest.mark.criterion(6)
@pytest.mark.parametrize("degrees", [15, 30, 45])
def test_pgm_closed_form(degrees):
    theta = math.radians(degrees)
    a = np.array([1.0, 0.0])
    b = np.array([math.cos(theta), math.sin(theta)])
    code = pgm_code([projector(a), projector(b)], Channel.identity(2), [0.5, 0.5], 0.5, 1, 2,
                    codewords=[(0,), (1,)], config=RELAXED)
    expected = (1 + math.sqrt(1 - math.cos(theta) ** 2)) / 2
    assert np.max(np.abs(code.success[0] - expected)) <= 1e-6


@pytest.mark.criterion(7)
def test_symmetrizability():
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    consts = AvqcSpec([Channel.constant(random_density(2, rng), 2) for _ in range(2)], 1)
    inst = SymmetrizabilityInstance([random_density(2, rng), random_density(2, rng)], 1)
    res = symmetrizability_lp(consts, inst)
    assert res.feasible and res.maps is not None
    assert check_symmetrizing_maps(consts, inst, res.maps) <= 1e-8
    ident = AvqcSpec([Channel.identity(2)], 1)
    res = symmetrizability_lp(ident, SymmetrizabilityInstance([projector(ket(0, 2)), projector(ket(1, 2))], 1))
    assert not res.feasible
    lhs, rhs = res.certificate_margins
    assert lhs <= 1e-9 and rhs > 0
    assert time.perf_counter() - start < 1.0


@pytest.mark.criterion(8)
@pytest.mark.parametrize("l,n_states", list(itertools.product(range(2, 7), (2, 3))))
def test_robustification(l, n_states):
    rng = np.random.default_rng(1000 * l + n_states)
    for _ in range(100):
        gamma = float(10 ** rng.uniform(-4, -1))
        rep = robustlemma_check(random_hypothesis_table(n_states, l, gamma, rng), n_states, gamma)
        assert rep.hypothesis_holds
        assert rep.conclusion_holds


def _toy_jammer_code(n, rng):
    qj = replacement_jammer(0.05)
    enc = Channel.from_isometry(random_isometry(2, 2**n, rng))
    avg = qj.with_jammer_state(np.eye(2**n) / 2**n, n).compose(enc)
    return CETCode([enc], [bk_recovery(np.eye(2) / 2, avg)]), qj


@pytest.mark.criterion(9)
def test_quantum_jammer():
    rng = np.random.default_rng(9)
    code, qj = _toy_jammer_code(2, rng)
    x = jammer_effect_operator(code, qj)
    for _ in range(100):
        sigma = random_density(4, rng)
        assert abs(1 - np.trace(x @ sigma).real - performance_under_jammer(code, qj, sigma)) <= 1e-9
    for n in (2, 3):
        code, qj = _toy_jammer_code(n, rng)
        rep = permutation_bound_check(code, qj)
        assert rep.factor == (n + 1) ** (qj.d_j**2)
        assert rep.holds


@pytest.mark.criterion(10)
def test_inequality_suites():
    start = time.perf_counter()
    ineq = run_suite("inequalities", 10_000, 0)
    assert ineq["failed"] == 0
    assert all(d["trials"] == 10_000 for d in ineq["details"].values())
    chernoff = run_suite("chernoff", 10_000, 0)
    assert chernoff["failed"] == 0
    assert time.perf_counter() - start < 120.0


@pytest.mark.criterion(11)
def test_net_soundness():
    rng = np.random.default_rng(11)
    chans = [random_channel(2, 2, 2, rng) for _ in range(5)]
    chans += [Channel.dephasing(q) for q in (0.0, 0.02, 0.04)]
    for tau in (0.01, 0.05, 0.2, 1.0):
        net = tau_net(chans, tau)
        for cert in net.certificates:
            assert cert.upper_bound == net.upper[cert.center, cert.member]
            assert cert.upper_bound <= net.radius
            assert cert.center in net.selected
    ch = random_channel(2, 2, 2, rng)
    same = diamond_distance_bracket(ch, ch)
    assert same.lower == 0.0 and same.upper == pytest.approx(0.0, abs=1e-12)
    orth = diamond_distance_bracket(Channel.constant(projector(ket(0, 2)), 2), Channel.constant(projector(ket(1, 2)), 2))
    assert orth.contains(2.0)


@pytest.mark.criterion(12)
def test_determinism(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({
        "dim_in": 4,
        "dim_out": 2,
        "channels": [{"name": "replace", "kraus": [encode_matrix(k) for k in replacement_jammer(0.05).channel.kraus]}],
        "jammer_dim": 2,
    }))
    pair = tmp_path / "pair.json"
    pair.write_text(json.dumps({
        "dim_in": 2,
        "dim_out": 2,
        "channels": [
            {"name": n, "kraus": [encode_matrix(k) for k in ch.kraus]}
            for n, ch in (("z", Channel.dephasing(0.05, "Z")), ("x", Channel.dephasing(0.05, "X")))
        ],
    }))
    runs = [
        ["simulate", "--mode", "compound", "--spec", str(pair), "--l", "2", "--build", "random"],
        ["simulate", "--mode", "avqc", "--spec", str(pair), "--l", "2", "--build", "random"],
        ["simulate", "--mode", "jammer", "--spec", str(spec), "--l", "2", "--build", "random"],
        ["region", "--spec", str(pair)],
    ]
    for i, argv in enumerate(runs):
        outputs = []
        for rep in range(2):
            out = tmp_path / f"run{i}_{rep}"
            assert main(argv + ["--seed", "2024", "--out", str(out)]) == 0
            outputs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
        assert outputs[0] == outputs[1]
        assert outputs[0]
