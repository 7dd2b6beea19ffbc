"""Command-line entry point: ``qsr region|verify|simulate|symmetrize|net``.

Exit codes: 0 success, 1 a verification suite found violations, 2 bad input
(malformed spec, unknown suite, bad flags), 3 a configured cap was exceeded.
Identical inputs, flags and seed give byte-identical output files.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import io
import itertools
import json
import sys
import time
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from qsr import __version__
from qsr.avqc.chernoff import (
    coin_flip_exceedance,
    coin_flip_sampler,
    constant_sampler,
    finite_effect_sampler,
    matrix_chernoff_mc,
    random_effect_family,
)
from qsr.avqc.jammer import (
    QuantumJammerChannel,
    jammer_effect_operator,
    jammer_worst_case,
    performance_under_jammer,
)
from qsr.avqc.sequences import (
    AvqcSpec,
    performance_table,
    random_hypothesis_table,
    robustlemma_check,
    worst_case_performance,
)
from qsr.avqc.symmetrize import SymmetrizabilityInstance, symmetrizability_lp
from qsr.coding.cet import CETCode, cet_performance
from qsr.coding.designs import design_twirl, haar_twirl, make_design, verify_design
from qsr.coding.recovery import bk_recovery
from qsr.config import CapExceeded, TypicalityConfig, get_caps
from qsr.nets import tau_net
from qsr.qcore.channels import Channel, SubChannel, average_maps
from qsr.qcore.inequalities import CHECKERS, inequality_oracle, sample_instance
from qsr.qcore.linalg import DimensionError, Subspace, maximally_mixed
from qsr.qcore.random import random_density, random_isometry
from qsr.regions import SearchConfig, inner_region
from qsr.serialization import canonical_json, decode_cet, decode_matrix, encode_cet, encode_matrix
from qsr.typicality import all_words, is_typical, typical_projector, typical_set

SUITES = ("inequalities", "design", "typicality", "robustification", "chernoff")
MODES = ("compound", "avqc", "jammer")
SEED_LIMIT = 2**64


class SpecError(ValueError):
    """Malformed or inconsistent input file; reported with exit code 2."""


# --------------------------------------------------------------------------
# input handling


@dataclasses.dataclass
class ChannelSpec:
    dim_in: int
    dim_out: int
    names: list[str]
    channels: list[Channel]
    jammer_dim: int | None
    states: list[np.ndarray] | None
    digest: str


def _parse_json(path: Path):
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        return json.loads(text), hashlib.sha256(text.encode()).hexdigest()
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def load_spec(path: str | Path) -> ChannelSpec:
    path = Path(path)
    data, digest = _parse_json(path)
    if not isinstance(data, dict):
        raise SpecError(f"{path}: top level must be an object")
    try:
        dim_in, dim_out = int(data["dim_in"]), int(data["dim_out"])
        entries = data["channels"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"{path}: missing or invalid field {exc}") from None
    if not isinstance(entries, list) or not entries:
        raise SpecError(f"{path}: 'channels' must be a non-empty list")
    names, channels = [], []
    for i, entry in enumerate(entries):
        name = str(entry.get("name", f"channel{i}")) if isinstance(entry, dict) else None
        if name is None or "kraus" not in entry:
            raise SpecError(f"{path}: channel {i} needs 'name' and 'kraus'")
        try:
            ch = Channel(np.stack([decode_matrix(k) for k in entry["kraus"]]))
        except (ValueError, TypeError) as exc:
            raise SpecError(f"{path}: channel {name!r}: {exc}") from None
        if (ch.dim_in, ch.dim_out) != (dim_in, dim_out):
            raise SpecError(f"{path}: channel {name!r} acts {ch.dim_in}->{ch.dim_out}, expected {dim_in}->{dim_out}")
        names.append(name)
        channels.append(ch)
    if len(set(names)) != len(names):
        raise SpecError(f"{path}: channel names must be unique")
    jammer_dim = data.get("jammer_dim")
    if jammer_dim is not None:
        jammer_dim = int(jammer_dim)
        if jammer_dim < 1 or dim_in % jammer_dim:
            raise SpecError(f"{path}: jammer_dim must divide dim_in")
    states = None
    if "states" in data:
        try:
            states = [decode_matrix(s) for s in data["states"]]
        except (ValueError, TypeError) as exc:
            raise SpecError(f"{path}: states: {exc}") from None
    return ChannelSpec(dim_in, dim_out, names, channels, jammer_dim, states, digest)


def substream(seed: int, label: str) -> np.random.Generator:
    """Independent generator for a labelled task; labels, not call order, fix the stream."""
    key = int.from_bytes(hashlib.sha256(label.encode()).digest()[:8], "little")
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(key,)))


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= value < SEED_LIMIT:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return value


# --------------------------------------------------------------------------
# output handling


def _config_hash(args: argparse.Namespace, spec_digest: str | None) -> str:
    settings = {k: v for k, v in sorted(vars(args).items()) if k not in {"out", "wall_clock", "handler"}}
    payload = {
        "settings": settings,
        "caps": dataclasses.asdict(get_caps()),
        "spec_sha256": spec_digest,
        "version": __version__,
    }
    return hashlib.sha256(canonical_json(payload).encode()).hexdigest()


def _report(args: argparse.Namespace, spec_digest: str | None, result: dict, started: float) -> dict:
    report = {
        "command": args.command,
        "seed": args.seed,
        "config_hash": _config_hash(args, spec_digest),
        "version": __version__,
        "result": result,
    }
    if args.wall_clock:
        report["wall_clock_seconds"] = time.perf_counter() - started
    return report


def _fmt(x: float | None) -> str:
    return "" if x is None else f"{x:.12g}"


def _emit(args: argparse.Namespace, name: str, report: dict, extra: dict[str, str] | None = None) -> None:
    text = canonical_json(report)
    if args.out is None:
        sys.stdout.write(text)
        return
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / f"{name}.json", "w", newline="\n") as fh:
        fh.write(text)
    for fname, content in (extra or {}).items():
        with open(out / fname, "w", newline="\n") as fh:
            fh.write(content)


# --------------------------------------------------------------------------
# region


def cmd_region(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    spec = load_spec(args.spec)
    search_seed = int(substream(args.seed, "region/search").integers(2**63))
    region = inner_region(spec.channels, args.l, SearchConfig(seed=search_seed))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["certificate_id", "R1", "R2", "theta", "origin"])
    frontier = []
    for r1, r2, cid in region.frontier:
        cert = region.certificate(cid)
        writer.writerow([cid, _fmt(r1), _fmt(r2), _fmt(cert.theta), cert.origin])
        frontier.append({
            "certificate_id": cid,
            "R1": r1,
            "R2": r2,
            "theta": cert.theta,
            "origin": cert.origin,
            "ensemble": cert.ensemble.as_dict(),
        })
    result = {"l": args.l, "channels": spec.names, "n_certificates": len(region.certificates), "frontier": frontier}
    _emit(args, "region", _report(args, spec.digest, result, started), {"frontier.csv": buf.getvalue()})
    return 0


# --------------------------------------------------------------------------
# verify suites; each returns (checks, failures, worst slack, details)


def _suite_inequalities(trials: int, seed: int, config: TypicalityConfig) -> dict:
    details = {}
    for lemma_id in CHECKERS:
        rng = substream(seed, f"verify/inequalities/{lemma_id}")
        fails, worst = 0, np.inf
        for _ in range(trials):
            rep = inequality_oracle(lemma_id, sample_instance(lemma_id, rng))
            fails += not rep.holds
            worst = min(worst, rep.slack)
        details[lemma_id] = {"trials": trials, "violations": fails, "worst_slack": float(worst)}
    return details


def _suite_design(trials: int, seed: int, config: TypicalityConfig) -> dict:
    details = {}
    for label, qubits, kind in (("clifford-1q", 1, "clifford"), ("pauli-mixing-1q", 1, "minimal"), ("pauli-mixing-2q", 2, "minimal")):
        design = make_design(Subspace.full(2**qubits), kind=kind)
        rep = verify_design(design)
        details[label] = {
            "trials": 1,
            "violations": int(not rep.passed),
            "worst_slack": 1e-8 - max(rep.twirl_deviation, rep.one_design_deviation),
            "size": rep.size,
            "within_size_bound": rep.within_size_bound,
        }
    design = make_design(Subspace.full(2), kind="clifford")
    rng = substream(seed, "verify/design/twirl")
    fails, worst = 0, np.inf
    for _ in range(trials):
        x = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        dev = float(np.max(np.abs(design_twirl(design, x) - haar_twirl(x))))
        fails += dev > 1e-8
        worst = min(worst, 1e-8 - dev)
    details["clifford-1q-random-operators"] = {"trials": trials, "violations": fails, "worst_slack": float(worst)}
    return details


def _suite_typicality(trials: int, seed: int, config: TypicalityConfig) -> dict:
    rng = substream(seed, "verify/typicality")
    set_fails = proj_fails = 0
    worst = np.inf
    for _ in range(trials):
        a = int(rng.integers(2, 4))
        l = int(rng.integers(1, 6))
        p = rng.dirichlet(np.ones(a))
        delta = float(rng.uniform(0.05, 0.45))
        expected = [w for w in all_words(a, l) if is_typical(w, p, delta, config)]
        set_fails += typical_set(p, delta, l, config) != sorted(expected)
        d = int(rng.integers(2, 4))
        lp = int(rng.integers(1, 4))
        rho = random_density(d, rng)
        tp = typical_projector(rho, delta, lp, config)
        q = tp.projector
        state = rho
        for _ in range(lp - 1):
            state = np.kron(state, rho)
        spectrum = np.linalg.eigvalsh(rho)
        rank = sum(1 for w in all_words(d, lp) if is_typical(w, spectrum / spectrum.sum(), delta, config))
        dev = max(
            float(np.max(np.abs(q @ q - q))),
            float(np.max(np.abs(q @ state - state @ q))),
            abs(tp.rank - rank),
        )
        # q ρ q <= 2^{-(S - lφ)} q
        top = float(np.linalg.eigvalsh(q @ state @ q)[-1]) if tp.rank else 0.0
        dev = max(dev, top - tp.operator_bound())
        proj_fails += dev > 1e-9
        worst = min(worst, 1e-9 - dev)
    return {
        "typical_set": {"trials": trials, "violations": int(set_fails), "worst_slack": 0.0},
        "typical_projector": {"trials": trials, "violations": int(proj_fails), "worst_slack": float(worst)},
    }


def _suite_robustification(trials: int, seed: int, config: TypicalityConfig) -> dict:
    details = {}
    for l, s in itertools.product(range(2, 7), (2, 3)):
        rng = substream(seed, f"verify/robustification/{l}/{s}")
        fails, worst = 0, np.inf
        for _ in range(trials):
            gamma = float(10 ** rng.uniform(-4, -1))
            table = random_hypothesis_table(s, l, gamma, rng)
            rep = robustlemma_check(table, s, gamma)
            fails += not (rep.hypothesis_holds and rep.conclusion_holds)
            worst = min(worst, rep.conclusion_min - rep.conclusion_rhs)
        details[f"l={l},S={s}"] = {"trials": trials, "violations": fails, "worst_slack": float(worst)}
    return details


def _suite_chernoff(trials: int, seed: int, config: TypicalityConfig) -> dict:
    details = {}
    rep = matrix_chernoff_mc(constant_sampler(0.3, 2), 10, 0.5, trials, 0.3, substream(seed, "verify/chernoff/constant"))
    details["constant"] = {
        "trials": trials,
        "violations": int(rep.exceedances != 0 or not rep.holds),
        "worst_slack": rep.bound - rep.wilson_low,
    }
    for T, a in ((10, 0.6), (20, 0.65), (40, 0.6)):
        rep = matrix_chernoff_mc(coin_flip_sampler(0.5, 2), T, a, trials, 0.5, substream(seed, f"verify/chernoff/coin/{T}"), confidence=0.999)
        exact = coin_flip_exceedance(0.5, 2, T, a)
        agree = rep.wilson_low <= exact <= rep.wilson_high
        details[f"coin-flip T={T} a={a}"] = {
            "trials": trials,
            "violations": int(not rep.holds) + int(not agree),
            "worst_slack": rep.bound - rep.wilson_low,
            "frequency": rep.frequency,
            "exact": exact,
        }
    for i in range(4):
        rng = substream(seed, f"verify/chernoff/random/{i}")
        effects, m = random_effect_family(2, 4, rng)
        a = min(m + float(rng.uniform(0.05, 0.3)), 0.999)
        T = int(rng.integers(5, 40))
        rep = matrix_chernoff_mc(finite_effect_sampler(effects), T, a, trials, m, rng)
        details[f"random-2x2-{i}"] = {
            "trials": trials,
            "violations": int(not rep.holds),
            "worst_slack": rep.bound - rep.wilson_low,
            "frequency": rep.frequency,
            "bound": rep.bound,
        }
    return details


SUITE_RUNNERS = {
    "inequalities": _suite_inequalities,
    "design": _suite_design,
    "typicality": _suite_typicality,
    "robustification": _suite_robustification,
    "chernoff": _suite_chernoff,
}
DEFAULT_TRIALS = {"inequalities": 10_000, "design": 200, "typicality": 200, "robustification": 100, "chernoff": 10_000}


def run_suite(name: str, trials: int | None, seed: int, config: TypicalityConfig | None = None) -> dict:
    if name not in SUITE_RUNNERS:
        raise SpecError(f"unknown suite {name!r}; known suites: {', '.join(SUITES)}")
    trials = trials or DEFAULT_TRIALS[name]
    details = SUITE_RUNNERS[name](trials, seed, config or TypicalityConfig())
    violations = sum(d["violations"] for d in details.values())
    checks = sum(d["trials"] for d in details.values())
    return {
        "suite": name,
        "trials": trials,
        "checks": checks,
        "passed": checks - violations,
        "failed": violations,
        "worst_slack": min(float(d["worst_slack"]) for d in details.values()),
        "details": details,
    }


def cmd_verify(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    result = run_suite(args.suite, args.trials, args.seed, TypicalityConfig(relaxed=args.relaxed_typicality))
    _emit(args, f"verify_{args.suite}", _report(args, None, result, started))
    return 0 if result["failed"] == 0 else 1


# --------------------------------------------------------------------------
# simulate


def _block_code(build: str, k: int | None, block_channels: Sequence[SubChannel], rng: np.random.Generator) -> CETCode:
    """A one-message code on the block: identity (full space) or a random isometric k-dim code."""
    d_in, d_out = block_channels[0].dim_in, block_channels[0].dim_out
    if build == "identity":
        enc = Channel.identity(d_in)
        code_dim = d_in
    else:
        code_dim = k or 2
        if code_dim > d_in:
            raise SpecError(f"code dimension {code_dim} exceeds block input dimension {d_in}")
        enc = Channel.from_isometry(random_isometry(code_dim, d_in, rng))
    if build == "identity" and d_in == d_out:
        dec = Channel.identity(d_in)
    else:
        avg = average_maps(list(block_channels)).compose(enc)
        dec = bk_recovery(maximally_mixed(code_dim), avg)
    return CETCode([enc], [dec])


def _load_code(path: str) -> CETCode:
    data, _ = _parse_json(Path(path))
    if isinstance(data, dict) and "result" in data:
        data = data["result"].get("code", data)
    try:
        return decode_cet(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"{path}: not a code bundle ({exc})") from None


def _code_for(args, block_channels, label) -> CETCode:
    if args.code:
        return _load_code(args.code)
    return _block_code(args.build, args.k, block_channels, substream(args.seed, label))


def _simulate_compound(args, spec: ChannelSpec) -> dict:
    _check_block_caps(spec, args.l)
    blocks = [ch.power(args.l) for ch in spec.channels]
    code = _code_for(args, blocks, "simulate/compound/code")
    per_channel = {}
    for name, block in zip(spec.names, blocks):
        perf = [cet_performance(code, block, m) for m in range(code.n_messages)]
        per_channel[name] = {"per_message": perf, "average": float(np.mean(perf))}
    worst = min(per_channel, key=lambda n: (per_channel[n]["average"], spec.names.index(n)))
    return {
        "l": args.l,
        "performance": per_channel,
        "worst_channel": worst,
        "worst_average": per_channel[worst]["average"],
        "code": encode_cet(code),
    }


def _check_block_caps(spec: ChannelSpec, l: int) -> None:
    cap = get_caps().tensor_dim
    if max(spec.dim_in, spec.dim_out) ** l > cap:
        raise CapExceeded(f"block dimension {max(spec.dim_in, spec.dim_out)}^{l} exceeds tensor cap {cap}")


def _simulate_avqc(args, spec: ChannelSpec) -> dict:
    _check_block_caps(spec, args.l)
    avqc = AvqcSpec(spec.channels, args.l)
    mean_block = average_maps(spec.channels).power(args.l)
    code = _code_for(args, [mean_block], "simulate/avqc/code")
    table = performance_table(code, avqc)
    worst = worst_case_performance(code, avqc)
    return {
        "l": args.l,
        "table": [{"sequence": list(s), "names": [spec.names[i] for i in s], "performance": v} for s, v in table.items()],
        "worst_case": worst.value,
        "argmin": list(worst.argmin),
        "argmin_names": [spec.names[i] for i in worst.argmin],
        "code": encode_cet(code),
    }


def _simulate_jammer(args, spec: ChannelSpec) -> dict:
    if spec.jammer_dim is None:
        raise SpecError("jammer mode needs 'jammer_dim' in the spec")
    qj = QuantumJammerChannel(spec.channels[0], spec.dim_in // spec.jammer_dim, spec.jammer_dim)
    n = args.l
    if max(qj.d_a, qj.d_b) ** n > get_caps().tensor_dim:
        raise CapExceeded(f"block dimension exceeds tensor cap {get_caps().tensor_dim}")
    typical = qj.with_jammer_state(maximally_mixed(qj.d_j**n), n) if qj.d_j**n <= get_caps().eigen_cap else None
    if typical is None:
        raise CapExceeded(f"jammer dimension {qj.d_j}^{n} exceeds the eigen cap")
    code = _code_for(args, [typical], "simulate/jammer/code")
    x = jammer_effect_operator(code, qj, n)
    worst = jammer_worst_case(x)
    rng = substream(args.seed, "simulate/jammer/spot")
    spots = []
    for _ in range(5):
        sigma = random_density(qj.d_j**n, rng)
        via_x = 1.0 - float(np.trace(x @ sigma).real)
        direct = performance_under_jammer(code, qj, sigma, n)
        spots.append({"effect_route": via_x, "direct_route": direct, "difference": abs(via_x - direct)})
    return {
        "n": n,
        "worst_case": worst.value,
        "spectrum": [float(v) for v in worst.spectrum],
        "optimizer": encode_matrix(worst.optimizer),
        "spot_checks": spots,
        "code": encode_cet(code),
    }


def cmd_simulate(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    spec = load_spec(args.spec)
    runner = {"compound": _simulate_compound, "avqc": _simulate_avqc, "jammer": _simulate_jammer}[args.mode]
    result = runner(args, spec)
    result["mode"] = args.mode
    _emit(args, f"simulate_{args.mode}", _report(args, spec.digest, result, started))
    return 0


# --------------------------------------------------------------------------
# symmetrize and net


def _default_states(d: int, l: int) -> list[np.ndarray]:
    dim = d**l
    first = np.zeros((dim, dim))
    first[0, 0] = 1.0
    last = np.zeros((dim, dim))
    last[-1, -1] = 1.0
    return [first, last]


def cmd_symmetrize(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    spec = load_spec(args.spec)
    avqc = AvqcSpec(spec.channels, args.l)
    states = spec.states if spec.states is not None else _default_states(spec.dim_in, args.l)
    try:
        inst = SymmetrizabilityInstance(states, args.l)
    except (ValueError, DimensionError) as exc:
        raise SpecError(f"{args.spec}: states: {exc}") from None
    try:
        res = symmetrizability_lp(avqc, inst)
    except DimensionError as exc:
        raise SpecError(f"{args.spec}: {exc}") from None
    result = {"l": args.l, "channels": spec.names, **res.as_dict()}
    _emit(args, "symmetrize", _report(args, spec.digest, result, started))
    return 0


def cmd_net(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    spec = load_spec(args.spec)
    report = tau_net(spec.channels, args.tau, seed=int(substream(args.seed, "net/ascent").integers(2**32)))
    result = {"channels": spec.names, **report.as_dict()}
    _emit(args, "net", _report(args, spec.digest, result, started))
    return 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsr", description="Finite-blocklength experiments for classical/quantum coding over uncertain channels.")
    parser.add_argument("--version", action="version", version=f"qsr {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0, help="64-bit run seed (default 0)")
    common.add_argument("--out", help="output directory; reports go to stdout when omitted")
    common.add_argument("--wall-clock", action="store_true", help="add elapsed time to reports (breaks byte-identity)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("region", parents=[common], help="inner rate region frontier and certificates")
    p.add_argument("--spec", required=True)
    p.add_argument("--l", type=_positive_int, default=1)
    p.set_defaults(handler=cmd_region)

    p = sub.add_parser("verify", parents=[common], help="property and inequality suites")
    p.add_argument("suite", help=f"one of: {', '.join(SUITES)}")
    p.add_argument("--trials", type=_positive_int)
    p.add_argument("--relaxed-typicality", action="store_true", help="allow absent letters with positive probability")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("simulate", parents=[common], help="code performance under compound, AVQC or jammer models")
    p.add_argument("--mode", choices=MODES, required=True)
    p.add_argument("--spec", required=True)
    p.add_argument("--l", type=_positive_int, default=1, help="blocklength")
    p.add_argument("--build", choices=("identity", "random"), default="identity")
    p.add_argument("--k", type=_positive_int, help="code dimension for --build random")
    p.add_argument("--code", help="code bundle JSON (a previous simulate report also works)")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("symmetrize", parents=[common], help="symmetrizability LP")
    p.add_argument("--spec", required=True)
    p.add_argument("--l", type=_positive_int, default=1)
    p.set_defaults(handler=cmd_symmetrize)

    p = sub.add_parser("net", parents=[common], help="τ-net over the spec's channels")
    p.add_argument("--spec", required=True)
    p.add_argument("--tau", type=_positive_float, required=True)
    p.set_defaults(handler=cmd_net)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except SpecError as exc:
        print(f"qsr: error: {exc}", file=sys.stderr)
        return 2
    except CapExceeded as exc:
        print(f"qsr: cap exceeded: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
