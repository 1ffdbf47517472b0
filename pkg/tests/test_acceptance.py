"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

The randomized sweep (criteria 2, 3, 4, 5 and 7) is computed once per module:
200 seeded networks (at most 3 tasks, 3 states per task, 2 transitions per
state, rates at most 2, initial tokens at most 1) times uniform capacities
0..3, skipping capacities that cannot hold the initial tokens.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import pytest

from checks import bridge_violations, mirror_equivalent
from conftest import CORPUS, ERROR_CASES, load
from dpnlive.analyzer import Method, check_liveness, dimension, feasible_leaves
from dpnlive.encoder import SYMBOLIC_Z, Z_VAR, build_base_system, build_block_clauses, disjunct_constraint
from dpnlive.gomory import Inconclusive, IntInfeasible, IntOptimal, IntUnbounded, solve_ilp
from dpnlive.model import Dimensioning
from dpnlive.oracle import explore
from dpnlive.simplex import Infeasible, Objective, Optimal, Unbounded, solve_lp
from dpnlive.textio import ParseFailure, emit_network, parse
from netgen import random_network
from solvers import box_optimum, random_ilp, random_lp, ray_is_valid, vertex_optimum, vertices
from test_textio import expected_errors

SWEEP_NETWORKS = 200
CAPACITIES = range(4)
RESULTS: dict[int, str] = {}


def report(n: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {n} ({title}): {'PASS' if ok else 'FAIL'} - {detail}"
    RESULTS[n] = line
    print(line)


@dataclass
class Sweep:
    cases: int = 0
    skipped: int = 0
    live: dict = field(default_factory=lambda: {m.value: 0 for m in Method})
    soundness: list = field(default_factory=list)
    inversions: list = field(default_factory=list)
    bounded: int = 0
    monotony: list = field(default_factory=list)
    branches_checked: int = 0
    equivalence: list = field(default_factory=list)
    inconclusive: list = field(default_factory=list)
    reachable: int = 0
    blocked: int = 0
    bridge: list = field(default_factory=list)
    seconds: float = 0.0


def _boundedness(net, sweep: Sweep) -> None:
    base = build_base_system(net, SYMBOLIC_Z)
    clauses = build_block_clauses(net)
    objective = Objective("max", {Z_VAR: 1})
    for chosen, _ in feasible_leaves(base, clauses):
        system = base.system.extended(disjunct_constraint(base, d) for d in chosen)
        lp = solve_lp(system, objective)
        ip = solve_ilp(system, objective)
        if isinstance(ip, Inconclusive):
            sweep.inconclusive.append((net.name, ip.reason))
            continue
        if isinstance(ip, IntInfeasible):
            continue  # no certified integral point: the equivalence does not apply
        sweep.branches_checked += 1
        witness = ip.point if isinstance(ip, IntOptimal) else ip.witness
        if not system.satisfied_by(witness):
            sweep.equivalence.append(f"{net.name}: integral point violates its branch")
        if isinstance(lp, Unbounded) != isinstance(ip, IntUnbounded):
            sweep.equivalence.append(f"{net.name} {[d.label() for d in chosen]}: LP {type(lp).__name__} "
                                     f"vs ILP {type(ip).__name__}")


@pytest.fixture(scope="module")
def sweep() -> Sweep:
    s = Sweep()
    start = time.monotonic()
    order = [m for m in Method]
    for seed in range(SWEEP_NETWORKS):
        net = random_network(seed)
        for d in CAPACITIES:
            if d < net.max_initial_tokens():
                s.skipped += 1
                continue
            s.cases += 1
            dims = Dimensioning.uniform(net, d)
            ex = explore(net, dims, keep_reachable=True)
            assert not ex.truncated
            s.reachable += len(ex.reachable)
            s.blocked += len(ex.blocked)
            verdicts = {m: check_liveness(net, dims, m) for m in order}
            for m, v in verdicts.items():
                if v.live:
                    s.live[m.value] += 1
                    if ex.blocked:
                        s.soundness.append(f"seed {seed} d={d}: {m.value} says live, oracle found a deadlock")
            for weak, strong in zip(order, order[1:]):
                if verdicts[weak].live and not verdicts[strong].live:
                    s.inversions.append(f"seed {seed} d={d}: {weak.value} live, {strong.value} not")
            s.bridge += bridge_violations(net, dims, exploration=ex)

        r = dimension(net)
        if r.kind == "inconclusive":
            s.inconclusive.append((net.name, r.reason))
        if r.kind == "bounded-live":
            s.bounded += 1
            for z in (r.z_ip + 1, r.z_ip + 2):
                if explore(net, Dimensioning.uniform(net, z)).blocked:
                    s.monotony.append(f"seed {seed}: z_ip={r.z_ip} but d={z} deadlocks")
        _boundedness(net, s)
    s.seconds = time.monotonic() - start
    return s


def test_criterion_1_golden_verdicts():
    failures = []
    slowest = 0.0

    def timed(fn, *a, **k):
        nonlocal slowest
        t = time.monotonic()
        out = fn(*a, **k)
        slowest = max(slowest, time.monotonic() - t)
        return out

    e1, e2, e3 = load("e1"), load("e2"), load("e3")
    r1 = timed(dimension, e1)
    if not (r1.kind == "bounded-live" and r1.z_ip == 0 and r1.recommended == Dimensioning({"f": 1})):
        failures.append(f"E1 dimension: {r1.kind} z_ip={r1.z_ip}")
    for m in Method:
        if not timed(check_liveness, e1, Dimensioning({"f": 1}), m).live:
            failures.append(f"E1 d=1 {m.value} not live")
        if timed(check_liveness, e1, Dimensioning({"f": 0}), m).kind != "unknown":
            failures.append(f"E1 d=0 {m.value} not unknown")
    r2 = timed(dimension, e2)
    if r2.kind != "unbounded":
        failures.append(f"E2 dimension: {r2.kind}")
    r3 = timed(dimension, e3)
    if r3.kind != "live-for-all-valid":
        failures.append(f"E3 dimension: {r3.kind}")
    # independent oracle confirmation
    if explore(e1, Dimensioning({"f": 1})).blocked or not explore(e1, Dimensioning({"f": 0})).blocked:
        failures.append("oracle disagrees on E1")
    if not all(explore(e2, Dimensioning.uniform(e2, d)).blocked for d in range(4)):
        failures.append("oracle finds E2 live somewhere")
    if any(explore(e3, Dimensioning.uniform(e3, d)).blocked for d in range(1, 5)):
        failures.append("oracle finds an E3 deadlock")
    if slowest >= 1.0:
        failures.append(f"slowest verdict took {slowest:.2f}s")
    ok = not failures
    report(1, "golden verdicts", ok, f"slowest {slowest * 1000:.0f} ms" if ok else "; ".join(failures))
    assert ok, failures


def test_criterion_2_soundness(sweep):
    ok = not sweep.soundness and sweep.seconds < 300
    report(2, "soundness sweep", ok,
           f"{SWEEP_NETWORKS} networks, {sweep.cases} (network, d) cases ({sweep.skipped} invalid d skipped), "
           f"live verdicts {sweep.live}, {len(sweep.soundness)} violations, sweep {sweep.seconds:.1f}s")
    assert not sweep.soundness, sweep.soundness[:5]
    assert sweep.seconds < 300


def test_criterion_3_hierarchy(sweep):
    ok = not sweep.inversions
    report(3, "hierarchy", ok, f"{sweep.cases} cases, {len(sweep.inversions)} inversions")
    assert ok, sweep.inversions[:5]


def test_criterion_4_monotony(sweep):
    ok = not sweep.monotony
    report(4, "monotony", ok, f"{sweep.bounded} bounded-live networks checked at z_ip+1 and z_ip+2, "
                              f"{len(sweep.monotony)} violations")
    assert ok, sweep.monotony[:5]


def test_criterion_5_boundedness_equivalence(sweep):
    ok = not sweep.equivalence
    detail = f"{sweep.branches_checked} branches with an integral point, {len(sweep.equivalence)} violations"
    if sweep.inconclusive:
        detail += f", {len(sweep.inconclusive)} inconclusive solves"
    report(5, "boundedness equivalence", ok, detail)
    assert ok, sweep.equivalence[:5]


def test_criterion_6_solver_oracles():
    start = time.monotonic()
    problems = []
    for seed in range(150):
        s, obj = random_ilp(seed)
        best = box_optimum(s, obj)
        r = solve_ilp(s, obj)
        got = r.value if isinstance(r, IntOptimal) else None
        if got != best or (isinstance(r, IntOptimal) and not s.satisfied_by(r.point)):
            problems.append(f"ILP {seed}: {got} vs {best}")
    certs = 0
    for seed in range(150):
        s, obj = random_lp(seed)
        r = solve_lp(s, obj)
        if isinstance(r, Optimal):
            if r.value != vertex_optimum(s, obj) or not s.satisfied_by(r.point):
                problems.append(f"LP {seed}: optimum mismatch")
        elif isinstance(r, Infeasible):
            certs += 1
            if not r.certificate.verify(s) or vertices(s):
                problems.append(f"LP {seed}: bad infeasibility certificate")
        else:
            certs += 1
            if not (s.satisfied_by(r.point) and ray_is_valid(s, obj, r.ray)):
                problems.append(f"LP {seed}: bad unbounded ray")
    seconds = time.monotonic() - start
    ok = not problems and seconds < 120
    report(6, "solver oracles", ok, f"150 ILPs and 150 LPs, {certs} certificates re-verified, "
                                    f"{len(problems)} mismatches, {seconds:.1f}s")
    assert ok, problems[:5]


def test_criterion_7_bridge(sweep):
    ok = not sweep.bridge
    report(7, "bridge invariant", ok, f"{sweep.reachable} reachable configurations ({sweep.blocked} blocked), "
                                      f"{len(sweep.bridge)} violations")
    assert ok, sweep.bridge[:5]


def test_criterion_8_mirror_equivalence():
    failures = []
    checked = 0
    nets = [load("e1"), load("e2"), load("e3")] + [random_network(10_000 + k) for k in range(25)]
    for net in nets:
        for d in (1, 2):
            dims = Dimensioning.uniform(net, max(d, net.max_initial_tokens()))
            ok, why = mirror_equivalent(net, dims)
            checked += 1
            if not ok:
                failures.append(f"{net.name} d={d}: {why}")
    ok = not failures
    report(8, "mirror equivalence", ok, f"{len(nets)} networks x 2 capacities, {len(failures)} failures")
    assert ok, failures


def test_criterion_9_parser():
    failures = []
    for path in CORPUS:
        net = parse(path.read_text())
        once = emit_network(net)
        if parse(once) != net or emit_network(parse(once)) != once:
            failures.append(f"{path.name}: not a fixpoint")
    for path in ERROR_CASES:
        try:
            parse(path.read_text())
            failures.append(f"{path.name}: parsed")
        except ParseFailure as e:
            got = [(x.span.line, x.span.column, x.kind.value) for x in e.errors]
            if got != expected_errors(path):
                failures.append(f"{path.name}: {got}")
    ok = not failures
    report(9, "parser", ok, f"{len(CORPUS)} corpus files round-trip, {len(ERROR_CASES)} error fixtures, "
                            f"{len(failures)} failures")
    assert ok, failures
