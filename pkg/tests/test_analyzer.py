import pytest

from conftest import load
from dpnlive.analyzer import (
    HierarchyViolation,
    Method,
    NoChannels,
    check_liveness,
    dimension,
    verdict_hierarchy,
)
from dpnlive.encoder import build_base_system, build_block_clauses, disjunct_constraint, encode_big_m
from dpnlive.gomory import CutConfig
from dpnlive.model import Blocking, Dimensioning, InitialTransition, InvalidDimensioning, Network, Task, TaskMode
from dpnlive.oracle import explore
from netgen import random_network


@pytest.mark.parametrize("method", list(Method))
def test_e1_live_at_one(e1, method):
    v = check_liveness(e1, Dimensioning({"f": 1}), method)
    assert v.live and v.method == method.value


@pytest.mark.parametrize("method", list(Method))
def test_e1_unknown_at_zero(e1, method):
    v = check_liveness(e1, Dimensioning({"f": 0}), method)
    assert v.kind == "unknown"
    assert v.witness["n[A.t1]"] == 0 and v.witness["n[B.t1]"] == 0


def test_big_m_certificate_verifies(e1):
    v = check_liveness(e1, Dimensioning({"f": 1}), Method.BIG_M_LP)
    base = build_base_system(e1, Dimensioning({"f": 1}))
    assert v.certificate.verify(encode_big_m(base, build_block_clauses(e1)).system)


@pytest.mark.parametrize("method", list(Method))
def test_e2_unknown_everywhere(e2, method):
    v = check_liveness(e2, Dimensioning({"f1": 5, "f2": 5}), method)
    assert v.kind == "unknown"
    assert v.witness["n[A.t1]"] == v.witness["n[B.t1]"] == 0


def test_invalid_dims_refused(e3):
    with pytest.raises(InvalidDimensioning):
        check_liveness(e3, Dimensioning({"f1": 1, "f2": 0}))


def test_dimension_golden(e1, e2, e3):
    r1 = dimension(e1)
    assert r1.kind == "bounded-live" and r1.z_ip == 0 and r1.z_lp == 0
    assert r1.recommended == Dimensioning({"f": 1})
    assert dimension(e2).kind == "unbounded"
    r3 = dimension(e3)
    assert r3.kind == "live-for-all-valid"
    assert r3.minimal_valid == Dimensioning({"f1": 1, "f2": 1})
    assert not explore(e3, r3.minimal_valid).blocked
    # the per-channel floor {f1: 0, f2: 1} really deadlocks
    assert explore(e3, Dimensioning({"f1": 0, "f2": 1})).blocked


@pytest.mark.parametrize("method", [Method.BRANCH_LP, Method.BRANCH_ILP])
def test_dimension_methods_agree_on_e_examples(method):
    assert dimension(load("e1"), method).z_ip == 0
    assert dimension(load("e2"), method).kind == "unbounded"
    assert dimension(load("e3"), method).kind == "live-for-all-valid"


def test_dimension_rejects_big_m(e1):
    with pytest.raises(ValueError):
        dimension(e1, Method.BIG_M_LP)


def test_no_channels():
    lone = Task("A", TaskMode.DETERMINISTIC, InitialTransition("s"))
    with pytest.raises(NoChannels):
        dimension(Network("n", (lone,), ()))


def test_hierarchy_e1_e2(e1, e2):
    h = verdict_hierarchy(e1, Dimensioning({"f": 1}))
    assert h.strongest_live == "big-m-lp"
    h2 = verdict_hierarchy(e2, Dimensioning({"f1": 2, "f2": 2}))
    assert all(v.kind == "unknown" for v in h2.verdicts.values())


def test_hierarchy_detects_inversion(e1, monkeypatch):
    import dpnlive.analyzer as an

    real = an.check_liveness

    def fake(net, dims, method, *a, **k):
        v = real(net, dims, method, *a, **k)
        if method is Method.BRANCH_ILP:
            v.kind = "unknown"
        return v

    monkeypatch.setattr(an, "check_liveness", fake)
    with pytest.raises(HierarchyViolation):
        an.verdict_hierarchy(e1, Dimensioning({"f": 1}))


@pytest.mark.parametrize("seed", range(40))
def test_witnesses_satisfy_their_branch(seed):
    net = random_network(seed)
    for d in range(net.max_initial_tokens(), 3):
        dims = Dimensioning.uniform(net, d)
        base = build_base_system(net, dims)
        clauses = build_block_clauses(net)
        labels = {dj.label(): dj for c in clauses.clauses for dj in c.disjuncts}
        for method in (Method.BRANCH_LP, Method.BRANCH_ILP):
            v = check_liveness(net, dims, method)
            if v.kind != "unknown":
                continue
            system = base.system.extended(disjunct_constraint(base, labels[lb]) for lb in v.branch)
            assert system.satisfied_by(v.witness)
            if method is Method.BRANCH_ILP:
                assert all(x.denominator == 1 for x in v.witness.values())
        v = check_liveness(net, dims, Method.BIG_M_LP)
        if v.kind == "unknown":
            assert encode_big_m(base, clauses).system.satisfied_by(v.witness)


@pytest.mark.parametrize("seed", range(40))
def test_bounded_live_invariants(seed):
    net = random_network(seed)
    r = dimension(net)
    if r.kind == "bounded-live":
        assert r.lp_unbounded or r.z_lp >= r.z_ip
        assert r.recommended == Dimensioning.uniform(net, r.z_ip + 1)
        r.recommended.check(net)
        assert r.z_ip >= net.max_initial_tokens()


def test_parallel_matches_serial():
    for seed in range(6):
        net = random_network(seed)
        dims = Dimensioning.uniform(net, max(1, net.max_initial_tokens()))
        a = check_liveness(net, dims, Method.BRANCH_ILP)
        b = check_liveness(net, dims, Method.BRANCH_ILP, workers=2)
        assert (a.kind, a.witness, a.branch) == (b.kind, b.witness, b.branch)


def test_safeguards_degrade_to_inconclusive(e1, e2):
    starved = CutConfig(max_pivots=1)
    r = dimension(e2, config=starved)
    assert r.kind == "inconclusive" and r.reason == "IterationLimit"
    v = check_liveness(e1, Dimensioning({"f": 0}), Method.BRANCH_ILP, config=starved)
    assert v.kind == "inconclusive" and v.reason == "IterationLimit"


def test_deadline_inconclusive(e1):
    r = dimension(e1, deadline=0.0)
    assert r.kind == "inconclusive" and r.reason == "Deadline"


def test_weak_override_is_more_conservative(e1):
    strong = check_liveness(e1, Dimensioning({"f": 1}), override=Blocking.STRONG)
    weak = check_liveness(e1, Dimensioning({"f": 1}), override=Blocking.WEAK)
    assert strong.live and weak.live
