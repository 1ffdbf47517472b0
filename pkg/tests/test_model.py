import pytest

from dpnlive.model import (
    Blocking,
    Channel,
    Dimensioning,
    InitialTransition,
    InvalidDimensioning,
    Network,
    Task,
    TaskMode,
    Transition,
    mirror_transform,
    validate,
)


def with_tasks(net, *extra_tasks, channels=()):
    return Network(net.name, net.tasks + tuple(extra_tasks), net.channels + tuple(channels))


def test_e1_valid(e1):
    assert validate(e1) == []
    assert [t.id for t in e1.tasks] == ["A", "B"]
    assert e1.initial_tokens("f") == 0


def test_ineffective_transition(e1):
    a = e1.task("A")
    idle = Transition("idle", "s0", "s0")
    a2 = Task(a.id, a.mode, a.initial_transition, a.transitions + (idle,))
    net = Network("e1", (a2, e1.task("B")), e1.channels)
    report = validate(net)
    assert len(report) == 1
    assert report[0].rule == "effectiveness"
    assert report[0].entity == "A.idle"


def test_isolated_task(e1):
    lonely = Task("C", TaskMode.DETERMINISTIC, InitialTransition("c0"))
    report = validate(with_tasks(e1, lonely))
    assert [v.rule for v in report] == ["connectivity"]
    assert report[0].entity == "C"


def test_role_and_channel_violations(e1):
    b = e1.task("B")
    bad = Task("B", b.mode, b.initial_transition, (Transition("x", "t0", "t0", produce={"f": 1}),))
    net = Network("e1", (e1.task("A"), bad), e1.channels + (Channel("g", "A", "A"),))
    rules = {v.rule for v in validate(net)}
    assert {"role", "channel-roles"} <= rules


def test_initial_state_rules(e1):
    a = e1.task("A")
    bad = Task("A", a.mode, InitialTransition("init"), (Transition("x", "init", "s0", produce={"f": 1}),))
    rules = [v.rule for v in validate(Network("e1", (bad, e1.task("B")), e1.channels))]
    assert rules.count("initial") == 2


def test_validate_is_pure(e1):
    assert validate(e1) == validate(e1)
    assert validate(e1) == []


def test_dimensioning_checks(e3):
    Dimensioning({"f1": 1, "f2": 1}).check(e3)
    with pytest.raises(InvalidDimensioning):
        Dimensioning({"f1": 1, "f2": 0}).check(e3)
    with pytest.raises(InvalidDimensioning):
        Dimensioning({"f1": 1}).check(e3)
    with pytest.raises(InvalidDimensioning):
        Dimensioning({"f1": 1, "f2": 1, "zz": 3}).check(e3)
    with pytest.raises(InvalidDimensioning):
        Dimensioning({"f1": -1, "f2": 1}).check(e3)


def test_blocking_override(e1):
    a = e1.task("A")
    det = Task("A", TaskMode.DETERMINISTIC, a.initial_transition, a.transitions)
    assert Blocking.FROM_MODEL.is_strong(a)
    assert not Blocking.FROM_MODEL.is_strong(det)
    assert Blocking.STRONG.is_strong(det)
    assert not Blocking.WEAK.is_strong(a)


def test_mirror_e1_d1(e1):
    m = mirror_transform(e1, Dimensioning({"f": 1}))
    assert m.channel("f_mirror").producer == "B" and m.channel("f_mirror").consumer == "A"
    assert m.task("B").initial_transition.produce == {"f_mirror": 1}
    a_loop = m.task("A").transitions[0]
    assert a_loop.consume == {"f_mirror": 1} and a_loop.produce == {"f": 1}
    b_loop = m.task("B").transitions[0]
    assert b_loop.consume == {"f": 1} and b_loop.produce == {"f_mirror": 1}
    assert validate(m) == []
    assert len(m.tasks) == len(e1.tasks)
    assert len(m.channels) == 2 * len(e1.channels)


def test_mirror_e1_d0_starts_empty(e1):
    m = mirror_transform(e1, Dimensioning({"f": 0}))
    assert m.initial_tokens("f_mirror") == 0


def test_mirror_net_of_initial_tokens(e3):
    m = mirror_transform(e3, Dimensioning({"f1": 2, "f2": 3}))
    assert m.initial_tokens("f2_mirror") == 2
    assert m.initial_tokens("f1_mirror") == 2


def test_mirror_rejects_invalid_dims(e3):
    with pytest.raises(InvalidDimensioning):
        mirror_transform(e3, Dimensioning({"f1": 1, "f2": 0}))
