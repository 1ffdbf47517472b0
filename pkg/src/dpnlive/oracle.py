"""Explicit-state reference semantics.

Breadth-first exploration of every configuration reachable under given
buffer capacities.  A configuration is *blocked* when every task is blocked
at once (strong: no enabled outgoing transition; weak: some outgoing
transition disabled).  A task sitting in a state without outgoing
transitions counts as blocked in both readings.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .model import INITIAL_STATE, Blocking, Dimensioning, Network, Task, Transition

__all__ = [
    "Configuration",
    "BlockedConfiguration",
    "ExplorationResult",
    "WrongSourceState",
    "IllegalTrace",
    "enabled",
    "initial_configuration",
    "explore",
    "trace_counts",
    "format_trace",
]

Step = tuple[str, str]  # (task id, transition id)


class WrongSourceState(ValueError):
    pass


class IllegalTrace(ValueError):
    pass


@dataclass(frozen=True)
class Configuration:
    task_state: tuple[tuple[str, str], ...]
    contents: tuple[tuple[str, int], ...]

    @classmethod
    def of(cls, task_state: dict[str, str], contents: dict[str, int]) -> "Configuration":
        return cls(tuple(sorted(task_state.items())), tuple(sorted(contents.items())))

    def state(self, task: str) -> str:
        return dict(self.task_state)[task]

    def content(self, channel: str) -> int:
        return dict(self.contents)[channel]


@dataclass(frozen=True)
class BlockedConfiguration:
    configuration: Configuration
    flags: dict[str, bool]
    trace: tuple[Step, ...]


@dataclass
class ExplorationResult:
    configurations_visited: int
    blocked: list[BlockedConfiguration]
    truncated: bool
    reachable: dict[Configuration, tuple[Step, ...]] | None = None
    stats: object = field(default=None, repr=False)


def enabled(config: Configuration, task: Task | str, transition: Transition, dims: Dimensioning,
            network: Network | None = None) -> bool:
    """Whether ``transition`` can fire: enough tokens to read, enough room to write."""
    tid = task if isinstance(task, str) else task.id
    if config.state(tid) != transition.source:
        raise WrongSourceState(f"{tid} is in {config.state(tid)}, not {transition.source}")
    contents = dict(config.contents)
    return _enabled(contents, transition, dims.capacities)


def _enabled(contents: dict[str, int], tr: Transition, caps: dict[str, int]) -> bool:
    for cid, q in tr.consume.items():
        if contents[cid] < q:
            return False
    for cid, q in tr.produce.items():
        if contents[cid] + q > caps[cid]:
            return False
    return True


def initial_configuration(network: Network, dims: Dimensioning) -> Configuration:
    dims.check(network)
    return Configuration.of(
        {t.id: t.initial_transition.target for t in network.tasks},
        {c.id: network.initial_tokens(c.id) for c in network.channels},
    )


def _task_blocked(task: Task, state: str, contents: dict[str, int], caps: dict[str, int], strong: bool) -> bool:
    outs = task.outgoing(state)
    if not outs:
        return True
    fire = [_enabled(contents, tr, caps) for tr in outs]
    return not any(fire) if strong else not all(fire)


def explore(
    network: Network,
    dims: Dimensioning,
    max_configs: int = 1_000_000,
    override: Blocking = Blocking.FROM_MODEL,
    keep_reachable: bool = False,
) -> ExplorationResult:
    """Visit every reachable configuration (BFS, tasks then transitions by id)."""
    dims.check(network)
    caps = dict(dims.capacities)
    tasks = network.tasks
    chans = network.channel_ids
    strong = {t.id: override.is_strong(t) for t in tasks}
    outgoing = {t.id: {v: t.outgoing(v) for v in t.states} for t in tasks}

    start = initial_configuration(network, dims)
    key0 = (tuple(s for _, s in start.task_state), tuple(c for _, c in start.contents))
    parent: dict[tuple, tuple | None] = {key0: None}
    order = [key0]
    queue = deque([key0])
    truncated = False
    blocked_keys = []

    while queue:
        states, counts = queue.popleft()
        contents = dict(zip(chans, counts))
        flags = {}
        for t, s in zip(tasks, states):
            flags[t.id] = _task_blocked(t, s, contents, caps, strong[t.id])
        if all(flags.values()):
            blocked_keys.append(((states, counts), flags))
        for ti, (t, s) in enumerate(zip(tasks, states)):
            for tr in outgoing[t.id][s]:
                if not _enabled(contents, tr, caps):
                    continue
                nxt = dict(contents)
                for cid, q in tr.consume.items():
                    nxt[cid] -= q
                for cid, q in tr.produce.items():
                    nxt[cid] += q
                new_states = states[:ti] + (tr.target,) + states[ti + 1:]
                key = (new_states, tuple(nxt[c] for c in chans))
                if key in parent:
                    continue
                if len(parent) >= max_configs:
                    truncated = True
                    continue
                parent[key] = ((states, counts), (t.id, tr.id))
                order.append(key)
                queue.append(key)

    task_ids = [t.id for t in tasks]

    def to_config(key) -> Configuration:
        return Configuration(tuple(zip(task_ids, key[0])), tuple(zip(chans, key[1])))

    def trace(key) -> tuple[Step, ...]:
        steps = []
        while parent[key] is not None:
            key, step = parent[key]
            steps.append(step)
        return tuple(reversed(steps))

    blocked = [BlockedConfiguration(to_config(k), f, trace(k)) for k, f in blocked_keys]
    reachable = {to_config(k): trace(k) for k in order} if keep_reachable else None
    return ExplorationResult(len(parent), blocked, truncated, reachable)


def trace_counts(
    trace: Iterable[Step],
    network: Network,
    dims: Dimensioning | None = None,
) -> dict[tuple[str, str], int]:
    """Execution counts of every transition along a trace, initial ones at 1.

    Checks that each step leaves the task's current state and, when
    capacities are given, that it is enabled.  Without capacities only reads
    are checked.
    """
    counts = {(t.id, INITIAL_STATE): 1 for t in network.tasks}
    for t in network.tasks:
        for tr in t.transitions:
            counts[(t.id, tr.id)] = 0
    states = {t.id: t.initial_transition.target for t in network.tasks}
    contents = {c.id: network.initial_tokens(c.id) for c in network.channels}
    caps = dims.capacities if dims is not None else {c: float("inf") for c in contents}
    if dims is not None:
        dims.check(network)
    for i, (tid, trid) in enumerate(trace):
        try:
            tr = network.task(tid).transition(trid)
        except KeyError:
            raise IllegalTrace(f"step {i}: unknown transition {tid}.{trid}") from None
        if states[tid] != tr.source:
            raise IllegalTrace(f"step {i}: {tid} is in {states[tid]}, {trid} leaves {tr.source}")
        if not _enabled(contents, tr, caps):
            raise IllegalTrace(f"step {i}: {tid}.{trid} is not enabled")
        for cid, q in tr.consume.items():
            contents[cid] -= q
        for cid, q in tr.produce.items():
            contents[cid] += q
        states[tid] = tr.target
        counts[(tid, trid)] += 1
    return counts


def format_trace(trace: Sequence[Step]) -> str:
    return "".join(f"{t}.{tr}\n" for t, tr in trace)
