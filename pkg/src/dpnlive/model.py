"""Dataflow process network domain types.

A network is a set of tasks talking over single-producer/single-consumer
FIFO channels.  Each task is a state-transition graph whose transitions
consume and produce fixed integer amounts of data per channel.  Every task
starts in a distinguished initial state that it leaves exactly once through
an unconditional initial transition; that transition may deposit initial
tokens on channels the task produces into.
"""

from __future__ import annotations

import enum
import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

__all__ = [
    "INITIAL_STATE",
    "TaskMode",
    "Blocking",
    "Transition",
    "InitialTransition",
    "Task",
    "Channel",
    "Network",
    "Dimensioning",
    "Violation",
    "InvalidDimensioning",
    "validate",
    "mirror_transform",
    "mirror_name",
    "is_identifier",
]

INITIAL_STATE = "init"
MIRROR_SUFFIX = "_mirror"

_IDENT = re.compile(r"[A-Za-z0-9_]+\Z")


def is_identifier(text: str) -> bool:
    return bool(_IDENT.match(text))


class InvalidDimensioning(ValueError):
    """A capacity is missing or cannot hold the channel's initial tokens."""


class TaskMode(enum.Enum):
    DETERMINISTIC = "deterministic"
    NONDETERMINISTIC = "nondeterministic"


class Blocking(enum.Enum):
    """Which blockedness notion applies to each task."""

    FROM_MODEL = "from-model"  # deterministic -> weak, nondeterministic -> strong
    STRONG = "strong"
    WEAK = "weak"

    def is_strong(self, task: "Task") -> bool:
        if self is Blocking.FROM_MODEL:
            return task.mode is TaskMode.NONDETERMINISTIC
        return self is Blocking.STRONG


def _frozen_rates(rates: Mapping[str, int] | None) -> dict[str, int]:
    return dict(sorted((rates or {}).items()))


@dataclass(frozen=True)
class Transition:
    id: str
    source: str
    target: str
    consume: dict[str, int] = field(default_factory=dict)
    produce: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "consume", _frozen_rates(self.consume))
        object.__setattr__(self, "produce", _frozen_rates(self.produce))

    @property
    def effective(self) -> bool:
        return sum(self.consume.values()) + sum(self.produce.values()) > 0


@dataclass(frozen=True)
class InitialTransition:
    target: str
    produce: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "produce", _frozen_rates(self.produce))


@dataclass(frozen=True)
class Task:
    id: str
    mode: TaskMode
    initial_transition: InitialTransition
    transitions: tuple[Transition, ...] = ()
    initial_state: str = INITIAL_STATE

    def __post_init__(self):
        ordered = tuple(sorted(self.transitions, key=lambda tr: tr.id))
        object.__setattr__(self, "transitions", ordered)

    @property
    def states(self) -> tuple[str, ...]:
        """Non-initial states, sorted; includes the initial transition's target."""
        seen = {self.initial_transition.target}
        for tr in self.transitions:
            seen.add(tr.source)
            seen.add(tr.target)
        seen.discard(self.initial_state)
        return tuple(sorted(seen))

    def transition(self, tid: str) -> Transition:
        for tr in self.transitions:
            if tr.id == tid:
                return tr
        raise KeyError(f"{self.id}.{tid}")

    def outgoing(self, state: str) -> tuple[Transition, ...]:
        return tuple(tr for tr in self.transitions if tr.source == state)

    def incoming(self, state: str) -> tuple[Transition, ...]:
        return tuple(tr for tr in self.transitions if tr.target == state)


@dataclass(frozen=True)
class Channel:
    id: str
    producer: str
    consumer: str


@dataclass(frozen=True)
class Network:
    """An immutable DPN; tasks, channels and transitions are kept sorted by id."""

    name: str
    tasks: tuple[Task, ...]
    channels: tuple[Channel, ...]

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(sorted(self.tasks, key=lambda t: t.id)))
        object.__setattr__(
            self, "channels", tuple(sorted(self.channels, key=lambda c: c.id))
        )

    def task(self, tid: str) -> Task:
        for t in self.tasks:
            if t.id == tid:
                return t
        raise KeyError(tid)

    def channel(self, cid: str) -> Channel:
        for c in self.channels:
            if c.id == cid:
                return c
        raise KeyError(cid)

    @property
    def channel_ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.channels)

    def produced_by(self, tid: str) -> tuple[str, ...]:
        return tuple(c.id for c in self.channels if c.producer == tid)

    def consumed_by(self, tid: str) -> tuple[str, ...]:
        return tuple(c.id for c in self.channels if c.consumer == tid)

    def initial_tokens(self, cid: str) -> int:
        producer = self.channel(cid).producer
        try:
            task = self.task(producer)
        except KeyError:
            return 0
        return task.initial_transition.produce.get(cid, 0)

    def max_initial_tokens(self) -> int:
        return max((self.initial_tokens(c.id) for c in self.channels), default=0)


@dataclass(frozen=True)
class Dimensioning:
    """Per-channel buffer capacities."""

    capacities: dict[str, int]

    def __post_init__(self):
        object.__setattr__(self, "capacities", dict(sorted(self.capacities.items())))

    @classmethod
    def uniform(cls, network: Network, capacity: int) -> "Dimensioning":
        return cls({c.id: capacity for c in network.channels})

    def __getitem__(self, cid: str) -> int:
        return self.capacities[cid]

    def check(self, network: Network) -> None:
        """Raise InvalidDimensioning unless every channel has room for its initial tokens."""
        for c in network.channels:
            if c.id not in self.capacities:
                raise InvalidDimensioning(f"no capacity given for channel {c.id}")
            cap = self.capacities[c.id]
            if cap < 0:
                raise InvalidDimensioning(f"negative capacity {cap} on channel {c.id}")
            tokens = network.initial_tokens(c.id)
            if cap < tokens:
                raise InvalidDimensioning(
                    f"capacity {cap} on channel {c.id} is below its {tokens} initial token(s)"
                )
        extra = set(self.capacities) - set(network.channel_ids)
        if extra:
            raise InvalidDimensioning(f"unknown channel(s): {', '.join(sorted(extra))}")


@dataclass(frozen=True)
class Violation:
    rule: str
    entity: str
    message: str

    def __str__(self):
        return f"[{self.rule}] {self.entity}: {self.message}"


def _duplicates(ids: Iterable[str]) -> list[str]:
    seen, dup = set(), []
    for i in ids:
        if i in seen and i not in dup:
            dup.append(i)
        seen.add(i)
    return dup


def validate(network: Network) -> list[Violation]:
    """Check every structural assumption; an empty list means the network is valid."""
    out: list[Violation] = []

    def bad(rule, entity, message):
        out.append(Violation(rule, entity, message))

    for name in [network.name] + [t.id for t in network.tasks] + list(network.channel_ids):
        if not is_identifier(name):
            bad("identifier", name, "identifiers must be nonempty over [A-Za-z0-9_]")
    for d in _duplicates(t.id for t in network.tasks):
        bad("duplicate", d, "task declared more than once")
    for d in _duplicates(network.channel_ids):
        bad("duplicate", d, "channel declared more than once")

    task_ids = {t.id for t in network.tasks}
    for c in network.channels:
        if c.producer == c.consumer:
            bad("channel-roles", c.id, f"producer and consumer are both {c.producer}")
        for role, tid in (("producer", c.producer), ("consumer", c.consumer)):
            if tid not in task_ids:
                bad("channel-roles", c.id, f"{role} {tid} is not a task")

    for t in network.tasks:
        produced = set(network.produced_by(t.id))
        consumed = set(network.consumed_by(t.id))
        init = t.initial_transition
        if init.target == t.initial_state:
            bad("initial", t.id, "initial transition cannot return to the initial state")
        for cid, q in init.produce.items():
            if cid not in produced:
                bad("role", f"{t.id}.{INITIAL_STATE}", f"produces on {cid} which {t.id} does not produce")
            if q <= 0:
                bad("quantity", f"{t.id}.{INITIAL_STATE}", f"non-positive quantity on {cid}")
        for d in _duplicates(tr.id for tr in t.transitions):
            bad("duplicate", f"{t.id}.{d}", "transition declared more than once")
        for tr in t.transitions:
            qual = f"{t.id}.{tr.id}"
            if not is_identifier(tr.id):
                bad("identifier", qual, "bad transition identifier")
            for s in (tr.source, tr.target):
                if s == t.initial_state:
                    bad("initial", qual, "transitions may not touch the initial state")
                elif not is_identifier(s):
                    bad("identifier", qual, f"bad state identifier {s!r}")
            for cid, q in tr.consume.items():
                if cid not in consumed:
                    bad("role", qual, f"consumes from {cid} which {t.id} does not consume")
                if q <= 0:
                    bad("quantity", qual, f"non-positive quantity on {cid}")
            for cid, q in tr.produce.items():
                if cid not in produced:
                    bad("role", qual, f"produces on {cid} which {t.id} does not produce")
                if q <= 0:
                    bad("quantity", qual, f"non-positive quantity on {cid}")
            if not tr.effective:
                bad("effectiveness", qual, "transition neither produces nor consumes data")

    if network.tasks:
        adj: dict[str, set[str]] = defaultdict(set)
        for c in network.channels:
            if c.producer in task_ids and c.consumer in task_ids:
                adj[c.producer].add(c.consumer)
                adj[c.consumer].add(c.producer)
        start = network.tasks[0].id
        seen, stack = {start}, [start]
        while stack:
            for nxt in adj[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        for t in network.tasks:
            if t.id not in seen:
                bad("connectivity", t.id, f"not connected to task {start}")
    else:
        bad("connectivity", network.name, "network has no tasks")
    return out


def mirror_name(cid: str) -> str:
    return cid + MIRROR_SUFFIX


def mirror_transform(network: Network, dims: Dimensioning) -> Network:
    """Replace capacity bounds by reverse channels pre-filled with the free space.

    Channel ``f`` from p to c gets a partner ``f_mirror`` from c to p.  Writes on
    ``f`` become reads on the partner and vice versa, and c's initial
    transition deposits ``d_f`` minus f's initial tokens on the partner, so
    ``content(f) + content(f_mirror) == d_f`` holds in every reachable state.
    """
    dims.check(network)
    names = set(network.channel_ids)
    for cid in network.channel_ids:
        if mirror_name(cid) in names:
            raise ValueError(f"channel {mirror_name(cid)} already exists")

    channels = list(network.channels)
    for c in network.channels:
        channels.append(Channel(mirror_name(c.id), c.consumer, c.producer))

    tasks = []
    for t in network.tasks:
        init_produce = dict(t.initial_transition.produce)
        for cid in network.consumed_by(t.id):
            free = dims[cid] - network.initial_tokens(cid)
            if free > 0:
                init_produce[mirror_name(cid)] = free
        transitions = []
        for tr in t.transitions:
            consume = dict(tr.consume)
            produce = dict(tr.produce)
            for cid, q in tr.produce.items():
                consume[mirror_name(cid)] = q
            for cid, q in tr.consume.items():
                produce[mirror_name(cid)] = q
            transitions.append(Transition(tr.id, tr.source, tr.target, consume, produce))
        tasks.append(
            Task(
                t.id,
                t.mode,
                InitialTransition(t.initial_transition.target, init_produce),
                tuple(transitions),
                t.initial_state,
            )
        )
    return Network(network.name, tuple(tasks), tuple(channels))
