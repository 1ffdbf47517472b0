"""Compile networks into linear systems over transition-execution counts.

A pseudo-state is a vector of counts ``n[T.tr]`` (initial transitions
included, fixed to 1) satisfying initialization, conservation, unicity,
consistency and capacity rows.  Blockedness of every task is a CNF over
three kinds of disjunct; it is made linear either with big-M indicators
(concrete capacities only) or by expanding the CNF into one pure linear
system per disjunct choice.  The dimensioning program replaces every
capacity by the single variable ``z``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Mapping, TypeVar

from .model import INITIAL_STATE, Blocking, Dimensioning, Network
from .simplex import EQ, GE, LE, Constraint, LinearSystem, Objective, Variable, VarKind

__all__ = [
    "SymbolicZ",
    "SYMBOLIC_Z",
    "Z_VAR",
    "count_var",
    "StateSystem",
    "Disjunct",
    "Clause",
    "BlockClauseSet",
    "Branch",
    "EncodedProblem",
    "ClauseEmpty",
    "SymbolicZNotSupported",
    "build_base_system",
    "build_block_clauses",
    "disjunct_constraint",
    "encode_big_m",
    "enumerate_branches",
    "iter_branches",
    "build_dimensioning_branches",
    "counts_assignment",
]

Z_VAR = "z"

NOT_IN_STATE = "not-in-state"
READ_BLOCKED = "read-blocked"
WRITE_BLOCKED = "write-blocked"


class SymbolicZ:
    """Marker for the uniform symbolic capacity ``d_f = z``."""

    def __repr__(self):
        return "SYMBOLIC_Z"


SYMBOLIC_Z = SymbolicZ()


class ClauseEmpty(ValueError):
    """Some clause has no disjunct left; the blocked-state system is empty."""


class SymbolicZNotSupported(ValueError):
    pass


def count_var(task: str, transition: str) -> str:
    return f"n[{task}.{transition}]"


Expr = dict[str, int]


def _add(expr: Expr, var: str, coef: int) -> None:
    expr[var] = expr.get(var, 0) + coef
    if expr[var] == 0:
        del expr[var]


def _combine(*terms: tuple[int, Expr]) -> Expr:
    out: Expr = {}
    for k, e in terms:
        for v, c in e.items():
            _add(out, v, k * c)
    return out


@dataclass
class StateSystem:
    network: Network
    dims: Dimensioning | SymbolicZ
    system: LinearSystem
    gamma: dict[tuple[str, str], Expr]
    produced: dict[str, Expr]  # qp_f, initial production included
    consumed: dict[str, Expr]  # qc_f

    @property
    def symbolic(self) -> bool:
        return isinstance(self.dims, SymbolicZ)

    def content(self, cid: str) -> Expr:
        """qp_f - qc_f, the number of tokens sitting in channel f."""
        return _combine((1, self.produced[cid]), (-1, self.consumed[cid]))


def build_base_system(network: Network, dims: Dimensioning | SymbolicZ) -> StateSystem:
    """Admissible pseudo-states under concrete capacities or the symbolic ``z``."""
    if isinstance(dims, Dimensioning):
        dims.check(network)
    elif not isinstance(dims, SymbolicZ):
        raise TypeError("dims must be a Dimensioning or SYMBOLIC_Z")

    system = LinearSystem()
    for t in network.tasks:
        system.add_variable(Variable(count_var(t.id, INITIAL_STATE), VarKind.TRANSITION_COUNT))
        for tr in t.transitions:
            system.add_variable(Variable(count_var(t.id, tr.id), VarKind.TRANSITION_COUNT))
    if isinstance(dims, SymbolicZ):
        system.add_variable(Variable(Z_VAR, VarKind.CAPACITY_Z))

    gamma: dict[tuple[str, str], Expr] = {}
    produced: dict[str, Expr] = {c.id: {} for c in network.channels}
    consumed: dict[str, Expr] = {c.id: {} for c in network.channels}

    for t in network.tasks:
        init = count_var(t.id, INITIAL_STATE)
        system.constrain({init: 1}, EQ, 1, f"init[{t.id}]")
        for cid, q in t.initial_transition.produce.items():
            _add(produced[cid], init, q)
        for tr in t.transitions:
            n = count_var(t.id, tr.id)
            for cid, q in tr.produce.items():
                _add(produced[cid], n, q)
            for cid, q in tr.consume.items():
                _add(consumed[cid], n, q)

        for v in t.states:
            g: Expr = {}
            if t.initial_transition.target == v:
                _add(g, init, 1)
            for tr in t.incoming(v):
                _add(g, count_var(t.id, tr.id), 1)
            for tr in t.outgoing(v):
                _add(g, count_var(t.id, tr.id), -1)
            gamma[(t.id, v)] = g
            # sum_in - 1 <= sum_out <= sum_in, i.e. 0 <= gamma_v <= 1
            system.constrain(g, GE, 0, f"conservation[{t.id}@{v}]:lo")
            system.constrain(g, LE, 1, f"conservation[{t.id}@{v}]:hi")
        unicity: Expr = {}
        for v in t.states:
            for var, c in gamma[(t.id, v)].items():
                _add(unicity, var, c)
        system.constrain(unicity, EQ, 1, f"unicity[{t.id}]")

    for c in network.channels:
        content = _combine((1, produced[c.id]), (-1, consumed[c.id]))
        system.constrain(content, GE, 0, f"consistency[{c.id}]")
        if isinstance(dims, SymbolicZ):
            system.constrain({**content, Z_VAR: -1}, LE, 0, f"capacity[{c.id}]")
            system.constrain({Z_VAR: 1}, GE, network.initial_tokens(c.id), f"valid[{c.id}]")
        else:
            system.constrain(content, LE, dims[c.id], f"capacity[{c.id}]")

    return StateSystem(network, dims, system, gamma, produced, consumed)


@dataclass(frozen=True)
class Disjunct:
    kind: str
    task: str
    state: str | None = None
    transition: str | None = None
    channel: str | None = None
    quantity: int = 0

    def label(self) -> str:
        if self.kind == NOT_IN_STATE:
            return f"{self.task} not in {self.state}"
        verb = "read" if self.kind == READ_BLOCKED else "write"
        return f"{self.task}.{self.transition} {verb}-blocked on {self.channel}"


@dataclass(frozen=True)
class Clause:
    task: str
    owner: str  # "A.a" for a strong clause, "A@s0" for a weak one
    strong: bool
    disjuncts: tuple[Disjunct, ...]


@dataclass(frozen=True)
class BlockClauseSet:
    clauses: tuple[Clause, ...]

    @property
    def empty_clauses(self) -> tuple[Clause, ...]:
        return tuple(c for c in self.clauses if not c.disjuncts)

    @property
    def raw_branch_count(self) -> int:
        return math.prod(len(c.disjuncts) for c in self.clauses)


def build_block_clauses(network: Network, override: Blocking = Blocking.FROM_MODEL) -> BlockClauseSet:
    """One clause per transition (strong tasks) or per state (weak tasks).

    A weak task's state without outgoing transitions gets no clause: a task
    stuck in a terminal state is blocked by definition, so the clause would
    always hold.
    """
    clauses = []

    def blocks(task_id, tr):
        out = [Disjunct(READ_BLOCKED, task_id, tr.source, tr.id, cid, q) for cid, q in tr.consume.items()]
        out += [Disjunct(WRITE_BLOCKED, task_id, tr.source, tr.id, cid, q) for cid, q in tr.produce.items()]
        return out

    for t in network.tasks:
        if override.is_strong(t):
            for tr in t.transitions:
                ds = [Disjunct(NOT_IN_STATE, t.id, tr.source)] + blocks(t.id, tr)
                clauses.append(Clause(t.id, f"{t.id}.{tr.id}", True, tuple(ds)))
        else:
            for v in t.states:
                outs = t.outgoing(v)
                if not outs:
                    continue
                ds = [Disjunct(NOT_IN_STATE, t.id, v)]
                for tr in outs:
                    ds += blocks(t.id, tr)
                clauses.append(Clause(t.id, f"{t.id}@{v}", False, tuple(ds)))
    return BlockClauseSet(tuple(clauses))


def disjunct_constraint(base: StateSystem, d: Disjunct) -> Constraint:
    tag = f"clause[{d.label()}]"
    if d.kind == NOT_IN_STATE:
        return Constraint(dict(base.gamma[(d.task, d.state)]), LE, 0, tag)
    content = base.content(d.channel)
    if d.kind == READ_BLOCKED:
        # fewer than q tokens available
        return Constraint(content, LE, d.quantity - 1, tag)
    # fewer than q free slots: qc - qp <= q - d - 1
    neg = {v: -c for v, c in content.items()}
    if base.symbolic:
        return Constraint({**neg, Z_VAR: 1}, LE, d.quantity - 1, tag)
    return Constraint(neg, LE, d.quantity - base.dims[d.channel] - 1, tag)


def big_m(base: StateSystem, d: Disjunct) -> int:
    """Slack that makes a disjunct row redundant given 0 <= content <= d_f."""
    if d.kind == NOT_IN_STATE:
        return 1
    cap = base.dims[d.channel]
    if d.kind == READ_BLOCKED:
        return cap - d.quantity + 1
    return cap + 1 - d.quantity


@dataclass(frozen=True)
class Branch:
    disjuncts: tuple[Disjunct, ...]
    system: LinearSystem

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(d.label() for d in self.disjuncts)


@dataclass
class EncodedProblem:
    kind: str  # "big-m" | "branches"
    base: StateSystem
    clauses: BlockClauseSet
    system: LinearSystem | None = None
    indicators: dict[str, tuple[int, Disjunct]] = field(default_factory=dict)
    branches: list[Branch] = field(default_factory=list)
    objective: Objective | None = None

    @property
    def raw_count(self) -> int:
        return self.clauses.raw_branch_count


def encode_big_m(base: StateSystem, clauses: BlockClauseSet, dims: Dimensioning | None = None) -> EncodedProblem:
    """Single system with one 0/1 indicator per (clause, disjunct)."""
    if base.symbolic:
        raise SymbolicZNotSupported("big-M needs concrete capacities")
    if dims is not None and dims != base.dims:
        raise ValueError("dimensioning differs from the one the base system was built with")
    system = base.system.copy()
    indicators: dict[str, tuple[int, Disjunct]] = {}
    for k, clause in enumerate(clauses.clauses):
        ys = []
        for m, d in enumerate(clause.disjuncts):
            y = f"y[{k}.{m}]"
            system.add_variable(Variable(y, VarKind.INDICATOR, 1))
            indicators[y] = (k, d)
            ys.append(y)
            con = disjunct_constraint(base, d)
            M = big_m(base, d)
            # row <= rhs + M (1 - y)
            system.add(Constraint({**con.coeffs, y: M}, LE, con.rhs + M, f"bigm[{k}.{m}] {con.tag}"))
        system.constrain({y: 1 for y in ys}, GE, 1, f"clause[{clause.owner}]")
    return EncodedProblem("big-m", base, clauses, system=system, indicators=indicators)


S = TypeVar("S")


def iter_branches(
    base: StateSystem,
    clauses: BlockClauseSet,
    state: S = None,
    extend: Callable[[S, Constraint], S | None] | None = None,
) -> Iterator[tuple[tuple[Disjunct, ...], S]]:
    """Depth-first disjunct selection, one choice per clause.

    A clause already satisfied by an earlier choice (same row) is skipped:
    any other choice there would only add rows and shrink the branch.
    ``extend(state, row)`` may return None to prune the whole subtree, which
    is how callers plug in incremental feasibility checks.
    """
    if clauses.empty_clauses:
        raise ClauseEmpty(clauses.empty_clauses[0].owner)
    rows = [[disjunct_constraint(base, d) for d in c.disjuncts] for c in clauses.clauses]
    seen: set[frozenset] = set()

    def rec(k: int, chosen: tuple[Disjunct, ...], keys: frozenset, st):
        while k < len(rows) and any(r.key() in keys for r in rows[k]):
            k += 1
        if k == len(rows):
            if keys not in seen:
                seen.add(keys)
                yield chosen, st
            return
        for d, row in zip(clauses.clauses[k].disjuncts, rows[k]):
            if extend is not None:
                child = extend(st, row)
                if child is None:
                    continue
            else:
                child = st
            yield from rec(k + 1, chosen + (d,), keys | {row.key()}, child)

    yield from rec(0, (), frozenset(), state)


def enumerate_branches(base: StateSystem, clauses: BlockClauseSet) -> EncodedProblem:
    """Every distinct branch system (no feasibility pruning)."""
    branches = []
    for chosen, _ in iter_branches(base, clauses):
        rows = [disjunct_constraint(base, d) for d in chosen]
        branches.append(Branch(chosen, base.system.extended(rows)))
    return EncodedProblem("branches", base, clauses, branches=branches)


def build_dimensioning_branches(network: Network, override: Blocking = Blocking.FROM_MODEL) -> EncodedProblem:
    """Branches of the ``maximize z`` program with every capacity set to ``z``."""
    base = build_base_system(network, SYMBOLIC_Z)
    clauses = build_block_clauses(network, override)
    problem = enumerate_branches(base, clauses)
    problem.objective = Objective("max", {Z_VAR: 1})
    return problem


def counts_assignment(counts: Mapping[tuple[str, str], int], z: int | None = None) -> dict[str, Fraction]:
    """Variable assignment for a transition-count vector keyed by (task, transition)."""
    out = {count_var(t, tr): Fraction(n) for (t, tr), n in counts.items()}
    if z is not None:
        out[Z_VAR] = Fraction(z)
    return out
