"""Liveness and buffer-dimensioning verdicts.

Three sufficient liveness tests, from weakest to strongest:

* ``big-m-lp``: the big-M system's LP relaxation is infeasible;
* ``branch-lp``: every branch of the disjunct expansion is LP-infeasible;
* ``branch-ilp``: every branch has no integral point.

None of them ever claims a deadlock.  A feasible pseudo-state may be
unreachable, so failure to prove liveness is reported as ``unknown``.

Dimensioning maximizes the uniform capacity ``z`` over all branches.  A
finite optimum ``z_ip`` means every uniform capacity above it is live (the
capacity monotony of Kahn networks carries this to any larger non-uniform
capacities too).
"""

from __future__ import annotations

import enum
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

from .encoder import (
    SYMBOLIC_Z,
    Z_VAR,
    BlockClauseSet,
    Disjunct,
    StateSystem,
    build_base_system,
    build_block_clauses,
    disjunct_constraint,
    encode_big_m,
    iter_branches,
)
from .gomory import CutConfig, Inconclusive, IntFeasible, IntInfeasible, IntOptimal, integer_feasible, solve_ilp
from .model import Blocking, Dimensioning, Network
from .simplex import FarkasCertificate, Infeasible, LinearSystem, Objective, PivotLimit, Tableau, check_feasible

__all__ = [
    "Method",
    "BranchStats",
    "SolveStats",
    "Verdict",
    "DimensionResult",
    "HierarchyReport",
    "HierarchyViolation",
    "NoChannels",
    "check_liveness",
    "dimension",
    "verdict_hierarchy",
    "feasible_leaves",
]

LIVE = "live"
UNKNOWN = "unknown"
INCONCLUSIVE = "inconclusive"

BOUNDED_LIVE = "bounded-live"
UNBOUNDED = "unbounded"
LIVE_FOR_ALL_VALID = "live-for-all-valid"


class Method(enum.Enum):
    BIG_M_LP = "big-m-lp"
    BRANCH_LP = "branch-lp"
    BRANCH_ILP = "branch-ilp"


class NoChannels(ValueError):
    pass


class HierarchyViolation(AssertionError):
    """A weaker test proved liveness where a stronger one did not."""


@dataclass
class BranchStats:
    """Search-tree tallies.

    ``infeasible`` counts pruned search nodes (each one settles every branch
    below it), ``feasible`` counts LP-feasible leaves, and ``unbounded`` the
    leaves whose relaxation is unbounded in ``z``.
    """

    feasible: int = 0
    infeasible: int = 0
    unbounded: int = 0

    @property
    def total(self) -> int:
        return self.feasible + self.infeasible


@dataclass
class SolveStats:
    configs: int = 0
    cuts: int = 0
    pivots: int = 0
    millis: int | None = None


@dataclass
class Verdict:
    kind: str
    method: str
    witness: dict[str, Fraction] | None = None
    branch: tuple[str, ...] | None = None
    reason: str | None = None
    certificate: FarkasCertificate | None = None
    branches: BranchStats | None = None
    stats: SolveStats = field(default_factory=SolveStats)

    @property
    def live(self) -> bool:
        return self.kind == LIVE


@dataclass
class DimensionResult:
    kind: str
    method: str
    z_ip: int | None = None
    z_lp: Fraction | None = None
    lp_unbounded: bool = False
    recommended: Dimensioning | None = None
    minimal_valid: Dimensioning | None = None
    witness: dict[str, Fraction] | None = None
    branch: tuple[str, ...] | None = None
    reason: str | None = None
    branches: BranchStats | None = None
    stats: SolveStats = field(default_factory=SolveStats)


def _labels(ds: tuple[Disjunct, ...]) -> tuple[str, ...]:
    return tuple(d.label() for d in ds)


def feasible_leaves(
    base: StateSystem,
    clauses: BlockClauseSet,
    counts: BranchStats | None = None,
    stats: SolveStats | None = None,
) -> Iterator[tuple[tuple[Disjunct, ...], Tableau]]:
    """LP-feasible branches, each with a feasible tableau (zero objective).

    Children are warm-started from the parent tableau: the chosen disjunct
    row is appended and a dual simplex restores feasibility or proves the
    whole subtree empty.
    """
    counts = counts if counts is not None else BranchStats()
    stats = stats if stats is not None else SolveStats()
    root = Tableau.from_system(base.system)
    if root.phase1() is not None:
        stats.pivots += root.pivots
        counts.infeasible += 1
        return
    stats.pivots += root.pivots

    def extend(tab: Tableau, row) -> Tableau | None:
        child = tab.copy()
        child.add_row(row.coeffs, row.rel, row.rhs, kind="slack")
        bad = child.dual_simplex()
        stats.pivots += child.pivots - tab.pivots
        if bad is not None:
            counts.infeasible += 1
            return None
        return child

    for chosen, tab in iter_branches(base, clauses, root, extend):
        counts.feasible += 1
        yield chosen, tab


def _branch_system(base: StateSystem, chosen: tuple[Disjunct, ...]) -> LinearSystem:
    return base.system.extended(disjunct_constraint(base, d) for d in chosen)


def _integer_probe(args) -> IntFeasible | IntInfeasible | Inconclusive:
    system, config = args
    return integer_feasible(system, config)


def check_liveness(
    network: Network,
    dims: Dimensioning,
    method: Method = Method.BRANCH_ILP,
    override: Blocking = Blocking.FROM_MODEL,
    config: CutConfig = CutConfig(),
    log: Callable[[str], None] | None = None,
    workers: int = 1,
    deadline: float | None = None,
) -> Verdict:
    """Try to prove that no globally blocked pseudo-state exists under ``dims``.

    Raises InvalidDimensioning when a capacity cannot hold the channel's
    initial tokens.
    """
    started = time.monotonic()
    dims.check(network)
    base = build_base_system(network, dims)
    clauses = build_block_clauses(network, override)
    stats = SolveStats()
    counts = BranchStats()
    name = method.value

    if clauses.empty_clauses:
        return Verdict(LIVE, name, reason=f"clause {clauses.empty_clauses[0].owner} has no disjunct",
                       branches=counts, stats=stats)

    if method is Method.BIG_M_LP:
        problem = encode_big_m(base, clauses)
        result = check_feasible(problem.system)
        stats.pivots += result.pivots
        if isinstance(result, Infeasible):
            if not result.certificate.verify(problem.system):  # pragma: no cover
                raise AssertionError("Farkas certificate failed verification")
            return Verdict(LIVE, name, certificate=result.certificate, stats=stats)
        chosen = tuple(
            d.label() for y, (_, d) in problem.indicators.items() if result.point.get(y, 0) > 0
        )
        return Verdict(UNKNOWN, name, witness=result.point, branch=chosen, stats=stats)

    leaves = feasible_leaves(base, clauses, counts, stats)
    if method is Method.BRANCH_LP:
        for chosen, tab in leaves:
            return Verdict(UNKNOWN, name, witness=tab.point(), branch=_labels(chosen),
                           branches=counts, stats=stats)
        return Verdict(LIVE, name, branches=counts, stats=stats)

    undecided: str | None = None
    if workers > 1:
        todo = [(chosen, _branch_system(base, chosen)) for chosen, _ in leaves]
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_integer_probe, [(s, config) for _, s in todo]))
        pairs = zip((c for c, _ in todo), results)
    else:
        pairs = ((chosen, integer_feasible(_branch_system(base, chosen), config, log)) for chosen, _ in leaves)
    for chosen, found in pairs:
        stats.cuts += found.cuts
        stats.pivots += found.pivots
        if isinstance(found, IntFeasible):
            return Verdict(UNKNOWN, name, witness=found.point, branch=_labels(chosen),
                           branches=counts, stats=stats)
        if isinstance(found, Inconclusive):
            undecided = undecided or found.reason
        if deadline is not None and time.monotonic() - started > deadline:
            undecided = undecided or "Deadline"
            break
    if undecided:
        return Verdict(INCONCLUSIVE, name, reason=undecided, branches=counts, stats=stats)
    return Verdict(LIVE, name, branches=counts, stats=stats)


def _lp_max_z(tab: Tableau) -> tuple[Fraction | None, dict[str, Fraction]]:
    """Maximize z on a feasible leaf tableau; None means unbounded."""
    t = tab.copy()
    t.install(Objective("max", {Z_VAR: 1}))
    enter = t.primal_simplex()
    point = t.point()
    return (None if enter is not None else point[Z_VAR]), point


def dimension(
    network: Network,
    method: Method = Method.BRANCH_ILP,
    override: Blocking = Blocking.FROM_MODEL,
    config: CutConfig = CutConfig(),
    log: Callable[[str], None] | None = None,
    deadline: float | None = None,
) -> DimensionResult:
    """Largest uniform capacity ``z`` admitting a blocked pseudo-state."""
    if method is Method.BIG_M_LP:
        raise ValueError("dimensioning needs a branch method: big-M is not linear in z")
    if not network.channels:
        raise NoChannels(f"network {network.name} has no channels")
    started = time.monotonic()
    base = build_base_system(network, SYMBOLIC_Z)
    clauses = build_block_clauses(network, override)
    objective = Objective("max", {Z_VAR: 1})
    stats = SolveStats()
    counts = BranchStats()
    name = method.value
    floor_z = network.max_initial_tokens()
    minimal = Dimensioning.uniform(network, floor_z)

    best_ip: int | None = None
    best_lp: Fraction | None = None
    lp_unbounded = False
    undecided: str | None = None
    best_witness = None
    best_branch = None

    def finish(**kw) -> DimensionResult:
        return DimensionResult(method=name, branches=counts, stats=stats, **kw)

    for chosen, tab in feasible_leaves(base, clauses, counts, stats):
        if deadline is not None and time.monotonic() - started > deadline:
            undecided = undecided or "Deadline"
            break
        try:
            z_lp, lp_point = _lp_max_z(tab)
        except PivotLimit:  # pragma: no cover - leaf tableaus carry no pivot limit
            undecided = "IterationLimit"
            continue
        if z_lp is None:
            counts.unbounded += 1
            lp_unbounded = True
            if method is Method.BRANCH_LP:
                return finish(kind=UNBOUNDED, lp_unbounded=True, witness=lp_point, branch=_labels(chosen),
                              reason="relaxation unbounded in z: liveness and boundedness not established")
            found = integer_feasible(_branch_system(base, chosen), config, log)
            stats.cuts += found.cuts
            stats.pivots += found.pivots
            if isinstance(found, IntFeasible):
                return finish(kind=UNBOUNDED, lp_unbounded=True, witness=found.point, branch=_labels(chosen),
                              reason="some branch admits blocked pseudo-states for every z: "
                                     "liveness and boundedness not established")
            if isinstance(found, Inconclusive):
                undecided = undecided or found.reason
            continue

        if best_lp is None or z_lp > best_lp:
            best_lp = z_lp
        if method is Method.BRANCH_LP:
            if best_ip is None or math.floor(z_lp) > best_ip:
                best_ip, best_witness, best_branch = math.floor(z_lp), lp_point, _labels(chosen)
            continue
        if best_ip is not None and math.floor(z_lp) <= best_ip:
            continue  # cannot raise the maximum
        result = solve_ilp(_branch_system(base, chosen), objective, config, log)
        stats.cuts += result.cuts
        stats.pivots += result.pivots
        if isinstance(result, IntOptimal):
            z = int(result.value)
            if best_ip is None or z > best_ip:
                best_ip, best_witness, best_branch = z, result.point, _labels(chosen)
        elif isinstance(result, Inconclusive):
            undecided = undecided or result.reason

    if undecided:
        return finish(kind=INCONCLUSIVE, reason=undecided, z_lp=best_lp, lp_unbounded=lp_unbounded)
    if best_ip is None:
        return finish(
            kind=LIVE_FOR_ALL_VALID,
            z_lp=best_lp,
            lp_unbounded=lp_unbounded,
            minimal_valid=minimal,
            recommended=minimal,
            reason=f"no blocked pseudo-state for any uniform capacity z >= {floor_z} "
                   "although the network has channels",
        )
    return finish(
        kind=BOUNDED_LIVE,
        z_ip=best_ip,
        z_lp=best_lp,
        lp_unbounded=lp_unbounded,
        recommended=Dimensioning.uniform(network, best_ip + 1),
        witness=best_witness,
        branch=best_branch,
    )


@dataclass
class HierarchyReport:
    verdicts: dict[str, Verdict]

    @property
    def strongest_live(self) -> str | None:
        for m in (Method.BIG_M_LP, Method.BRANCH_LP, Method.BRANCH_ILP):
            if self.verdicts[m.value].live:
                return m.value
        return None


def verdict_hierarchy(
    network: Network,
    dims: Dimensioning,
    override: Blocking = Blocking.FROM_MODEL,
    config: CutConfig = CutConfig(),
) -> HierarchyReport:
    """Run all three tests; a weaker one proving liveness forces the stronger ones to."""
    order = (Method.BIG_M_LP, Method.BRANCH_LP, Method.BRANCH_ILP)
    verdicts = {m.value: check_liveness(network, dims, m, override, config) for m in order}
    for weak, strong in zip(order, order[1:]):
        if verdicts[weak.value].live and not verdicts[strong.value].live:
            raise HierarchyViolation(f"{weak.value} proved liveness but {strong.value} did not")
    return HierarchyReport(verdicts)
