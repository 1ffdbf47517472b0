"""Pure integer programming by Gomory fractional cuts.

The LP optimum is first moved to the lexicographically least optimal
vertex; from then on every cut is taken from the first fractional entry of
(objective, x_0, x_1, ...) and re-optimized by the lexicographic dual
simplex.  That vector strictly increases from round to round, which is the
classical finiteness argument.  Enumeration is never used, so unbounded
polyhedra are fine as long as the objective is bounded; unbounded
relaxations are settled by looking for a single integral point (a rational
polyhedron with a nonempty integer hull is bounded in a direction exactly
when its hull is).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .simplex import (
    Constraint,
    LinearSystem,
    Objective,
    PivotLimit,
    Tableau,
    VarKind,
    to_fraction,
)

__all__ = [
    "CutConfig",
    "IntOptimal",
    "IntInfeasible",
    "IntUnbounded",
    "IntFeasible",
    "Inconclusive",
    "solve_ilp",
    "integer_feasible",
    "gomory_cut",
]

CUT_LIMIT = "CutLimit"
ITERATION_LIMIT = "IterationLimit"


@dataclass(frozen=True)
class CutConfig:
    max_cuts: int = 10_000
    max_pivots: int = 1_000_000
    all_rows: bool = True

    def __post_init__(self):
        if self.max_cuts <= 0 or self.max_pivots <= 0:
            raise ValueError("cut and pivot limits must be positive")


@dataclass(frozen=True)
class IntOptimal:
    value: Fraction
    point: dict[str, Fraction]
    cuts: int = 0
    pivots: int = 0


@dataclass(frozen=True)
class IntInfeasible:
    cuts: int = 0
    pivots: int = 0


@dataclass(frozen=True)
class IntUnbounded:
    witness: dict[str, Fraction]
    ray: dict[str, Fraction]
    cuts: int = 0
    pivots: int = 0


@dataclass(frozen=True)
class IntFeasible:
    point: dict[str, Fraction]
    cuts: int = 0
    pivots: int = 0


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    cuts: int = 0
    pivots: int = 0


def _frac(q):
    return q - (q.numerator // q.denominator)


def _lcm_denominator(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, Fraction(v).denominator)
    return out


def integral_form(system: LinearSystem) -> LinearSystem:
    """Scale every row to integer coefficients so all slacks are integral too."""
    out = LinearSystem(system.variables)
    for c in system.constraints:
        k = _lcm_denominator(list(c.coeffs.values()) + [c.rhs])
        out.add(Constraint({v: a * k for v, a in c.coeffs.items()}, c.rel, c.rhs * k, c.tag))
    return out


def _integral_objective(objective: Objective) -> Objective:
    k = _lcm_denominator(objective.coeffs.values())
    return Objective(objective.sense, {v: a * k for v, a in objective.coeffs.items()})


def gomory_cut(t: Tableau) -> tuple[str, dict[int, object], object] | None:
    """Cut for the first fractional entry of (objective, x_0, x_1, ...).

    Returns (source, {column: coefficient}, rhs) for ``sum coeff_j x_j >= rhs``
    over nonbasic columns, or None when the basic solution is integral.
    A fractional objective yields the rounding cut ``c.x >= ceil(value)``,
    valid because the objective has integer coefficients.
    """
    if _frac(t.zval) != 0:
        coeffs = {j: d for j, d in enumerate(t.cost) if d != 0}
        return "objective", coeffs, 1 - _frac(t.zval)
    cuts = fractional_cuts(t, limit=1)
    return cuts[0] if cuts else None


def fractional_cuts(t: Tableau, limit: int | None = None) -> list[tuple[str, dict[int, object], object]]:
    """Gomory fractional cuts from fractional basic rows, in column order."""
    where = {b: i for i, b in enumerate(t.basis)}
    out = []
    for col in range(t.ncols):
        i = where.get(col)
        if i is None or _frac(t.rhs[i]) == 0:
            continue
        row = t.rows[i]
        coeffs = {j: f for j, a in enumerate(row) if j != col and (f := _frac(a)) != 0}
        out.append((t.names[col], coeffs, _frac(t.rhs[i])))
        if limit is not None and len(out) >= limit:
            break
    return out


def _drop_inactive_cuts(t: Tableau) -> None:
    """Remove cut rows whose slack is basic.

    Structural coordinates precede every slack in the lexicographic order and
    determine all slacks, so no nonbasic column's lexicographic sign can hinge
    on a removed row: the basis stays lexicographically optimal.
    """
    drop_rows = [i for i, b in enumerate(t.basis) if t.kinds[b] == "cut"]
    if not drop_rows:
        return
    drop_cols = {t.basis[i] for i in drop_rows}
    keep_cols = [j for j in range(t.ncols) if j not in drop_cols]
    remap = {j: n for n, j in enumerate(keep_cols)}
    keep_rows = [i for i in range(len(t.rows)) if i not in set(drop_rows)]
    t.rows = [[t.rows[i][j] for j in keep_cols] for i in keep_rows]
    t.rhs = [t.rhs[i] for i in keep_rows]
    t.basis = [remap[t.basis[i]] for i in keep_rows]
    t.origin = [t.origin[i] for i in keep_rows]
    t._ident = [remap.get(t._ident[i], -1) for i in keep_rows]
    t.names = [t.names[j] for j in keep_cols]
    t.kinds = [t.kinds[j] for j in keep_cols]
    t.cost = [t.cost[j] for j in keep_cols]


def _cut_key(cut) -> tuple:
    _, coeffs, rhs = cut
    return tuple(sorted(coeffs.items())), rhs


class _Loop:
    def __init__(self, t: Tableau, config: CutConfig, log: Callable[[str], None] | None):
        self.t = t
        self.config = config
        self.log = log
        self.cuts = 0
        self.rounds = 0
        self.history: list[list] = []

    def _add(self, source, coeffs, rhs) -> None:
        t = self.t
        self.cuts += 1
        if self.log is not None:
            terms = " + ".join(f"{to_fraction(a)}*{t.names[j]}" for j, a in sorted(coeffs.items()))
            self.log(f"round {self.rounds} cut {self.cuts}: source={source} {terms or '0'} >= {to_fraction(rhs)}")
        t.add_dense_row({j: -a for j, a in coeffs.items()}, -rhs, kind="cut", ref=self.cuts)

    def run(self) -> str:
        """Returns "optimal", "infeasible", or an Inconclusive reason."""
        t = self.t
        try:
            t.lex_primal()
            while True:
                self.history.append(t.lex_vector()[: 1 + t.nvars])
                first = gomory_cut(t)
                if first is None:
                    return "optimal"
                if self.cuts >= self.config.max_cuts:
                    return CUT_LIMIT
                self.rounds += 1
                batch = [first]
                if self.config.all_rows:
                    seen = {_cut_key(first)}
                    for c in fractional_cuts(t):
                        if _cut_key(c) not in seen:
                            seen.add(_cut_key(c))
                            batch.append(c)
                for cut in batch[: max(1, self.config.max_cuts - self.cuts)]:
                    self._add(*cut)
                while True:
                    status = t.lex_dual_step()
                    if status == "optimal":
                        break
                    if status == "infeasible":
                        return "infeasible"
                _drop_inactive_cuts(t)
        except PivotLimit:
            return ITERATION_LIMIT


def _setup(system: LinearSystem, config: CutConfig) -> tuple[LinearSystem, Tableau]:
    scaled = integral_form(system)
    t = Tableau.from_system(scaled)
    t.max_pivots = config.max_pivots
    return scaled, t


def integer_feasible(
    system: LinearSystem,
    config: CutConfig = CutConfig(),
    log: Callable[[str], None] | None = None,
) -> IntFeasible | IntInfeasible | Inconclusive:
    """Find an integral point, or prove there is none.

    Minimizes the capacity variable when the system has one and the zero
    objective otherwise; either way the objective is bounded below, so the
    cutting-plane loop has an optimum to converge to.
    """
    _, t = _setup(system, config)
    try:
        if t.phase1() is not None:
            return IntInfeasible(0, t.pivots)
        z = [j for j, v in enumerate(system.variables) if v.kind is VarKind.CAPACITY_Z]
        t.set_objective({j: 1 for j in z})
        t.primal_simplex()
    except PivotLimit:
        return Inconclusive(ITERATION_LIMIT, 0, t.pivots)
    loop = _Loop(t, config, log)
    status = loop.run()
    if status == "optimal":
        return IntFeasible(t.point(), loop.cuts, t.pivots)
    if status == "infeasible":
        return IntInfeasible(loop.cuts, t.pivots)
    return Inconclusive(status, loop.cuts, t.pivots)


def solve_ilp(
    system: LinearSystem,
    objective: Objective,
    config: CutConfig = CutConfig(),
    log: Callable[[str], None] | None = None,
) -> IntOptimal | IntInfeasible | IntUnbounded | Inconclusive:
    """Optimize over the integral points of the system (every variable integral)."""
    _, t = _setup(system, config)
    try:
        if t.phase1() is not None:
            return IntInfeasible(0, t.pivots)
        t.install(_integral_objective(objective))
        enter = t.primal_simplex()
    except PivotLimit:
        return Inconclusive(ITERATION_LIMIT, 0, t.pivots)
    if enter is not None:
        ray = t.ray(enter)
        found = integer_feasible(system, config, log)
        pivots = t.pivots + found.pivots
        if isinstance(found, IntFeasible):
            return IntUnbounded(found.point, ray, found.cuts, pivots)
        if isinstance(found, IntInfeasible):
            return IntInfeasible(found.cuts, pivots)
        return Inconclusive(found.reason, found.cuts, pivots)
    loop = _Loop(t, config, log)
    status = loop.run()
    if status == "optimal":
        point = t.point()
        return IntOptimal(objective.value(point), point, loop.cuts, t.pivots)
    if status == "infeasible":
        return IntInfeasible(loop.cuts, t.pivots)
    return Inconclusive(status, loop.cuts, t.pivots)
