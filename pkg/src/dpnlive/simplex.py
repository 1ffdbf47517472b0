"""Exact rational linear programming.

Dense-tableau two-phase primal simplex with Bland's rule, returning
checkable certificates: an optimal point, a feasible point plus improving
ray, or Farkas multipliers.  The same tableau supports warm-started row
additions with a Bland dual simplex, and a lexicographic dual simplex used
by the cutting-plane solver in :mod:`dpnlive.gomory`.

All arithmetic is exact.  ``gmpy2.mpq`` backs the tableau when available;
values crossing the public API are ``fractions.Fraction``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction

__all__ = [
    "VarKind",
    "Variable",
    "Constraint",
    "LinearSystem",
    "Objective",
    "FarkasCertificate",
    "Optimal",
    "Unbounded",
    "Infeasible",
    "Feasible",
    "Tableau",
    "NotDualFeasible",
    "solve_lp",
    "check_feasible",
]

LE, EQ, GE = "<=", "=", ">="
_RELATIONS = (LE, EQ, GE)

Number = Union[int, Fraction]


def to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    return Fraction(int(v.numerator), int(v.denominator))


class VarKind(enum.Enum):
    TRANSITION_COUNT = "count"
    INDICATOR = "indicator"
    CAPACITY_Z = "z"
    AUXILIARY = "aux"


@dataclass(frozen=True)
class Variable:
    name: str
    kind: VarKind = VarKind.AUXILIARY
    upper: int | None = None


@dataclass(frozen=True)
class Constraint:
    coeffs: dict[str, Fraction]
    rel: str
    rhs: Fraction
    tag: str = ""

    def __post_init__(self):
        if self.rel not in _RELATIONS:
            raise ValueError(f"bad relation {self.rel!r}")
        clean = {k: Fraction(v) for k, v in sorted(self.coeffs.items()) if v != 0}
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    def lhs(self, point: Mapping[str, Number]) -> Fraction:
        return sum((c * Fraction(point.get(v, 0)) for v, c in self.coeffs.items()), Fraction(0))

    def satisfied_by(self, point: Mapping[str, Number]) -> bool:
        lhs = self.lhs(point)
        if self.rel == LE:
            return lhs <= self.rhs
        if self.rel == GE:
            return lhs >= self.rhs
        return lhs == self.rhs

    def key(self) -> tuple:
        """Hashable identity used for deduplicating constraint sets."""
        return (tuple(self.coeffs.items()), self.rel, self.rhs)

    def __str__(self):
        terms = " ".join(f"{_fmt(c)}*{v}" for v, c in self.coeffs.items()) or "0"
        head = f"{self.tag}: " if self.tag else ""
        return f"{head}{terms} {self.rel} {_fmt(self.rhs)}"


def _fmt(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


class LinearSystem:
    """Nonnegative variables with optional integer upper bounds, plus linear rows."""

    def __init__(self, variables: Iterable[Variable] = (), constraints: Iterable[Constraint] = ()):
        self.variables: list[Variable] = []
        self._index: dict[str, int] = {}
        self.constraints: list[Constraint] = []
        for v in variables:
            self.add_variable(v)
        for c in constraints:
            self.add(c)

    def add_variable(self, var: Variable) -> Variable:
        if var.name in self._index:
            raise ValueError(f"duplicate variable {var.name}")
        if var.kind is VarKind.INDICATOR and var.upper != 1:
            var = Variable(var.name, var.kind, 1)
        if var.upper is not None and var.upper < 0:
            raise ValueError(f"negative upper bound on {var.name}")
        self._index[var.name] = len(self.variables)
        self.variables.append(var)
        return var

    def add(self, con: Constraint) -> Constraint:
        for v in con.coeffs:
            if v not in self._index:
                raise KeyError(f"constraint references undeclared variable {v}")
        self.constraints.append(con)
        return con

    def constrain(self, coeffs: Mapping[str, Number], rel: str, rhs: Number, tag: str = "") -> Constraint:
        return self.add(Constraint(dict(coeffs), rel, Fraction(rhs), tag))

    def has_variable(self, name: str) -> bool:
        return name in self._index

    def variable(self, name: str) -> Variable:
        return self.variables[self._index[name]]

    @property
    def names(self) -> list[str]:
        return [v.name for v in self.variables]

    def copy(self) -> "LinearSystem":
        out = LinearSystem()
        out.variables = list(self.variables)
        out._index = dict(self._index)
        out.constraints = list(self.constraints)
        return out

    def extended(self, constraints: Iterable[Constraint]) -> "LinearSystem":
        out = self.copy()
        for c in constraints:
            out.add(c)
        return out

    def violations(self, point: Mapping[str, Number]) -> list[str]:
        bad = []
        for v in self.variables:
            x = Fraction(point.get(v.name, 0))
            if x < 0 or (v.upper is not None and x > v.upper):
                bad.append(f"bound on {v.name}: {_fmt(x)}")
        for i, c in enumerate(self.constraints):
            if not c.satisfied_by(point):
                bad.append(f"row {i} {c}")
        return bad

    def satisfied_by(self, point: Mapping[str, Number]) -> bool:
        return not self.violations(point)

    def dump(self) -> str:
        lines = [str(c) for c in self.constraints]
        for v in self.variables:
            if v.upper is not None:
                lines.append(f"bound: 1*{v.name} <= {v.upper}")
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class Objective:
    sense: str  # "max" or "min"
    coeffs: dict[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.sense not in ("max", "min"):
            raise ValueError(f"bad sense {self.sense!r}")
        object.__setattr__(self, "coeffs", {k: Fraction(v) for k, v in self.coeffs.items() if v != 0})

    @classmethod
    def maximize(cls, **coeffs) -> "Objective":
        return cls("max", coeffs)

    @classmethod
    def minimize(cls, **coeffs) -> "Objective":
        return cls("min", coeffs)

    def value(self, point: Mapping[str, Number]) -> Fraction:
        return sum((c * Fraction(point.get(v, 0)) for v, c in self.coeffs.items()), Fraction(0))


@dataclass(frozen=True)
class FarkasCertificate:
    """Multipliers proving infeasibility.

    ``rows[i]`` multiplies constraint i written in ``<=`` orientation (a ``>=``
    row is read as ``-a.x <= -b``); it is nonnegative except on equality rows,
    where any sign is allowed.  ``upper[v]`` multiplies ``v <= upper`` and
    ``lower[v]`` multiplies ``-v <= 0``.  The weighted sum is ``0 <= -1``.
    """

    rows: dict[int, Fraction]
    upper: dict[str, Fraction] = field(default_factory=dict)
    lower: dict[str, Fraction] = field(default_factory=dict)

    def combination(self, system: LinearSystem) -> tuple[dict[str, Fraction], Fraction]:
        coeffs: dict[str, Fraction] = {v: Fraction(0) for v in system.names}
        rhs = Fraction(0)
        for i, m in self.rows.items():
            con = system.constraints[i]
            sign = -1 if con.rel == GE else 1
            for v, a in con.coeffs.items():
                coeffs[v] += m * sign * a
            rhs += m * sign * con.rhs
        for v, m in self.upper.items():
            coeffs[v] += m
            rhs += m * system.variable(v).upper
        for v, m in self.lower.items():
            coeffs[v] -= m
        return {v: c for v, c in coeffs.items() if c != 0}, rhs

    def verify(self, system: LinearSystem) -> bool:
        for i, m in self.rows.items():
            if system.constraints[i].rel != EQ and m < 0:
                return False
        if any(m < 0 for m in self.upper.values()) or any(m < 0 for m in self.lower.values()):
            return False
        if any(system.variable(v).upper is None for v in self.upper):
            return False
        coeffs, rhs = self.combination(system)
        return not coeffs and rhs < 0


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    point: dict[str, Fraction]
    pivots: int = 0


@dataclass(frozen=True)
class Unbounded:
    point: dict[str, Fraction]
    ray: dict[str, Fraction]
    pivots: int = 0


@dataclass(frozen=True)
class Infeasible:
    certificate: FarkasCertificate
    pivots: int = 0


@dataclass(frozen=True)
class Feasible:
    point: dict[str, Fraction]
    pivots: int = 0


class NotDualFeasible(RuntimeError):
    pass


class PivotLimit(RuntimeError):
    pass


_ZERO = Q(0)
_ONE = Q(1)


class Tableau:
    """Dense simplex tableau for ``A x = b, x >= 0``.

    Row i reads ``x[basis[i]] + sum_j rows[i][j] x_j = rhs[i]`` (the basic
    column holds 1).  The objective is minimized and kept in reduced form
    ``z = zval + sum_j cost[j] x_j`` over nonbasic columns.

    Column order is structural variables, then slacks, then artificials and
    cut slacks, in creation order; Bland's rule and the lexicographic rules
    both use that order.
    """

    def __init__(self):
        self.rows: list[list] = []
        self.rhs: list = []
        self.basis: list[int] = []
        self.cost: list = []
        self.zval = _ZERO
        self.names: list[str] = []
        self.kinds: list[str] = []  # "var" | "slack" | "art" | "cut"
        self.nvars = 0
        # per row: ("con", i, sign, slack_col) | ("ub", name, 1, slack_col) | ("cut", k, 1, slack_col)
        self.origin: list[tuple] = []
        self.pivots = 0
        self.max_pivots: int | None = None
        self.trivially_infeasible: FarkasCertificate | None = None
        self._ident: list[int] = []  # per row: column that was the identity column at build time

    # -- construction ------------------------------------------------------

    @classmethod
    def from_system(cls, system: LinearSystem) -> "Tableau":
        t = cls()
        n = len(system.variables)
        t.nvars = n
        t.names = list(system.names)
        t.kinds = ["var"] * n
        index = {v: j for j, v in enumerate(system.names)}

        raw = []  # (coeff list, slack coef or 0, rhs, origin)
        for i, con in enumerate(system.constraints):
            if not con.coeffs:
                ok = con.satisfied_by({})
                if not ok:
                    # 0 rel b violated: the row alone, weighted -1/b, reads 0 <= -1
                    t.trivially_infeasible = FarkasCertificate({i: Fraction(-1) / con.rhs})
                continue
            row = [_ZERO] * n
            for v, a in con.coeffs.items():
                row[index[v]] = Q(a)
            slack = {LE: 1, GE: -1, EQ: 0}[con.rel]
            raw.append((row, slack, Q(con.rhs), ("con", i)))
        for j, v in enumerate(system.variables):
            if v.upper is not None:
                row = [_ZERO] * n
                row[j] = _ONE
                raw.append((row, 1, Q(v.upper), ("ub", v.name)))

        nslack = sum(1 for _, s, _, _ in raw if s)
        slack_cols = []
        col = n
        for _, s, _, origin in raw:
            if s:
                slack_cols.append(col)
                t.names.append(f"s[{origin[1]}]")
                t.kinds.append("slack")
                col += 1
            else:
                slack_cols.append(None)
        assert col == n + nslack

        needs_art = []
        for (row, s, b, origin), sc in zip(raw, slack_cols):
            sign = 1
            if b < 0:
                sign = -1
            needs_art.append(s * sign != 1)
        nart = sum(needs_art)
        total = n + nslack + nart
        art = n + nslack
        for k, ((row, s, b, origin), sc) in enumerate(zip(raw, slack_cols)):
            sign = -1 if b < 0 else 1
            full = [x * sign for x in row] + [_ZERO] * (total - n)
            if sc is not None:
                full[sc] = Q(s * sign)
            if needs_art[k]:
                full[art] = _ONE
                t.names.append(f"a[{k}]")
                t.kinds.append("art")
                t.basis.append(art)
                t._ident.append(art)
                art += 1
            else:
                t.basis.append(sc)
                t._ident.append(sc)
            t.rows.append(full)
            t.rhs.append(b * sign)
            t.origin.append((origin[0], origin[1], sign, sc))
        t.cost = [_ZERO] * total
        return t

    def copy(self) -> "Tableau":
        t = Tableau.__new__(Tableau)
        t.rows = [list(r) for r in self.rows]
        t.rhs = list(self.rhs)
        t.basis = list(self.basis)
        t.cost = list(self.cost)
        t.zval = self.zval
        t.names = list(self.names)
        t.kinds = list(self.kinds)
        t.nvars = self.nvars
        t.origin = list(self.origin)
        t.pivots = self.pivots
        t.max_pivots = self.max_pivots
        t.trivially_infeasible = self.trivially_infeasible
        t._ident = list(self._ident)
        return t

    @property
    def ncols(self) -> int:
        return len(self.names)

    # -- core operations ---------------------------------------------------

    def pivot(self, r: int, c: int) -> None:
        if self.max_pivots is not None and self.pivots >= self.max_pivots:
            raise PivotLimit(self.pivots)
        self.pivots += 1
        row = self.rows[r]
        p = row[c]
        if p != 1:
            inv = _ONE / p
            row = [x * inv for x in row]
            self.rows[r] = row
            self.rhs[r] = self.rhs[r] * inv
        b = self.rhs[r]
        nz = [(j, x) for j, x in enumerate(row) if x != 0]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            a = other[c]
            if a != 0:
                for j, x in nz:
                    other[j] -= a * x
                self.rhs[i] -= a * b
        a = self.cost[c]
        if a != 0:
            cost = self.cost
            for j, x in nz:
                cost[j] -= a * x
            self.zval += a * b
        self.basis[r] = c

    def set_objective(self, costs: Mapping[int, object]) -> None:
        """Install ``min sum costs[j] x_j`` (column-indexed) in reduced form."""
        cost = [_ZERO] * self.ncols
        for j, c in costs.items():
            cost[j] = Q(c)
        zval = _ZERO
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb != 0:
                row = self.rows[i]
                for j, x in enumerate(row):
                    if x != 0:
                        cost[j] -= cb * x
                zval += cb * self.rhs[i]
        self.cost = cost
        self.zval = zval

    def primal_simplex(self, allowed: set[int] | None = None) -> int | None:
        """Bland-rule primal simplex on the installed objective.

        Returns None at optimality, or the entering column of an unbounded ray.
        Columns outside ``allowed`` never enter.
        """
        while True:
            c = None
            for j, d in enumerate(self.cost):
                if d < 0 and (allowed is None or j in allowed):
                    c = j
                    break
            if c is None:
                return None
            r = self._ratio_row(c)
            if r is None:
                return c
            self.pivot(r, c)

    def _ratio_row(self, c: int) -> int | None:
        best = None
        best_ratio = None
        for i, row in enumerate(self.rows):
            a = row[c]
            if a > 0:
                ratio = self.rhs[i] / a
                if (best is None or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[i] < self.basis[best])):
                    best, best_ratio = i, ratio
        return best

    def dual_simplex(self) -> int | None:
        """Bland-rule dual simplex; requires nonnegative reduced costs.

        Returns None once primal feasible, or the index of a row proving
        infeasibility (negative rhs, no negative entry).
        """
        while True:
            r = None
            for i, b in enumerate(self.rhs):
                if b < 0 and (r is None or self.basis[i] < self.basis[r]):
                    r = i
            if r is None:
                return None
            row = self.rows[r]
            c = None
            best = None
            for j, a in enumerate(row):
                if a < 0:
                    ratio = self.cost[j] / -a
                    if best is None or ratio < best:
                        c, best = j, ratio
            if c is None:
                return r
            self.pivot(r, c)

    def solution(self) -> list:
        x = [_ZERO] * self.ncols
        for i, b in enumerate(self.basis):
            x[b] = self.rhs[i]
        return x

    def point(self) -> dict[str, Fraction]:
        x = self.solution()
        return {self.names[j]: to_fraction(x[j]) for j in range(self.nvars)}

    # -- phases --------------------------------------------------------------

    def phase1(self) -> FarkasCertificate | None:
        """Reach a feasible basis; return a Farkas certificate if there is none.

        Artificial columns are removed on success, together with rows found
        to be redundant.
        """
        if self.trivially_infeasible is not None:
            return self.trivially_infeasible
        arts = [j for j, k in enumerate(self.kinds) if k == "art"]
        if arts:
            self.set_objective({j: 1 for j in arts})
            self.primal_simplex()
            if self.zval > 0:
                return self._farkas()
            self._drive_out_artificials()
        self.set_objective({})
        return None

    def _farkas(self) -> FarkasCertificate:
        # y = c_B B^-1, read off the columns that formed the initial identity;
        # the normalized rows weighted by -y / w* sum to 0 <= -1 plus bounds.
        cb = [(i, _ONE) for i, b in enumerate(self.basis) if self.kinds[b] == "art"]
        rows: dict[int, Fraction] = {}
        upper: dict[str, Fraction] = {}
        for k, (kind, ref, sign, _) in enumerate(self.origin):
            col = self._ident[k]
            y = sum((w * self.rows[i][col] for i, w in cb), _ZERO)
            mu = -y * sign / self.zval
            if mu == 0:
                continue
            if kind == "con":
                rows[ref] = to_fraction(mu)
            else:
                upper[ref] = to_fraction(mu)
        return FarkasCertificate(rows, upper)

    def _drive_out_artificials(self) -> None:
        keep_rows = []
        for i, b in enumerate(self.basis):
            if self.kinds[b] != "art":
                keep_rows.append(i)
                continue
            row = self.rows[i]
            c = next((j for j, x in enumerate(row) if x != 0 and self.kinds[j] != "art"), None)
            if c is None:
                continue  # redundant equality
            self.pivot(i, c)
            keep_rows.append(i)
        keep_cols = [j for j, k in enumerate(self.kinds) if k != "art"]
        self.rows = [[self.rows[i][j] for j in keep_cols] for i in keep_rows]
        self.rhs = [self.rhs[i] for i in keep_rows]
        remap = {j: n for n, j in enumerate(keep_cols)}
        self.basis = [remap[self.basis[i]] for i in keep_rows]
        self.origin = [self.origin[i] for i in keep_rows]
        self._ident = [remap.get(self._ident[i], -1) for i in keep_rows]
        self.names = [self.names[j] for j in keep_cols]
        self.kinds = [self.kinds[j] for j in keep_cols]
        self.cost = [self.cost[j] for j in keep_cols]

    def install(self, objective: Objective) -> None:
        index = {n: j for j, n in enumerate(self.names[: self.nvars])}
        sign = -1 if objective.sense == "max" else 1
        self.set_objective({index[v]: sign * c for v, c in objective.coeffs.items()})

    def ray(self, c: int) -> dict[str, Fraction]:
        d = [_ZERO] * self.ncols
        d[c] = _ONE
        for i, b in enumerate(self.basis):
            d[b] = -self.rows[i][c]
        return {self.names[j]: to_fraction(d[j]) for j in range(self.nvars)}

    # -- warm start ----------------------------------------------------------

    def add_row(self, coeffs: Mapping[str, Number], rel: str, rhs: Number, kind: str = "cut", ref=None) -> int:
        """Append ``coeffs.x rel rhs`` (``<=`` or ``>=``) with a fresh basic slack.

        The row is expressed in the current basis, so its rhs may turn
        negative; restore feasibility with :meth:`dual_simplex`.
        """
        if rel not in (LE, GE):
            raise ValueError("add_row takes inequalities only")
        sign = 1 if rel == LE else -1
        index = {n: j for j, n in enumerate(self.names[: self.nvars])}
        dense = {index[v]: Q(a) * sign for v, a in coeffs.items() if a != 0}
        return self.add_dense_row(dense, Q(rhs) * sign, kind, ref)

    def add_dense_row(self, dense: Mapping[int, object], rhs, kind: str = "cut", ref=None) -> int:
        """Append ``sum dense[j] x_j + s = rhs`` over current columns; returns the slack column."""
        for row in self.rows:
            row.append(_ZERO)
        self.cost.append(_ZERO)
        col = self.ncols
        self.names.append(f"s[{kind}{ref if ref is not None else len(self.rows)}]")
        self.kinds.append(kind if kind in ("cut", "slack") else "slack")
        new = [_ZERO] * (col + 1)
        for j, a in dense.items():
            new[j] = Q(a)
        new[col] = _ONE
        b = Q(rhs)
        for i, bcol in enumerate(self.basis):
            a = new[bcol]
            if a != 0:
                src = self.rows[i]
                for j, x in enumerate(src):
                    if x != 0:
                        new[j] -= a * x
                b -= a * self.rhs[i]
        self.rows.append(new)
        self.rhs.append(b)
        self.basis.append(col)
        self.origin.append((kind, ref, 1, col))
        self._ident.append(col)
        return col

    # -- lexicographic machinery -------------------------------------------

    def _basic_row_of(self) -> dict[int, int]:
        return {b: i for i, b in enumerate(self.basis)}

    def lex_column(self, c: int, where: dict[int, int] | None = None) -> list:
        """Change of (z, x_0, x_1, ...) per unit increase of nonbasic column c."""
        where = where if where is not None else self._basic_row_of()
        out = [self.cost[c]]
        for j in range(self.ncols):
            if j == c:
                out.append(_ONE)
            elif j in where:
                out.append(-self.rows[where[j]][c])
            else:
                out.append(_ZERO)
        return out

    def lex_vector(self) -> list:
        """Current (z, x_0, x_1, ...) in column order; the cutting-plane measure."""
        return [self.zval] + self.solution()

    @staticmethod
    def _lex_sign(vec) -> int:
        for v in vec:
            if v > 0:
                return 1
            if v < 0:
                return -1
        return 0

    def lex_primal(self) -> None:
        """From an optimal basis, pivot to the lexicographically least optimum.

        Bland's rule over lexicographic reduced costs (a fixed infinitesimal
        perturbation of the objective); requires the objective to be bounded.
        """
        while True:
            where = self._basic_row_of()
            enter = None
            for j in range(self.ncols):
                if j in where:
                    continue
                if self._lex_sign(self.lex_column(j, where)) < 0:
                    enter = j
                    break
            if enter is None:
                return
            r = self._ratio_row(enter)
            if r is None:  # pragma: no cover - excluded by boundedness
                raise RuntimeError("lexicographic objective unbounded")
            self.pivot(r, enter)

    def lex_dual_step(self) -> str:
        """Apply one lexicographic dual simplex pivot.

        Returns ``"optimal"`` if the basis is already primal feasible,
        ``"infeasible"`` if the leaving row admits no entering column, and
        ``"pivoted"`` otherwise.  Raises NotDualFeasible when reduced costs
        are negative or a candidate column is not lexicographically positive.
        """
        if any(d < 0 for d in self.cost):
            raise NotDualFeasible("negative reduced cost")
        r = None
        for i, b in enumerate(self.rhs):
            if b < 0 and (r is None or self.basis[i] < self.basis[r]):
                r = i
        if r is None:
            return "optimal"
        where = self._basic_row_of()
        row = self.rows[r]
        best = None
        best_vec = None
        for j, a in enumerate(row):
            if a < 0 and j not in where:
                col = self.lex_column(j, where)
                if self._lex_sign(col) <= 0:
                    raise NotDualFeasible(f"column {self.names[j]} is not lexicographically positive")
                scaled = [v / -a for v in col]
                if best_vec is None or scaled < best_vec:
                    best, best_vec = j, scaled
        if best is None:
            return "infeasible"
        self.pivot(r, best)
        return "pivoted"


def _complete(cert: FarkasCertificate, system: LinearSystem) -> FarkasCertificate:
    """Orient multipliers to the stored relations and add the x >= 0 terms."""
    rows = {i: (-m if system.constraints[i].rel == GE else m) for i, m in cert.rows.items()}
    partial = FarkasCertificate(rows, cert.upper)
    coeffs, _ = partial.combination(system)
    return FarkasCertificate(rows, dict(cert.upper), dict(sorted(coeffs.items())))


def solve_lp(system: LinearSystem, objective: Objective, max_pivots: int | None = None) -> Optimal | Unbounded | Infeasible:
    """Optimize over the system; every outcome carries a checkable certificate."""
    t = Tableau.from_system(system)
    t.max_pivots = max_pivots
    cert = t.phase1()
    if cert is not None:
        return Infeasible(_complete(cert, system), t.pivots)
    t.install(objective)
    enter = t.primal_simplex()
    point = t.point()
    if enter is not None:
        return Unbounded(point, t.ray(enter), t.pivots)
    value = objective.value(point)
    return Optimal(value, point, t.pivots)


def check_feasible(system: LinearSystem, max_pivots: int | None = None) -> Feasible | Infeasible:
    t = Tableau.from_system(system)
    t.max_pivots = max_pivots
    cert = t.phase1()
    if cert is not None:
        return Infeasible(_complete(cert, system), t.pivots)
    return Feasible(t.point(), t.pivots)
