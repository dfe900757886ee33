"""Dense exact-rational simplex for the LP relaxation.

Maximizes a linear objective over {0 <= x <= 1, rows A x <= rhs}.  The
upper bounds are expanded into explicit rows, so the feasible region is
always a polytope and the method never meets an unbounded ray.  Bland's
rule (smallest eligible index, both for entering and leaving) guarantees
termination; a second phase with artificial variables handles rows with
negative right-hand sides so infeasibility is detected rather than
mis-reported.

The returned dual multipliers y (one per row, bound rows included) certify
optimality exactly: y >= 0, y A >= c on the active columns, and
y . rhs = c . x*.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import CkpError, ValidationError
from .model import Instance, LinearInequality, Point, knapsack_row

_F0 = Fraction(0)
_F1 = Fraction(1)


@dataclass(frozen=True)
class LpProblem:
    """LP relaxation data: instance variables, rows (knapsack first), objective.

    ``rows`` must contain the instance's knapsack row exactly once; bounds
    0 <= x <= 1 are implicit and handled by the solver.
    """

    instance: Instance
    rows: tuple
    objective: tuple  # sorted ((VarRef, Fraction), ...)

    def __post_init__(self):
        knap = knapsack_row(self.instance)
        if sum(1 for row in self.rows if row == knap) != 1:
            raise ValidationError("rows must include the knapsack row exactly once")

    @classmethod
    def build(cls, instance: Instance, objective, extra_rows=()) -> "LpProblem":
        items = objective.items() if hasattr(objective, "items") else objective
        cleaned = []
        for ref, value in items:
            instance.check_ref(ref)
            cleaned.append((ref, Fraction(value) if not isinstance(value, Fraction) else value))
        cleaned.sort()
        return cls(instance, (knapsack_row(instance),) + tuple(extra_rows),
                   tuple(cleaned))

    def objective_map(self):
        return dict(self.objective)


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal" | "infeasible"
    value: Optional[Fraction]
    point: Optional[Point]
    duals: tuple  # per row of the expanded system: problem rows, then bounds
    pivots: int

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class _Tableau:
    """Row-echelon simplex tableau over Fractions with Bland's rule."""

    def __init__(self, matrix, basis):
        self.matrix = matrix      # list of rows, last column = rhs
        self.basis = basis        # basic column index per row
        self.pivots = 0

    def pivot(self, row, col):
        m = self.matrix
        prow = m[row]
        inv = prow[col]
        if inv != 1:
            m[row] = prow = [entry / inv for entry in prow]
        for r, other in enumerate(m):
            if r != row and other[col] != 0:
                factor = other[col]
                m[r] = [entry - factor * p for entry, p in zip(other, prow)]
        self.basis[row] = col
        self.pivots += 1

    def run(self, cost):
        """Maximize: iterate Bland pivots until no reduced cost is positive.

        ``cost`` is the objective coefficient per column (rhs column 0).
        Returns the final z-row (cost of basis combination minus cost).
        """
        m = self.matrix
        ncols = len(m[0])
        while True:
            zrow = list(cost)
            for r, bcol in enumerate(self.basis):
                cb = cost[bcol]
                if cb != 0:
                    rowr = m[r]
                    for c in range(ncols):
                        if rowr[c]:
                            zrow[c] -= cb * rowr[c]
            entering = None
            for c in range(ncols - 1):
                if zrow[c] > 0:
                    entering = c
                    break
            if entering is None:
                return zrow
            leaving = None
            best = None
            for r, rowr in enumerate(m):
                a = rowr[entering]
                if a > 0:
                    ratio = rowr[-1] / a
                    if best is None or ratio < best or (
                            ratio == best and self.basis[r] < self.basis[leaving]):
                        best = ratio
                        leaving = r
            if leaving is None:
                raise CkpError("LP is unbounded; bounds rows missing")
            self.pivot(leaving, entering)


def solve_lp(problem: LpProblem, forced_zero=frozenset()) -> LpSolution:
    """Exact optimum of the boxed LP, minus any forced-to-zero variables."""
    refs = [r for r in problem.instance.refs() if r not in forced_zero]
    col_of = {ref: idx for idx, ref in enumerate(refs)}
    nvars = len(refs)
    rows = list(problem.rows) + [
        LinearInequality({ref: _F1}, _F1) for ref in refs]
    nrows = len(rows)
    # columns: structural vars, slacks, [artificials], rhs
    need_artificial = [row.rhs < 0 for row in rows]
    nart = sum(need_artificial)
    ncols = nvars + nrows + nart + 1
    matrix = []
    basis = []
    art_col = nvars + nrows
    art_cols = []
    for r, row in enumerate(rows):
        line = [_F0] * ncols
        for ref, coeff in row.terms:
            c = col_of.get(ref)
            if c is not None:
                line[c] = coeff
        line[nvars + r] = _F1
        line[-1] = row.rhs
        if need_artificial[r]:
            for c in range(ncols):
                if line[c]:
                    line[c] = -line[c]
            line[art_col] = _F1
            basis.append(art_col)
            art_cols.append(art_col)
            art_col += 1
        else:
            basis.append(nvars + r)
        matrix.append(line)
    tab = _Tableau(matrix, basis)

    if nart:
        phase1 = [_F0] * ncols
        for c in art_cols:
            phase1[c] = Fraction(-1)  # maximize -(sum of artificials)
        tab.run(phase1)
        art_set = set(art_cols)
        infeasibility = _F0
        for r, bcol in enumerate(tab.basis):
            if bcol in art_set:
                infeasibility += tab.matrix[r][-1]
        if infeasibility > 0:
            return LpSolution("infeasible", None, None, (), tab.pivots)
        # Drive any degenerate artificial out of the basis if possible.
        for r, bcol in enumerate(list(tab.basis)):
            if bcol in art_set:
                for c in range(nvars + nrows):
                    if tab.matrix[r][c] != 0:
                        tab.pivot(r, c)
                        break
        # Blank out artificial columns so phase 2 never re-enters them.
        for line in tab.matrix:
            for c in art_cols:
                line[c] = _F0

    objective = problem.objective_map()
    cost = [_F0] * ncols
    for ref, coeff in objective.items():
        c = col_of.get(ref)
        if c is not None:
            cost[c] = coeff
    zrow = tab.run(cost)

    values = {}
    for r, bcol in enumerate(tab.basis):
        if bcol < nvars:
            values[refs[bcol]] = tab.matrix[r][-1]
    point = Point({ref: v for ref, v in values.items() if v != 0})
    value = _F0
    for ref, coeff in objective.items():
        x = point.value(ref)
        if x:
            value += coeff * x
    # Multiplier of row r is the negated reduced cost of its slack; the sign
    # works out the same for rows that were negated for phase 1.
    duals = tuple(-zrow[nvars + r] for r in range(nrows))
    return LpSolution("optimal", value, point, duals, tab.pivots)


def verify_certificate(problem: LpProblem, solution: LpSolution,
                       forced_zero=frozenset()) -> bool:
    """Exact optimality check: primal feasible, dual feasible, values equal."""
    if not solution.optimal:
        return False
    refs = [r for r in problem.instance.refs() if r not in forced_zero]
    rows = list(problem.rows) + [LinearInequality({ref: _F1}, _F1) for ref in refs]
    point = solution.point
    for ref, _ in point.entries:
        if ref in forced_zero:
            return False
    for row in rows:
        lhs = sum((coeff * point.value(ref) for ref, coeff in row.terms), _F0)
        if lhs > row.rhs:
            return False
    duals = solution.duals
    if len(duals) != len(rows):
        return False
    if any(y < 0 for y in duals):
        return False
    objective = problem.objective_map()
    for ref in refs:
        reduced = sum((duals[i] * row.coeff(ref) for i, row in enumerate(rows)
                       if row.coeff(ref)), _F0)
        if reduced < objective.get(ref, _F0):
            return False
    dual_value = sum((y * row.rhs for y, row in zip(duals, rows)), _F0)
    return dual_value == solution.value
