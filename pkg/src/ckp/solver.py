"""Exact branch-and-cut over the complementarity feasible set S.

The tree branches on SOS1 groups: a node whose LP point keeps two or more
slots of some group positive splits that group's slot range in two, forcing
one half to zero on each child.  Nodes are explored best-bound-first with
FIFO tie-breaking, cuts live in one global deduplicated pool (all five
families are valid for S itself, not just a subtree), and every LP is
solved exactly, so the final bound/incumbent equality is a proof.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cuts import FAMILIES
from .errors import CkpError, PreconditionError, ValidationError
from .model import (Instance, Point, VarRef, complementarity_violations,
                    is_feasible, profit_of, validate_assumptions)
from .separation import separate_exact, separate_greedy
from .simplex import LpProblem, solve_lp, verify_certificate

_F0 = Fraction(0)
_F1 = Fraction(1)


@dataclass(frozen=True)
class SolveConfig:
    """Branch-and-cut knobs; the defaults match the CLI defaults."""

    families: tuple = FAMILIES
    max_cuts_per_node: int = 10
    node_limit: int = 10 ** 5
    exact_fallback: bool = False
    enum_limit: Optional[int] = None

    def __post_init__(self):
        for name in self.families:
            if name not in FAMILIES:
                raise ValidationError("unknown cut family: %r" % (name,))
        if self.max_cuts_per_node < 0:
            raise ValidationError("max_cuts_per_node must be nonnegative")
        # The root must always be explored: it is the only node without a
        # parent bound, so letting the limit stop it first would leave the
        # reported best bound baseless.
        if self.node_limit < 1:
            raise ValidationError("node_limit must be at least 1")


@dataclass(frozen=True)
class BranchNode:
    forced_zero: frozenset
    parent_bound: Optional[Fraction]  # None at the root (no bound yet)


@dataclass(frozen=True)
class SolveReport:
    value: Fraction
    point: Point
    nodes: int
    cuts_per_family: dict
    lp_pivots: int
    proven_optimal: bool
    best_bound: Fraction
    cut_pool: tuple = field(default=(), repr=False)


def _fractional_knapsack(instance: Instance):
    """Exact LP optimum when complementarity is vacuous (all singletons)."""
    items = []
    for ref in instance.refs():
        c = instance.profit(ref)
        if c <= 0:
            continue
        a = instance.weight(ref)
        items.append((ref, a, c))
    value = _F0
    entries = []
    remaining = instance.capacity
    zero_weight = [(ref, c) for ref, a, c in items if a == 0]
    for ref, c in zero_weight:
        entries.append((ref, _F1))
        value += c
    rest = sorted(((c / a, ref, a, c) for ref, a, c in items if a != 0),
                  key=lambda t: (-t[0], t[1]))
    for _, ref, a, c in rest:
        if remaining <= 0:
            break
        if a <= remaining:
            entries.append((ref, _F1))
            value += c
            remaining -= a
        else:
            frac = remaining / a
            entries.append((ref, frac))
            value += c * frac
            break
    return value, Point(entries)


def _branch_group(instance: Instance, point: Point, violated) -> int:
    """Group with >= 2 positive slots maximizing its value mass, tie: index."""
    best = None
    best_mass = None
    for i in violated:
        mass = _F0
        for ref, x in point.entries:
            if ref.group == i:
                mass += x
        if best is None or mass > best_mass:
            best, best_mass = i, mass
    return best


def branch_and_cut(instance: Instance, config: Optional[SolveConfig] = None) -> SolveReport:
    """Exact maximum of the instance's profit over S, with proof.

    Degenerate instances short-circuit: when the capacity admits every
    group's heaviest slot simultaneously the all-best-slots point is
    optimal, and when every group is a singleton the LP relaxation already
    solves the problem; both answer with zero nodes.
    """
    if config is None:
        config = SolveConfig()
    if not instance.is_normalized():
        raise PreconditionError("instance is not normalized")
    report = validate_assumptions(instance)
    cuts_per_family = {name: 0 for name in FAMILIES}
    if not report.assumption2:
        return SolveReport(report.trivial_value, report.trivial_point, 0,
                           cuts_per_family, 0, True, report.trivial_value)
    if not report.assumption1:
        value, point = _fractional_knapsack(instance)
        return SolveReport(value, point, 0, cuts_per_family, 0, True, value)

    objective = {ref: instance.profit(ref) for ref in instance.refs()}
    pool = []            # GeneratedCut, in addition order
    pool_rows = set()    # LinearInequality dedup, seeded with the knapsack row
    problem = LpProblem.build(instance, objective)
    pool_rows.add(problem.rows[0])

    incumbent_value = _F0
    incumbent_point = Point()
    nodes = 0
    pivots = 0
    counter = 0
    # Heap entries: (negated parent bound, insertion order, node).  The root
    # has no bound yet; -inf sorts it first, and exact Fractions compare
    # correctly against it.
    heap = [(float("-inf"), counter, BranchNode(frozenset(), None))]
    limit_hit = False

    def rebuild_problem():
        return LpProblem.build(instance, objective,
                               tuple(cut.inequality for cut in pool))

    while heap:
        neg_bound, _, node = heapq.heappop(heap)
        bound = node.parent_bound
        if bound is not None and bound <= incumbent_value:
            # Best-bound order: nothing left can beat the incumbent.
            break
        if nodes >= config.node_limit:
            heapq.heappush(heap, (neg_bound, counter + 1, node))
            limit_hit = True
            break
        nodes += 1
        solution = solve_lp(problem, node.forced_zero)
        pivots += solution.pivots
        if not solution.optimal:
            continue
        assert verify_certificate(problem, solution, node.forced_zero)
        value, point = solution.value, solution.point

        added_here = 0
        while (value > incumbent_value and config.families
               and added_here < config.max_cuts_per_node
               and complementarity_violations(instance, point)):
            sep = separate_greedy(instance, point, config.families)
            if not sep.found and config.exact_fallback:
                sep = separate_exact(instance, point, config.families,
                                     config.enum_limit)
            if not sep.found:
                break
            if sep.cut.inequality in pool_rows:
                break  # exact arithmetic should make this unreachable
            pool.append(sep.cut)
            pool_rows.add(sep.cut.inequality)
            cuts_per_family[sep.cut.family] += 1
            added_here += 1
            problem = rebuild_problem()
            solution = solve_lp(problem, node.forced_zero)
            pivots += solution.pivots
            if not solution.optimal:
                raise CkpError("LP became infeasible after adding a valid cut")
            assert verify_certificate(problem, solution, node.forced_zero)
            value, point = solution.value, solution.point

        if value <= incumbent_value:
            continue
        violated = complementarity_violations(instance, point)
        if not violated:
            incumbent_value = value
            incumbent_point = point
            continue
        group = _branch_group(instance, point, violated)
        slots = sorted(ref.slot for ref, _ in point.entries if ref.group == group)
        split = slots[0]
        n = instance.slots(group)
        low = frozenset(VarRef(group, j) for j in range(1, split + 1))
        high = frozenset(VarRef(group, j) for j in range(split + 1, n + 1))
        for forced in (node.forced_zero | low, node.forced_zero | high):
            counter += 1
            heapq.heappush(heap, (-value, counter, BranchNode(forced, value)))

    if limit_hit:
        open_bounds = [entry[2].parent_bound for entry in heap
                       if entry[2].parent_bound is not None]
        best_bound = max([incumbent_value] + open_bounds)
        proven = best_bound == incumbent_value
    else:
        best_bound = incumbent_value
        proven = True
    assert is_feasible(instance, incumbent_point)
    assert profit_of(instance, incumbent_point) == incumbent_value
    return SolveReport(incumbent_value, incumbent_point, nodes,
                       cuts_per_family, pivots, proven, best_bound,
                       tuple(pool))
