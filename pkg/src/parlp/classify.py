"""Per-problem regularity predicates and finite-sample boundedness reports.

Regularity is read off the support of each basic optimal point: with B
the support columns and ``y^T = p_B^T B^-``, the point is *strict* when
``y.A^j - p_j > 0`` for every column j where the point is zero.  A problem
is regular if some basic optimal point is strict and strongly regular if
all of them are.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from parlp.errors import InfeasibleProblem, NotOptimal
from parlp.linalg import Vector, dot, format_rational, norm_squared, pseudo_inverse
from parlp.model import LpProblem
from parlp.solver import (
    BasicPoint,
    SolveOutcome,
    Status,
    optimal_face_direction,
    recession_direction,
    solve,
)


def _vec(v) -> list[str]:
    return [format_rational(x) for x in v]


@dataclass(frozen=True)
class StrictSlackCheck:
    """Dual built from the support of one basic optimal point, with its slacks."""

    point: BasicPoint
    y: Vector
    slacks: Vector
    failing_column: int | None  # first zero coordinate whose slack is not > 0

    @property
    def strict(self) -> bool:
        return self.failing_column is None

    def to_dict(self) -> dict[str, Any]:
        out = {"x": _vec(self.point.x), "y": _vec(self.y), "slacks": _vec(self.slacks)}
        if self.failing_column is not None:
            out["failing_column"] = self.failing_column
        if self.point.degenerate:
            out["degenerate"] = True
        return out


def strict_slack_check(problem: LpProblem, bp: BasicPoint) -> StrictSlackCheck:
    A, p = problem.A, problem.p
    if bp.support:
        B = A.columns(bp.support)
        p_B = tuple(p[j] for j in bp.support)
        y = pseudo_inverse(B).rmul(p_B)
    else:
        y = (Fraction(0),) * problem.m
    slacks = tuple(dot(y, A.col(j)) - p[j] for j in range(problem.n))
    failing = next(
        (j for j in range(problem.n) if bp.x[j] == 0 and slacks[j] <= 0), None
    )
    return StrictSlackCheck(bp, y, slacks, failing)


def _optimal(problem: LpProblem, outcome: SolveOutcome | None) -> SolveOutcome:
    outcome = outcome or solve(problem)
    if outcome.status is not Status.OPTIMAL:
        raise NotOptimal(f"problem is {outcome.status.value}")
    return outcome


def is_regular(problem: LpProblem, outcome: SolveOutcome | None = None):
    """``(True, check)`` for the first strict basic optimal point, else
    ``(False, checks)`` listing why each one fails."""
    outcome = _optimal(problem, outcome)
    checks = [strict_slack_check(problem, bp) for bp in outcome.optimal_basics]
    for c in checks:
        if c.strict:
            return True, c
    return False, checks


def is_strongly_regular(problem: LpProblem, outcome: SolveOutcome | None = None):
    """``(True, checks)`` when every basic optimal point is strict, else
    ``(False, check)`` for the first one that is not."""
    outcome = _optimal(problem, outcome)
    checks = [strict_slack_check(problem, bp) for bp in outcome.optimal_basics]
    for c in checks:
        if not c.strict:
            return False, c
    return True, checks


def is_singleton_solvable(problem: LpProblem, outcome: SolveOutcome | None = None):
    """Whether the optimal set is a single point.

    True iff there is exactly one basic optimal point and the optimal face
    has no recession direction.  The witness is the unique point, a second
    optimal vertex, or a direction ``d`` along which the optimum stays
    optimal.
    """
    outcome = _optimal(problem, outcome)
    if len(outcome.optimal_basics) > 1:
        return False, {"second_vertex": outcome.optimal_basics[1].x}
    d = optimal_face_direction(problem)
    if d is not None:
        return False, {"direction": d}
    return True, {"point": outcome.optimal_basics[0].x}


def is_bounded_feasible(problem: LpProblem, outcome: SolveOutcome | None = None):
    outcome = outcome or solve(problem)
    if outcome.status is Status.INFEASIBLE:
        raise InfeasibleProblem("feasible set is empty")
    d = recession_direction(problem)
    return d is None, d


@dataclass(frozen=True)
class Classification:
    feasible: bool
    bounded_feasible: bool
    status: Status
    regular: bool
    strongly_regular: bool
    singleton_solvable: bool
    witnesses: dict = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": self.status.value,
            "feasible": self.feasible,
            "bounded_feasible": self.bounded_feasible,
            "regular": self.regular,
            "strongly_regular": self.strongly_regular,
            "singleton_solvable": self.singleton_solvable,
            "witnesses": self.witnesses,
        }


def classify(problem: LpProblem) -> Classification:
    outcome = solve(problem)
    if outcome.status is Status.INFEASIBLE:
        return Classification(False, False, outcome.status, False, False, False)
    bounded, direction = is_bounded_feasible(problem, outcome)
    witnesses: dict[str, Any] = {}
    if direction is not None:
        witnesses["recession_direction"] = _vec(direction)
    if outcome.status is Status.UNBOUNDED:
        return Classification(True, bounded, outcome.status, False, False, False, witnesses)

    regular, rw = is_regular(problem, outcome)
    witnesses["regular"] = rw.to_dict() if regular else [c.to_dict() for c in rw]
    strong, sw = is_strongly_regular(problem, outcome)
    witnesses["strongly_regular"] = [c.to_dict() for c in sw] if strong else sw.to_dict()
    single, gw = is_singleton_solvable(problem, outcome)
    witnesses["singleton_solvable"] = {k: _vec(v) for k, v in gw.items()}
    return Classification(
        True, bounded, outcome.status, regular, strong, single, witnesses
    )


@dataclass(frozen=True)
class BoundednessReport:
    """Smallest-norm optimal selection per problem and the sample suprema.

    Finite samples only: a large or growing supremum is evidence against a
    uniform bound, not a proof either way.
    """

    selections: tuple[tuple[Vector, Vector], ...]
    sup_x_norm2: Fraction
    sup_xy_norm2: Fraction

    def to_dict(self) -> dict[str, Any]:
        return {
            "count": len(self.selections),
            "sup_x_norm2": format_rational(self.sup_x_norm2),
            "sup_xy_norm2": format_rational(self.sup_xy_norm2),
            "selections": [{"x": _vec(x), "y": _vec(y)} for x, y in self.selections],
        }


def boundedness_witness(problems: Sequence[LpProblem]) -> BoundednessReport:
    selections = []
    sup_x = sup_xy = Fraction(0)
    for i, problem in enumerate(problems):
        outcome = solve(problem)
        if outcome.status is not Status.OPTIMAL:
            raise NotOptimal(f"problem {i} is {outcome.status.value}", where=i)
        bp = min(outcome.optimal_basics, key=lambda b: norm_squared(b.x))
        nx = norm_squared(bp.x)
        nxy = nx + norm_squared(bp.y)
        selections.append((bp.x, bp.y))
        sup_x, sup_xy = max(sup_x, nx), max(sup_xy, nxy)
    return BoundednessReport(tuple(selections), sup_x, sup_xy)
