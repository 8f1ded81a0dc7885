"""Closed-form ranging for right-hand-side and objective perturbations.

For an optimal basis B the perturbed problem ``b + theta*db`` (or
``p + theta*dp``) keeps B optimal over a closed interval of theta around
zero, and on that interval the optimal value is affine in theta.  Interval
endpoints may be infinite; they are represented by ``math.inf`` sentinels,
never used in arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

from parlp.errors import (
    LinearityViolation,
    NotOptimal,
    NotOptimalBasic,
    RectangularBasis,
    ZeroDelta,
)
from parlp.linalg import Vector, dot, format_rational, invert, to_rational
from parlp.model import LpProblem, PerturbationRay
from parlp.solver import BasicPoint, Status, basis_dual, solve, verify_kkt

NEG_INF = -math.inf
POS_INF = math.inf


def format_extended(v) -> str:
    if v == NEG_INF:
        return "-inf"
    if v == POS_INF:
        return "+inf"
    return format_rational(v)


def parse_extended(s: str):
    if s in ("-inf", "+inf", "inf"):
        return NEG_INF if s == "-inf" else POS_INF
    return to_rational(s)


@dataclass(frozen=True)
class ThetaInterval:
    lo: Any  # Fraction or -inf
    hi: Any  # Fraction or +inf
    slope: Fraction
    base_value: Fraction
    basic_point: BasicPoint
    degenerate: bool = False
    kind: str = "rhs"

    def __contains__(self, theta) -> bool:
        return self.lo <= theta <= self.hi

    def predicted_value(self, theta) -> Fraction:
        return self.base_value + to_rational(theta) * self.slope

    def to_dict(self) -> dict[str, Any]:
        return {
            "lo": format_extended(self.lo),
            "hi": format_extended(self.hi),
            "slope": format_rational(self.slope),
            "base_value": format_rational(self.base_value),
            "degenerate": self.degenerate,
        }


def _ratio_bounds(pairs: Iterable[tuple[Fraction, Fraction]]):
    """Interval ``{theta : num + theta*den >= 0 for every pair}``.

    Pairs with ``den > 0`` bound theta from below by ``-num/den``, pairs with
    ``den < 0`` from above; an empty side is unbounded.
    """
    lo, hi = NEG_INF, POS_INF
    for num, den in pairs:
        if den > 0:
            lo = max(lo, -num / den)
        elif den < 0:
            hi = min(hi, -num / den)
    return lo, hi


def _prepare(problem: LpProblem, bp: BasicPoint | None, delta: Sequence, size: int):
    delta = tuple(to_rational(v) for v in delta)
    if len(delta) != size:
        raise ValueError(f"perturbation has length {len(delta)}, expected {size}")
    if all(v == 0 for v in delta):
        raise ZeroDelta("perturbation direction is zero")
    if bp is None:
        outcome = solve(problem)
        if outcome.status is not Status.OPTIMAL:
            raise NotOptimal(f"problem is {outcome.status.value}")
        bp = outcome.representative
    if bp.rectangular or len(bp.basis) != problem.m:
        raise RectangularBasis(
            f"basis {bp.basis} is not square for a {problem.m}-row problem"
        )
    y = basis_dual(problem, bp.basis)
    if not verify_kkt(problem, bp.x, y):
        raise NotOptimalBasic(f"basis {bp.basis} does not certify x = {bp.x}")
    return delta, bp, y


def rhs_interval(
    problem: LpProblem, bp: BasicPoint | None, delta_b: Sequence
) -> ThetaInterval:
    """Range of theta keeping the basis of ``bp`` optimal for ``b + theta*delta_b``.

    ``bp=None`` uses the representative optimal basic point.  The slope of
    the value is ``p_B^T B^{-1} delta_b``, i.e. the dual times ``delta_b``.
    """
    delta_b, bp, y = _prepare(problem, bp, delta_b, problem.m)
    Binv = invert(problem.A.columns(bp.basis))
    x_B = Binv @ problem.b
    step = Binv @ delta_b
    lo, hi = _ratio_bounds(zip(x_B, step))
    return ThetaInterval(
        lo,
        hi,
        slope=dot(y, delta_b),
        base_value=problem.objective(bp.x),
        basic_point=bp,
        degenerate=any(v == 0 for v in x_B),
        kind="rhs",
    )


def objective_interval(
    problem: LpProblem, bp: BasicPoint | None, delta_p: Sequence
) -> ThetaInterval:
    """Range of theta keeping ``bp`` optimal for ``p + theta*delta_p``.

    Each nonbasic column j contributes the dual slack
    ``y.A^j - p_j`` and its rate of change ``(dp_B)^T B^{-1} A^j - dp_j``.
    """
    delta_p, bp, y = _prepare(problem, bp, delta_p, problem.n)
    A = problem.A
    Binv = invert(A.columns(bp.basis))
    dp_B = tuple(delta_p[j] for j in bp.basis)
    w = Binv.rmul(dp_B)  # (dp_B)^T B^{-1}
    basis = set(bp.basis)
    pairs = []
    for j in range(problem.n):
        if j in basis:
            continue
        col = A.col(j)
        slack = dot(y, col) - problem.p[j]
        rate = dot(w, col) - delta_p[j]
        pairs.append((slack, rate))
    lo, hi = _ratio_bounds(pairs)
    return ThetaInterval(
        lo,
        hi,
        slope=dot(dp_B, tuple(bp.x[j] for j in bp.basis)),
        base_value=problem.objective(bp.x),
        basic_point=bp,
        degenerate=any(s == 0 for s, _ in pairs),
        kind="objective",
    )


def interval_for(problem: LpProblem, ray: PerturbationRay, bp=None) -> ThetaInterval:
    if ray.kind == "rhs":
        return rhs_interval(problem, bp, ray.delta_b)
    return objective_interval(problem, bp, ray.delta_p)


def default_grid(iv: ThetaInterval) -> list[Fraction]:
    """``{lo, lo/2, 0, hi/2, hi}`` restricted to finite values."""
    points = {Fraction(0)}
    for end in (iv.lo, iv.hi):
        if end not in (NEG_INF, POS_INF):
            points.update((end, end / 2))
    return sorted(points)


@dataclass(frozen=True)
class SampleCheck:
    theta: Fraction
    interior: bool
    status: Status
    value: Fraction | None
    expected: Fraction
    match: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "theta": format_rational(self.theta),
            "interior": self.interior,
            "status": self.status.value,
            "value": None if self.value is None else format_rational(self.value),
            "expected": format_rational(self.expected),
            "match": self.match,
        }


def verify_interval(
    problem: LpProblem,
    ray: PerturbationRay,
    iv: ThetaInterval,
    thetas: Iterable,
) -> list[SampleCheck]:
    """Re-solve the perturbed problem at each theta from scratch.

    Inside ``[lo, hi]`` the value must equal ``base + theta*slope`` exactly,
    otherwise :class:`LinearityViolation` is raised.  Outside the interval
    the comparison is only reported.
    """
    rows = []
    for theta in sorted({to_rational(t) for t in thetas}):
        outcome = solve(ray.apply(problem, theta))
        expected = iv.predicted_value(theta)
        match = outcome.status is Status.OPTIMAL and outcome.value == expected
        interior = theta in iv
        if interior and not match:
            raise LinearityViolation(theta, expected, outcome.value)
        rows.append(SampleCheck(theta, interior, outcome.status, outcome.value, expected, match))
    return rows


def persisted_rhs_point(problem: LpProblem, iv: ThetaInterval, delta_b, theta) -> Vector:
    """``(B^{-1}(b + theta*delta_b), 0)``: the basic point carried along the ray."""
    bp = iv.basic_point
    Binv = invert(problem.A.columns(bp.basis))
    rhs = tuple(b + to_rational(theta) * d for b, d in zip(problem.b, delta_b))
    x_B = Binv @ rhs
    x = [Fraction(0)] * problem.n
    for j, v in zip(bp.basis, x_B):
        x[j] = v
    return tuple(x)
