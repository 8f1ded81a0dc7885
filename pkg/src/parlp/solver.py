"""Exact solver for small standard-form LPs by basic-solution enumeration.

Feasibility is decided by whether any basic feasible point exists,
unboundedness by looking for an improving recession direction, and every
optimal basic point is returned with a dual vector that certifies it
through the KKT conditions.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Any, Sequence

from parlp.errors import CapExceeded, DimensionMismatch, SingularBasis
from parlp.linalg import (
    Matrix,
    Vector,
    columns_independent,
    dot,
    format_rational,
    invert,
    pseudo_inverse,
    rank,
    rref,
    solve_square,
    to_rational,
)
from parlp.model import LpProblem, dual_of

ENV_CAP = "PARLP_ENUM_CAP"


@dataclass(frozen=True)
class EnumerationCap:
    n: int = 20
    m: int = 12

    def check(self, problem: LpProblem) -> None:
        if problem.n > self.n or problem.m > self.m:
            raise CapExceeded(
                f"problem is {problem.m}x{problem.n}, cap is {self.m}x{self.n}"
            )


def default_cap() -> EnumerationCap:
    """The cap from ``PARLP_ENUM_CAP`` (``"n"`` or ``"n,m"``), else 20 x 12."""
    raw = os.environ.get(ENV_CAP)
    if not raw:
        return EnumerationCap()
    parts = [int(s) for s in raw.split(",")]
    if len(parts) == 1:
        return EnumerationCap(n=parts[0])
    return EnumerationCap(n=parts[0], m=parts[1])


class Status(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class BasicPoint:
    """A basic feasible point together with the basis it is read from.

    ``basis`` lists column indices (0-based) extending ``support`` to a
    maximal independent set of columns; it is square unless ``A`` is
    row-rank deficient, in which case ``rectangular`` is set.
    """

    x: Vector
    support: tuple[int, ...]
    basis: tuple[int, ...]
    y: Vector | None = None
    rectangular: bool = False

    @property
    def degenerate(self) -> bool:
        return self.rectangular or len(self.support) < len(self.basis)

    def with_dual(self, basis: tuple[int, ...], y: Vector) -> BasicPoint:
        return BasicPoint(self.x, self.support, basis, y, self.rectangular)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "x": [format_rational(v) for v in self.x],
            "support": list(self.support),
            "basis": list(self.basis),
        }
        if self.y is not None:
            out["y"] = [format_rational(v) for v in self.y]
        out["degenerate"] = self.degenerate
        return out


@dataclass(frozen=True)
class SolveOutcome:
    status: Status
    value: Fraction | None = None
    optimal_basics: tuple[BasicPoint, ...] = ()
    all_basics: tuple[BasicPoint, ...] = field(default=(), repr=False)

    @property
    def representative(self) -> BasicPoint:
        """The optimal basic point with lexicographically smallest support."""
        if self.status is not Status.OPTIMAL:
            raise ValueError(f"no optimal point: problem is {self.status.value}")
        return self.optimal_basics[0]

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"status": self.status.value}
        if self.value is not None:
            out["value"] = format_rational(self.value)
        out["optimal_basics"] = [bp.to_dict() for bp in self.optimal_basics]
        out["basic_count"] = len(self.all_basics)
        return out


def _augment(A: Matrix, rhs: Sequence[Fraction]) -> Matrix:
    return Matrix([r + (v,) for r, v in zip(A.rows, rhs)], ncols=A.n + 1)


@lru_cache(maxsize=8192)
def _basic_solutions(A: Matrix, b: Vector) -> tuple[Vector, ...]:
    """All basic feasible points of ``{x >= 0 : A x = b}``, sorted by support.

    Redundant rows are dropped first; every basic point then arises as
    ``B^{-1} b`` for some square basis B of the reduced system.
    """
    n = A.n
    a, pivots = rref(_augment(A, b))
    if n in pivots:
        return ()
    r = len(pivots)
    zero = Fraction(0)
    if r == 0:
        return ((zero,) * n,)
    A_red = Matrix([row[:n] for row in a[:r]], ncols=n)
    b_red = tuple(row[n] for row in a[:r])
    found = set()
    for J in combinations(range(n), r):
        xJ = solve_square(A_red.columns(J), b_red)
        if xJ is None or any(v < 0 for v in xJ):
            continue
        x = [zero] * n
        for j, v in zip(J, xJ):
            x[j] = v
        found.add(tuple(x))
    return tuple(sorted(found, key=lambda x: (_support(x), x)))


def _basic_solutions_by_subsets(A: Matrix, b: Vector) -> tuple[Vector, ...]:
    # Literal definition: every independent column subset J with |J| <= m,
    # x_J = B^- b accepted iff B x_J = b and x_J > 0.
    n, m = A.n, A.m
    out = []
    for size in range(0, min(m, n) + 1):
        for J in combinations(range(n), size):
            if size == 0:
                if all(v == 0 for v in b):
                    out.append((Fraction(0),) * n)
                continue
            B = A.columns(J)
            if rank(B) != size:
                continue
            xJ = pseudo_inverse(B) @ b
            if B @ xJ != tuple(b) or any(v <= 0 for v in xJ):
                continue
            x = [Fraction(0)] * n
            for j, v in zip(J, xJ):
                x[j] = v
            out.append(tuple(x))
    return tuple(sorted(set(out), key=lambda x: (_support(x), x)))


def _support(x: Sequence[Fraction]) -> tuple[int, ...]:
    return tuple(j for j, v in enumerate(x) if v != 0)


def extend_basis(A: Matrix, support: Sequence[int]) -> tuple[int, ...]:
    """Greedily add the lowest-index columns keeping independence, up to rank(A)."""
    chosen = list(support)
    target = rank(A)
    for j in range(A.n):
        if len(chosen) == target:
            break
        if j in chosen:
            continue
        if columns_independent(A, chosen + [j]):
            chosen.append(j)
    return tuple(sorted(chosen))


def basis_extensions(A: Matrix, support: Sequence[int]):
    """Every independent extension of ``support`` to rank(A) columns.

    Yields sorted index tuples; the first one is the greedy extension.
    """
    support = tuple(support)
    rest = [j for j in range(A.n) if j not in support]
    need = rank(A) - len(support)
    for extra in combinations(rest, need):
        cols = tuple(sorted(support + extra))
        if columns_independent(A, cols):
            yield cols


def enumerate_basic_feasible(
    problem: LpProblem, cap: EnumerationCap | None = None, method: str = "bases"
) -> list[BasicPoint]:
    """The basic feasible points of the problem, ordered by support.

    ``method="subsets"`` runs the literal subset-by-subset construction
    instead; it returns the same set and is kept as a cross-check.
    """
    (cap or default_cap()).check(problem)
    if method == "bases":
        points = _basic_solutions(problem.A, problem.b)
    elif method == "subsets":
        points = _basic_solutions_by_subsets(problem.A, problem.b)
    else:
        raise ValueError(f"unknown method {method!r}")
    r = rank(problem.A)
    rectangular = r < problem.m
    return [
        BasicPoint(x, _support(x), extend_basis(problem.A, _support(x)), None, rectangular)
        for x in points
    ]


def _scaled_to_unit_max(d: Vector) -> Vector:
    top = max(d)
    return tuple(v / top for v in d)


@lru_cache(maxsize=4096)
def _cone_section(A: Matrix) -> tuple[Vector, ...]:
    """Vertices of ``{d >= 0 : A d = 0, sum(d) = 1}``."""
    ones = (Fraction(1),) * A.n
    aux = Matrix(A.rows + (ones,), ncols=A.n)
    return _basic_solutions(aux, (Fraction(0),) * A.m + (Fraction(1),))


def improving_direction(problem: LpProblem, objective=None) -> Vector | None:
    """A recession direction with positive objective, or None.

    Searches the section ``sum(d) = 1`` of the recession cone, so the
    decision is exact; the witness is rescaled to have largest entry 1.
    """
    c = problem.p if objective is None else tuple(to_rational(v) for v in objective)
    best, arg = Fraction(0), None
    for d in _cone_section(problem.A):
        val = dot(c, d)
        if val > best:
            best, arg = val, d
    return None if arg is None else _scaled_to_unit_max(arg)


def recession_direction(problem: LpProblem) -> Vector | None:
    """Any nonzero ``d >= 0`` with ``A d = 0`` (rescaled), or None."""
    section = _cone_section(problem.A)
    return _scaled_to_unit_max(section[0]) if section else None


def optimal_face_direction(problem: LpProblem) -> Vector | None:
    """A nonzero ``d >= 0`` with ``A d = 0`` and ``p.d = 0``, or None.

    For an optimal problem these are exactly the directions along which the
    optimal set is unbounded.
    """
    A = Matrix(problem.A.rows + (problem.p,), ncols=problem.n)
    section = _cone_section(A)
    return _scaled_to_unit_max(section[0]) if section else None


def recession_extent(
    problem: LpProblem, objective, cap: EnumerationCap | None = None
) -> Fraction:
    """``max objective.d  s.t.  A d = 0, 0 <= d <= 1``.

    Solved by putting the box in standard form (``d + s = 1``) and
    enumerating the basic points of that bounded auxiliary problem.
    Positive exactly when some recession direction improves the objective.
    """
    c = tuple(to_rational(v) for v in objective)
    m, n = problem.m, problem.n
    if len(c) != n:
        raise DimensionMismatch(f"objective has length {len(c)}, expected {n}")
    zero, one = Fraction(0), Fraction(1)
    rows = [r + (zero,) * n for r in problem.A.rows]
    for j in range(n):
        rows.append(tuple(one if k in (j, n + j) else zero for k in range(2 * n)))
    aux = LpProblem(c + (zero,) * n, Matrix(rows, ncols=2 * n), (zero,) * m + (one,) * n)
    points = enumerate_basic_feasible(aux, cap)
    return max(aux.objective(bp.x) for bp in points)


def basis_dual(problem: LpProblem, basis: Sequence[int]) -> Vector:
    """``y^T = p_B^T B^{-1}`` for the given basis columns.

    A rectangular basis (rank-deficient A) uses the pseudo-inverse instead.
    """
    basis = tuple(basis)
    if not basis:
        return (Fraction(0),) * problem.m
    B = problem.A.columns(basis)
    if rank(B) != len(basis):
        raise SingularBasis(f"basis columns {basis} are dependent")
    p_B = tuple(problem.p[j] for j in basis)
    inv = invert(B) if B.m == B.n else pseudo_inverse(B)
    return inv.rmul(p_B)


def dual_from_basis(problem: LpProblem, bp: BasicPoint) -> Vector:
    return basis_dual(problem, bp.basis)


def verify_kkt(problem: LpProblem, x, y) -> bool:
    """``A x = b, x >= 0, y^T A >= p^T`` and ``(y^T A - p^T) x = 0``, exactly."""
    x = tuple(to_rational(v) for v in x)
    y = tuple(to_rational(v) for v in y)
    if len(x) != problem.n or len(y) != problem.m:
        raise DimensionMismatch(
            f"x has length {len(x)} (want {problem.n}), y has {len(y)} (want {problem.m})"
        )
    if not problem.is_feasible(x):
        return False
    slack = dual_of(problem).slacks(y)
    return all(s >= 0 for s in slack) and dot(slack, x) == 0


def certify(problem: LpProblem, bp: BasicPoint) -> BasicPoint | None:
    """Attach a KKT dual to ``bp`` from the first basis extension that gives one."""
    for basis in basis_extensions(problem.A, bp.support):
        y = basis_dual(problem, basis)
        if verify_kkt(problem, bp.x, y):
            return bp.with_dual(basis, y)
    return None


def solve(problem: LpProblem, cap: EnumerationCap | None = None) -> SolveOutcome:
    basics = enumerate_basic_feasible(problem, cap)
    if not basics:
        return SolveOutcome(Status.INFEASIBLE)
    if improving_direction(problem) is not None:
        return SolveOutcome(Status.UNBOUNDED, all_basics=tuple(basics))
    value = max(problem.objective(bp.x) for bp in basics)
    optimal = []
    for bp in basics:
        if problem.objective(bp.x) != value:
            continue
        certified = certify(problem, bp)
        if certified is None:
            raise AssertionError(f"optimal basic point {bp.x} has no KKT basis")
        optimal.append(certified)
    return SolveOutcome(Status.OPTIMAL, value, tuple(optimal), tuple(basics))
