"""Problem, dual and convergent-family data model, plus JSON (de)serialization.

A problem is the triple ``(p, A, b)`` of ``max p.x s.t. A x = b, x >= 0``.
A family is ``limit + (1/N) * delta``; instantiating it at N gives a
sequence that converges to the limit as N grows.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from parlp.errors import DimensionMismatch, SchemaError
from parlp.linalg import (
    Matrix,
    Vector,
    dot,
    format_rational,
    norm_squared,
    to_rational,
    vadd,
    vscale,
)


def _vector_field(doc: dict, key: str) -> Vector:
    if key not in doc:
        raise SchemaError(f"missing field {key!r}")
    value = doc[key]
    if not isinstance(value, list):
        raise SchemaError(f"field {key!r} must be a list")
    return tuple(to_rational(v) for v in value)


def _matrix_field(doc: dict, key: str) -> Matrix:
    if key not in doc:
        raise SchemaError(f"missing field {key!r}")
    value = doc[key]
    if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
        raise SchemaError(f"field {key!r} must be a list of rows")
    if value and any(len(r) != len(value[0]) for r in value):
        raise SchemaError(f"ragged rows in {key!r}")
    return Matrix([[to_rational(x) for x in r] for r in value])


def _vec_out(v) -> list[str]:
    return [format_rational(x) for x in v]


@dataclass(frozen=True)
class LpProblem:
    """``max p.x  s.t.  A x = b, x >= 0`` with exact data."""

    p: Vector
    A: Matrix
    b: Vector

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(to_rational(x) for x in self.p))
        object.__setattr__(self, "b", tuple(to_rational(x) for x in self.b))
        if not isinstance(self.A, Matrix):
            object.__setattr__(self, "A", Matrix(self.A))
        m, n = self.A.shape
        if m < 1 or n < 1:
            raise DimensionMismatch(f"need m, n >= 1, got A of shape {self.A.shape}")
        if len(self.p) != n:
            raise DimensionMismatch(f"|p| = {len(self.p)} but A has {n} columns")
        if len(self.b) != m:
            raise DimensionMismatch(f"|b| = {len(self.b)} but A has {m} rows")

    @property
    def m(self) -> int:
        return self.A.m

    @property
    def n(self) -> int:
        return self.A.n

    def objective(self, x) -> Fraction:
        return dot(self.p, x)

    def is_feasible(self, x) -> bool:
        return all(v >= 0 for v in x) and self.A @ x == self.b

    def with_b(self, b) -> LpProblem:
        return LpProblem(self.p, self.A, b)

    def with_p(self, p) -> LpProblem:
        return LpProblem(p, self.A, self.b)

    def to_dict(self) -> dict[str, Any]:
        return {"p": _vec_out(self.p), "A": self.A.to_lists(), "b": _vec_out(self.b)}

    @classmethod
    def from_dict(cls, doc: Any) -> LpProblem:
        if not isinstance(doc, dict):
            raise SchemaError("problem document must be a JSON object")
        p = _vector_field(doc, "p")
        A = _matrix_field(doc, "A")
        b = _vector_field(doc, "b")
        try:
            return cls(p, A, b)
        except DimensionMismatch as exc:
            raise SchemaError(str(exc)) from exc


def parse_problem(text: str) -> LpProblem:
    """Parse the problem JSON schema ``{"p": [...], "A": [[...]...], "b": [...]}``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return LpProblem.from_dict(doc)


def serialize_problem(problem: LpProblem) -> str:
    return json.dumps(problem.to_dict())


@dataclass(frozen=True)
class DualProblem:
    """``min y.b  s.t.  y^T A >= p^T``, y free; a view over its primal."""

    primal: LpProblem

    @property
    def objective_coefficients(self) -> Vector:
        return self.primal.b

    def constraints(self) -> list[tuple[Vector, Fraction]]:
        """One ``(A^j, p_j)`` pair per primal column, read as ``y.A^j >= p_j``."""
        A, p = self.primal.A, self.primal.p
        return [(A.col(j), p[j]) for j in range(A.n)]

    def slacks(self, y) -> Vector:
        """``y^T A - p^T``; dual feasibility means all entries are >= 0."""
        yA = self.primal.A.rmul(tuple(y))
        return tuple(a - c for a, c in zip(yA, self.primal.p))

    def is_feasible(self, y) -> bool:
        return all(s >= 0 for s in self.slacks(y))

    def value(self, y) -> Fraction:
        return dot(y, self.primal.b)


def dual_of(problem: LpProblem) -> DualProblem:
    return DualProblem(problem)


@dataclass(frozen=True)
class ProblemFamily:
    """The sequence ``limit + (1/N) * (delta_p, delta_A, delta_b)``, N = 1, 2, ..."""

    limit: LpProblem
    delta_p: Vector
    delta_A: Matrix
    delta_b: Vector

    def __post_init__(self):
        object.__setattr__(self, "delta_p", tuple(to_rational(x) for x in self.delta_p))
        object.__setattr__(self, "delta_b", tuple(to_rational(x) for x in self.delta_b))
        if not isinstance(self.delta_A, Matrix):
            object.__setattr__(self, "delta_A", Matrix(self.delta_A))
        lim = self.limit
        if (
            len(self.delta_p) != lim.n
            or len(self.delta_b) != lim.m
            or self.delta_A.shape != lim.A.shape
        ):
            raise DimensionMismatch("family deltas do not match the limit problem")

    @classmethod
    def constant(cls, limit: LpProblem) -> ProblemFamily:
        return cls(limit, (0,) * limit.n, Matrix.zeros(limit.m, limit.n), (0,) * limit.m)

    def at(self, t) -> LpProblem:
        """The member with step ``t`` in place of 1/N (``t = 0`` is the limit)."""
        t = to_rational(t)
        lim = self.limit
        return LpProblem(
            vadd(lim.p, vscale(t, self.delta_p)),
            lim.A + self.delta_A.scale(t),
            vadd(lim.b, vscale(t, self.delta_b)),
        )

    def residuals_squared(self, N: int) -> tuple[Fraction, Fraction, Fraction]:
        """Squared distances ``(|p(N)-p|^2, |A(N)-A|^2, |b(N)-b|^2)``."""
        xi = instantiate(self, N)
        lim = self.limit
        return (
            norm_squared(tuple(a - c for a, c in zip(xi.p, lim.p))),
            (xi.A - lim.A).norm_squared(),
            norm_squared(tuple(a - c for a, c in zip(xi.b, lim.b))),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "limit": self.limit.to_dict(),
            "delta_p": _vec_out(self.delta_p),
            "delta_A": self.delta_A.to_lists(),
            "delta_b": _vec_out(self.delta_b),
        }

    @classmethod
    def from_dict(cls, doc: Any) -> ProblemFamily:
        if not isinstance(doc, dict):
            raise SchemaError("family document must be a JSON object")
        if "limit" not in doc:
            raise SchemaError("missing field 'limit'")
        limit = LpProblem.from_dict(doc["limit"])
        # absent deltas mean that component does not move
        dp = _vector_field(doc, "delta_p") if "delta_p" in doc else (0,) * limit.n
        dA = (
            _matrix_field(doc, "delta_A")
            if "delta_A" in doc
            else Matrix.zeros(limit.m, limit.n)
        )
        db = _vector_field(doc, "delta_b") if "delta_b" in doc else (0,) * limit.m
        try:
            return cls(limit, dp, dA, db)
        except DimensionMismatch as exc:
            raise SchemaError(str(exc)) from exc


def instantiate(family: ProblemFamily, N: int) -> LpProblem:
    """Member N of the family, exactly."""
    if isinstance(N, bool) or not isinstance(N, int) or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    return family.at(Fraction(1, N))


def parse_family(text: str) -> ProblemFamily:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    return ProblemFamily.from_dict(doc)


def serialize_family(family: ProblemFamily) -> str:
    return json.dumps(family.to_dict())


@dataclass(frozen=True)
class PerturbationRay:
    """Exactly one of ``delta_b`` (right-hand side) or ``delta_p`` (objective)."""

    delta_b: Vector | None = None
    delta_p: Vector | None = None

    def __post_init__(self):
        if (self.delta_b is None) == (self.delta_p is None):
            raise ValueError("give exactly one of delta_b and delta_p")
        if self.delta_b is not None:
            object.__setattr__(self, "delta_b", tuple(to_rational(x) for x in self.delta_b))
        else:
            object.__setattr__(self, "delta_p", tuple(to_rational(x) for x in self.delta_p))

    @property
    def kind(self) -> str:
        return "rhs" if self.delta_b is not None else "objective"

    @property
    def direction(self) -> Vector:
        return self.delta_b if self.delta_b is not None else self.delta_p

    def apply(self, problem: LpProblem, theta) -> LpProblem:
        theta = to_rational(theta)
        if self.delta_b is not None:
            if len(self.delta_b) != problem.m:
                raise DimensionMismatch("delta_b length differs from m")
            return problem.with_b(vadd(problem.b, vscale(theta, self.delta_b)))
        if len(self.delta_p) != problem.n:
            raise DimensionMismatch("delta_p length differs from n")
        return problem.with_p(vadd(problem.p, vscale(theta, self.delta_p)))


def parse_vector(text: str) -> Vector:
    """A bare JSON array of rationals, as used for perturbation files."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, list):
        raise SchemaError("expected a JSON array of rationals")
    return tuple(to_rational(v) for v in doc)
