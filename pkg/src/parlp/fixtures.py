"""Bundled problems and convergent families used by the probes, CLI and tests.

Each family records which continuity results its limit is meant to
exercise.  The tags are claims to be checked against :mod:`parlp.classify`,
not inputs to any computation:

``usc_bounded``  bounded feasible set at the limit (S upper semicontinuous)
``value_kkt_bounded``  bounded KKT selections along the sample (V continuous)
``value_regular``  regular limit (V continuous)
``value_fixed_data``  A and p fixed, nondegenerate limit (V continuous)
``value_usc``  bounded optimal selections and usc S (V continuous)
``lsc_singleton``  bounded optimal selections, usc S, singleton limit (S lsc)
``lsc_singleton_regular`` singleton-solvable and regular limit (S lsc)
``lsc_strongly_regular`` bounded and strongly regular limit (S lsc at every vertex)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from parlp.linalg import Matrix
from parlp.model import LpProblem, ProblemFamily

F = Fraction


@dataclass(frozen=True)
class NamedFamily:
    name: str
    family: ProblemFamily
    hypotheses: tuple[str, ...]
    note: str = ""


def example1_family() -> ProblemFamily:
    """``max (1/N) x1  s.t.  (1/N) x1 + x2 = 1``; the limit has p = 0, A = (0 | 1)."""
    limit = LpProblem((0, 0), [[0, 1]], (1,))
    return ProblemFamily(limit, (1, 0), [[1, 0]], (0,))


def two_var_problem() -> LpProblem:
    """``max 2 x1 + x2  s.t.  x1 + x2 = 1``: unique, nondegenerate optimum."""
    return LpProblem((2, 1), [[1, 1]], (1,))


def tie_problem() -> LpProblem:
    """``max x1 + x2  s.t.  x1 + x2 = 1``: the whole segment is optimal."""
    return LpProblem((1, 1), [[1, 1]], (1,))


def two_row_problem() -> LpProblem:
    """``max 3x1 + 2x2  s.t.  x1 + x2 + x3 = 4, x1 + 3x2 + x4 = 6``.

    Bounded feasible set, unique optimum (4, 0, 0, 2) with value 12.
    """
    return LpProblem(
        (3, 2, 0, 0), [[1, 1, 1, 0], [1, 3, 0, 1]], (4, 6)
    )


def bundled_families() -> list[NamedFamily]:
    two_row = two_row_problem()
    return [
        NamedFamily(
            "example1",
            example1_family(),
            (),
            "value jumps from 1 to 0 at the limit; no continuity result applies",
        ),
        NamedFamily(
            "rhs_only",
            ProblemFamily(two_var_problem(), (0, 0), [[0, 0]], (1,)),
            ("usc_bounded", "value_kkt_bounded", "value_regular", "value_fixed_data", "value_usc", "lsc_singleton", "lsc_singleton_regular", "lsc_strongly_regular"),
            "V(N) = 2 + 2/N",
        ),
        NamedFamily(
            "all_vary",
            ProblemFamily(two_var_problem(), (1, -1), [[1, 2]], (1,)),
            ("usc_bounded", "value_kkt_bounded", "value_regular", "value_usc", "lsc_singleton", "lsc_singleton_regular", "lsc_strongly_regular"),
            "p, A and b all move; V(N) = 2 + 1/N",
        ),
        NamedFamily(
            "two_row_matrix",
            ProblemFamily(
                two_row, (0, 1, 0, 0), [[0, 1, 0, 0], [1, 0, 0, 0]], (1, -1)
            ),
            ("usc_bounded", "value_kkt_bounded", "value_regular", "value_usc", "lsc_singleton", "lsc_singleton_regular", "lsc_strongly_regular"),
            "bounded polytope with a moving constraint matrix",
        ),
        NamedFamily(
            "two_row_rhs",
            ProblemFamily(two_row, (0, 0, 0, 0), Matrix.zeros(2, 4), (2, 1)),
            ("usc_bounded", "value_kkt_bounded", "value_regular", "value_fixed_data", "value_usc", "lsc_singleton", "lsc_singleton_regular", "lsc_strongly_regular"),
            "fixed A and p, moving right-hand side",
        ),
        NamedFamily(
            "tie_objective",
            ProblemFamily(tie_problem(), (1, 0), [[0, 0]], (0,)),
            ("usc_bounded", "value_kkt_bounded", "value_usc"),
            "limit not regular: V still converges but vertex (0,1) is not approached",
        ),
    ]


def concavity_fixtures():
    """``(p, A, [(b1, b2, t), ...])`` groups with known concavity behaviour.

    The ``min_of_rhs`` group has ``V(b) = min(b1, b2)`` and yields a strict
    inequality at ``b1 = (1, 3), b2 = (3, 1), t = 1/2``.
    """
    return {
        "two_var": (
            (2, 1),
            Matrix([[1, 1]]),
            [((1,), (3,), F(1, 2)), ((2,), (2,), F(1, 3))],
        ),
        "min_of_rhs": (
            (1, 0, 0),
            Matrix([[1, 1, 0], [1, 0, 1]]),
            [((1, 3), (3, 1), F(1, 2)), ((0, 2), (5, 1), F(1, 4)), ((2, 2), (2, 2), F(2, 3))],
        ),
    }
