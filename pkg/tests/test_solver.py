import itertools
import random
from fractions import Fraction as F

import pytest
import sympy
from scipy.optimize import linprog

from generators import random_problem
from parlp import solver
from parlp.errors import CapExceeded, DimensionMismatch, SingularBasis
from parlp.fixtures import example1_family, tie_problem, two_row_problem, two_var_problem
from parlp.linalg import Matrix, dot
from parlp.model import LpProblem, dual_of, instantiate
from parlp.solver import (
    ENV_CAP,
    BasicPoint,
    EnumerationCap,
    Status,
    basis_dual,
    default_cap,
    dual_from_basis,
    enumerate_basic_feasible,
    recession_extent,
    solve,
    verify_kkt,
)


def xs(points):
    return {bp.x for bp in points}


def sympy_basic_points(problem):
    """Independent oracle: every independent column subset solved with sympy."""
    A = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in r] for r in problem.A.rows])
    b = sympy.Matrix([sympy.Rational(v.numerator, v.denominator) for v in problem.b])
    found = set()
    for k in range(0, min(problem.m, problem.n) + 1):
        for J in itertools.combinations(range(problem.n), k):
            if k == 0:
                if all(v == 0 for v in b):
                    found.add((F(0),) * problem.n)
                continue
            AJ = A[:, list(J)]
            if AJ.rank() < k:
                continue
            try:
                sol, params = AJ.gauss_jordan_solve(b)
            except ValueError:
                continue
            assert params.shape[0] == 0
            vals = [F(int(v.p), int(v.q)) for v in sol]
            if all(v > 0 for v in vals):
                x = [F(0)] * problem.n
                for j, v in zip(J, vals):
                    x[j] = v
                found.add(tuple(x))
    return found


class TestEnumerate:
    def test_example1_first_member(self):
        pts = enumerate_basic_feasible(LpProblem((1, 0), [[1, 1]], (1,)))
        assert xs(pts) == {(1, 0), (0, 1)}

    def test_example1_limit_excludes_zero_column(self):
        pts = enumerate_basic_feasible(example1_family().limit)
        assert xs(pts) == {(0, 1)}

    def test_infeasible(self):
        assert enumerate_basic_feasible(LpProblem((1,), [[1]], (-1,))) == []

    def test_points_are_basic_feasible(self):
        rng = random.Random(31)
        for _ in range(100):
            xi = random_problem(rng)
            for bp in enumerate_basic_feasible(xi):
                assert xi.is_feasible(bp.x)
                assert bp.support == tuple(j for j, v in enumerate(bp.x) if v > 0)
                assert set(bp.support) <= set(bp.basis)

    def test_methods_agree_with_sympy_oracle(self):
        rng = random.Random(32)
        for _ in range(120):
            xi = random_problem(rng, m_max=3, n_max=5)
            fast = enumerate_basic_feasible(xi)
            literal = enumerate_basic_feasible(xi, method="subsets")
            assert [bp.x for bp in fast] == [bp.x for bp in literal]
            assert xs(fast) == sympy_basic_points(xi)
            assert len(fast) == len(xs(fast))

    def test_order_is_by_support(self):
        rng = random.Random(33)
        for _ in range(50):
            pts = enumerate_basic_feasible(random_problem(rng))
            keys = [bp.support for bp in pts]
            assert keys == sorted(keys)

    def test_cap(self):
        xi = LpProblem((0,) * 21, [[1] * 21], (1,))
        with pytest.raises(CapExceeded):
            enumerate_basic_feasible(xi)
        assert len(enumerate_basic_feasible(xi, EnumerationCap(n=21))) == 21

    def test_cap_from_environment(self, monkeypatch):
        monkeypatch.setenv(ENV_CAP, "3")
        assert default_cap().n == 3
        with pytest.raises(CapExceeded):
            solve(LpProblem((0,) * 4, [[1] * 4], (1,)))
        monkeypatch.setenv(ENV_CAP, "5,1")
        with pytest.raises(CapExceeded):
            solve(LpProblem((0,), [[1], [1]], (1, 1)))


class TestRecessionExtent:
    def test_bounded(self):
        assert recession_extent(LpProblem((0, 0), [[1, 1]], (1,)), (1, 1)) == 0

    def test_difference_constraint(self):
        assert recession_extent(LpProblem((0, 0), [[1, -1]], (1,)), (1, 1)) == 2

    def test_example1_limit(self):
        assert recession_extent(example1_family().limit, (1, 0)) == 1

    def test_sign_matches_unboundedness(self):
        rng = random.Random(34)
        for _ in range(60):
            xi = random_problem(rng, m_max=2, n_max=4)
            out = solve(xi)
            positive = recession_extent(xi, xi.p) > 0
            assert positive == (out.status is Status.UNBOUNDED)

    def test_wrong_length(self):
        with pytest.raises(DimensionMismatch):
            recession_extent(two_var_problem(), (1,))


class TestSolve:
    @pytest.mark.parametrize("N", [1, 2, 5, 37])
    def test_example1_member(self, N):
        out = solve(instantiate(example1_family(), N))
        assert out.status is Status.OPTIMAL
        assert out.value == 1
        assert xs(out.optimal_basics) == {(N, 0)}

    def test_example1_limit(self):
        out = solve(example1_family().limit)
        assert out.status is Status.OPTIMAL
        assert out.value == 0
        assert xs(out.optimal_basics) == {(0, 1)}

    def test_unbounded(self):
        out = solve(LpProblem((1,), [[0]], (0,)))
        assert out.status is Status.UNBOUNDED
        assert out.value is None and out.optimal_basics == ()

    def test_infeasible(self):
        out = solve(LpProblem((1,), [[1]], (-1,)))
        assert out.status is Status.INFEASIBLE
        assert out.to_dict() == {"status": "infeasible", "optimal_basics": [], "basic_count": 0}

    def test_tie_returns_both_vertices(self):
        out = solve(tie_problem())
        assert out.value == 1
        assert [bp.x for bp in out.optimal_basics] == [(1, 0), (0, 1)]

    def test_two_row(self):
        out = solve(two_row_problem())
        assert out.value == 12
        assert xs(out.optimal_basics) == {(4, 0, 0, 2)}

    def test_optimal_members_attain_value_with_certificate(self):
        rng = random.Random(35)
        for _ in range(150):
            xi = random_problem(rng)
            out = solve(xi)
            if out.status is not Status.OPTIMAL:
                continue
            for bp in out.optimal_basics:
                assert xi.objective(bp.x) == out.value
                assert verify_kkt(xi, bp.x, bp.y)
                assert dot(bp.y, xi.b) == out.value

    def test_against_scipy_float_oracle(self):
        rng = random.Random(36)
        for _ in range(150):
            xi = random_problem(rng)
            out = solve(xi)
            A = [[float(v) for v in r] for r in xi.A.rows]
            res = linprog(
                [-float(v) for v in xi.p],
                A_eq=A,
                b_eq=[float(v) for v in xi.b],
                bounds=[(0, None)] * xi.n,
                method="highs",
            )
            expected = {0: Status.OPTIMAL, 2: Status.INFEASIBLE, 3: Status.UNBOUNDED}[res.status]
            assert out.status is expected
            if expected is Status.OPTIMAL:
                assert abs(float(out.value) + res.fun) < 1e-7

    def test_convex_combinations_never_beat_value(self):
        rng = random.Random(37)
        for _ in range(80):
            xi = random_problem(rng)
            out = solve(xi)
            if out.status is not Status.OPTIMAL:
                continue
            pts = [bp.x for bp in out.all_basics]
            for _ in range(5):
                w = [F(rng.randint(0, 4)) for _ in pts]
                if sum(w) == 0:
                    continue
                z = tuple(sum(wi * p[j] for wi, p in zip(w, pts)) / sum(w) for j in range(xi.n))
                assert xi.is_feasible(z)
                assert xi.objective(z) <= out.value

    def test_deterministic(self, fresh_caches):
        rng = random.Random(38)
        problems = [random_problem(rng) for _ in range(40)]
        first = [solve(xi).to_dict() for xi in problems]
        solver._basic_solutions.cache_clear()
        solver._cone_section.cache_clear()
        assert [solve(xi).to_dict() for xi in problems] == first

    def test_json_shape(self):
        doc = solve(two_var_problem()).to_dict()
        assert doc == {
            "status": "optimal",
            "value": "2",
            "optimal_basics": [
                {"x": ["1", "0"], "support": [0], "basis": [0], "y": ["2"], "degenerate": False}
            ],
            "basic_count": 2,
        }


class TestDuals:
    def test_two_var(self):
        bp = solve(two_var_problem()).representative
        assert dual_from_basis(two_var_problem(), bp) == (2,)

    @pytest.mark.parametrize("N", [1, 3, 10])
    def test_example1_member(self, N):
        xi = instantiate(example1_family(), N)
        assert dual_from_basis(xi, solve(xi).representative) == (1,)

    def test_identity_constraints(self):
        xi = LpProblem((0, 0, 0), Matrix.identity(3), (1, 2, 3))
        assert dual_from_basis(xi, solve(xi).representative) == (0, 0, 0)

    def test_singular_basis(self):
        xi = LpProblem((1, 1), [[1, 2], [2, 4]], (1, 2))
        bp = BasicPoint((1, 0), (0,), (0, 1))
        with pytest.raises(SingularBasis):
            dual_from_basis(xi, bp)

    def test_rank_deficient_problem_uses_pseudo_inverse(self):
        # duplicated row: only one column fits in a basis
        xi = LpProblem((2, 1), [[1, 1], [1, 1]], (1, 1))
        bp = solve(xi).representative
        assert bp.degenerate and bp.basis == (0,)
        assert bp.y == (1, 1)
        assert verify_kkt(xi, bp.x, bp.y)

    def test_degenerate_vertex_gets_certifying_basis(self):
        # x = (0, 0, 1) is optimal but the greedy extension (0, 2) gives a bad dual
        xi = LpProblem((1, 3, 0), [[1, 1, 0], [0, 0, 1]], (0, 1))
        out = solve(xi)
        bp = out.representative
        assert bp.x == (0, 0, 1)
        assert verify_kkt(xi, bp.x, bp.y)


class TestVerifyKkt:
    def test_example1_first_member(self):
        xi = instantiate(example1_family(), 1)
        assert verify_kkt(xi, (1, 0), (1,))
        assert not verify_kkt(xi, (0, 1), (1,))

    def test_definition(self):
        xi = two_row_problem()
        y = (F(5, 2), F(1, 2))
        # y^T A = (3, 4, 5/2, 1/2) >= p with equality only on column 0
        assert dual_of(xi).is_feasible(y)
        assert not verify_kkt(xi, (4, 0, 0, 2), y)
        assert verify_kkt(xi, (4, 0, 0, 2), (3, 0))

    def test_infeasible_x(self):
        assert not verify_kkt(two_var_problem(), (2, 0), (2,))
        assert not verify_kkt(two_var_problem(), (2, -1), (2,))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            verify_kkt(two_var_problem(), (1, 0, 0), (2,))
        with pytest.raises(DimensionMismatch):
            verify_kkt(two_var_problem(), (1, 0), (2, 0))


def test_weak_duality_cross_pairings():
    rng = random.Random(39)
    for _ in range(80):
        xi = random_problem(rng)
        out = solve(xi)
        if out.status is not Status.OPTIMAL:
            continue
        ys = [bp.y for bp in out.optimal_basics]
        for bp in out.all_basics:
            for y in ys:
                assert xi.objective(bp.x) <= dot(y, xi.b)


def test_basis_dual_empty_basis():
    xi = LpProblem((0,), [[1]], (0,))
    assert basis_dual(xi, ()) == (0,)
