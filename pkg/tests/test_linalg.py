import random
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from generators import random_full_column_rank, random_matrix
from parlp.errors import DependentColumns, SingularMatrix
from parlp.linalg import (
    Matrix,
    columns_independent,
    det,
    format_rational,
    invert,
    norm_squared,
    pseudo_inverse,
    rank,
    to_rational,
)


def echelon_rank(rows):
    """Independent oracle: plain Fraction row echelon, counting pivots."""
    a = [[F(x) for x in r] for r in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    r = 0
    for c in range(n):
        pivot = None
        for i in range(r, m):
            if a[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        for i in range(r + 1, m):
            f = a[i][c] / a[r][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def to_sympy(M):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in M.rows])


def from_sympy(S):
    return Matrix([[F(int(x.p), int(x.q)) for x in S.row(i)] for i in range(S.rows)])


matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(
            st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=n, max_size=n),
            min_size=m,
            max_size=m,
        )
    )
).map(Matrix)


class TestRational:
    def test_parse_forms(self):
        assert to_rational("-3/4") == F(-3, 4)
        assert to_rational("5") == F(5)
        assert to_rational("6/8") == F(3, 4)
        assert to_rational(7) == F(7)

    @pytest.mark.parametrize("bad", ["1/0", "abc", "1.5", "", "1//2", 1.5, True, None])
    def test_malformed(self, bad):
        with pytest.raises(ValueError):
            to_rational(bad)

    def test_canonical_format(self):
        assert format_rational(F(-6, 8)) == "-3/4"
        assert format_rational(F(10, 2)) == "5"
        assert format_rational(F(0, 3)) == "0"


class TestRank:
    def test_identity(self):
        assert rank(Matrix.identity(2)) == 2

    def test_proportional_columns(self):
        assert rank(Matrix([[1, 2], [2, 4]])) == 1

    def test_random_against_echelon_oracle(self):
        rng = random.Random(11)
        for _ in range(200):
            M = random_matrix(rng, 3, 4, -2, 2)
            assert rank(M) == echelon_rank(M.rows)

    def test_rational_entries_against_sympy(self):
        rng = random.Random(12)
        for _ in range(60):
            m, n = rng.randint(1, 5), rng.randint(1, 5)
            M = Matrix([[F(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(n)] for _ in range(m)])
            assert rank(M) == to_sympy(M).rank()

    @settings(max_examples=150, deadline=None)
    @given(matrices)
    def test_rank_of_transpose(self, M):
        assert rank(M) == rank(M.T)

    @settings(max_examples=100, deadline=None)
    @given(matrices)
    def test_transpose_involution(self, M):
        assert M.T.T == M


class TestColumnsIndependent:
    def test_empty_set(self):
        assert columns_independent(Matrix([[0, 1]]), [])

    def test_zero_column(self):
        assert not columns_independent(Matrix([[0, 1]]), [0])

    def test_example1_first_member(self):
        assert not columns_independent(Matrix([[1, 1]]), [0, 1])


class TestInvert:
    def test_identity(self):
        assert invert(Matrix.identity(3)) == Matrix.identity(3)

    def test_diagonal(self):
        assert invert(Matrix([[2, 0], [0, 4]])) == Matrix([["1/2", 0], [0, "1/4"]])

    def test_two_by_two(self):
        B = Matrix([[1, 1], [1, 2]])
        inv = invert(B)
        assert inv == Matrix([[2, -1], [-1, 1]])
        assert B @ inv == Matrix.identity(2)

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            invert(Matrix([[1, 2], [2, 4]]))

    def test_random_against_sympy(self):
        rng = random.Random(13)
        done = 0
        while done < 50:
            k = rng.randint(1, 4)
            B = random_matrix(rng, k, k)
            if to_sympy(B).det() == 0:
                continue
            inv = invert(B)
            assert inv == from_sympy(to_sympy(B).inv())
            assert inv @ B == Matrix.identity(k) == B @ inv
            done += 1

    def test_det_against_sympy(self):
        rng = random.Random(14)
        for _ in range(80):
            k = rng.randint(1, 4)
            B = Matrix([[F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(k)] for _ in range(k)])
            d = to_sympy(B).det()
            assert det(B) == F(int(sympy.fraction(d)[0]), int(sympy.fraction(d)[1]))


class TestPseudoInverse:
    def test_identity(self):
        assert pseudo_inverse(Matrix.identity(2)) == Matrix.identity(2)

    def test_column_of_ones(self):
        B = Matrix([[1], [1]])
        P = pseudo_inverse(B)
        assert P == Matrix([["1/2", "1/2"]])
        assert P @ B == Matrix.identity(1)

    def test_square_equals_inverse(self):
        B = Matrix([[1, 1], [1, 2]])
        assert pseudo_inverse(B) == invert(B)

    def test_dependent_columns(self):
        with pytest.raises(DependentColumns):
            pseudo_inverse(Matrix([[1, 2], [1, 2], [0, 0]]))

    def test_matches_sympy_moore_penrose(self):
        # for full column rank the Moore-Penrose inverse is (B^T B)^{-1} B^T
        rng = random.Random(15)
        for _ in range(40):
            B = random_full_column_rank(rng, 5, 3)
            assert pseudo_inverse(B) == from_sympy(to_sympy(B).pinv())


class TestNorms:
    def test_zero(self):
        assert norm_squared((F(0),) * 3) == 0

    def test_three_four(self):
        assert norm_squared((F(3), F(4))) == 25

    def test_fractions(self):
        assert norm_squared((F(1, 2), F(1, 3))) == F(13, 36)

    @settings(max_examples=100, deadline=None)
    @given(matrices)
    def test_matrix_norm_is_sum_of_column_norms(self, M):
        assert M.norm_squared() == sum(norm_squared(M.col(j)) for j in range(M.n))
        assert M.norm_squared() == sum(x * x for r in M.rows for x in r)


def test_basis_inverse_converges():
    # inverse of B + dB/N approaches inverse of B with squared gap O(1/N^2)
    rng = random.Random(16)
    checked = 0
    while checked < 20:
        B = random_matrix(rng, 3, 3)
        dB = random_matrix(rng, 3, 3)
        if rank(B) < 3:
            continue
        base = invert(B)
        gaps = {}
        for N in (16, 256, 4096):
            BN = B + dB.scale(F(1, N))
            if rank(BN) < 3:
                break
            gaps[N] = (invert(BN) - base).norm_squared()
        else:
            C = 4 * gaps[16] * 16**2
            assert gaps[256] <= C / 256**2
            assert gaps[4096] <= C / 4096**2
            checked += 1


def test_matrix_is_immutable():
    M = Matrix([[1]])
    with pytest.raises(AttributeError):
        M._rows = ()


def test_ragged_rows_rejected():
    with pytest.raises(ValueError):
        Matrix([[1, 2], [3]])
