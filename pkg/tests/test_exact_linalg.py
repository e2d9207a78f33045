from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ribboncalc.errors import DomainMismatch
from ribboncalc.exact_linalg import kernel_basis, pfaffian, restrict_form


def det(matrix):
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    sign = 1
    for c in range(n):
        pivot = next((i for i in range(c, n) if a[i][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            sign = -sign
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    out = Fraction(sign)
    for i in range(n):
        out *= a[i][i]
    return out


def antisym(entries, n):
    a = [[Fraction(0)] * n for _ in range(n)]
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            a[i][j] = Fraction(entries[k])
            a[j][i] = -a[i][j]
            k += 1
    return a


class TestPfaffian:
    def test_small_sizes(self):
        assert pfaffian([]) == 1
        assert pfaffian([[0]]) == 0
        assert pfaffian([[0, 5], [-5, 0]]) == 5
        a = antisym([1, 2, 3, 4, 5, 6], 4)
        # pf = a01*a23 - a02*a13 + a03*a12
        assert pfaffian(a) == 1 * 6 - 2 * 5 + 3 * 4

    def test_rejects_non_antisymmetric(self):
        with pytest.raises(DomainMismatch):
            pfaffian([[0, 1], [1, 0]])
        with pytest.raises(DomainMismatch):
            pfaffian([[1, 1], [-1, 0]])
        with pytest.raises(DomainMismatch):
            pfaffian([[0, 1, 2], [-1, 0, 3]])

    @given(st.lists(st.integers(-9, 9), min_size=15, max_size=15))
    def test_square_is_determinant(self, entries):
        a = antisym(entries, 6)
        assert pfaffian(a) ** 2 == det(a)

    @given(st.lists(st.integers(-5, 5), min_size=6, max_size=6))
    def test_odd_size_vanishes(self, entries):
        # top-left 4x4 block of a 5x5 antisymmetric matrix, padded
        a = antisym(entries + [0, 0, 0, 0], 5)
        assert pfaffian(a) == 0

    def test_unimodular_change_of_basis(self):
        a = antisym([1, 2, 3, 4, 5, 6], 4)
        u = [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 2], [0, 1, 0, 1]]
        b = restrict_form(a, [[row[i] for row in u] for i in range(4)])
        assert abs(pfaffian(b)) == abs(pfaffian(a))


class TestKernel:
    def test_plane_in_three_space(self):
        basis = kernel_basis([[1, 1, 1]], 3)
        assert len(basis) == 2
        for v in basis:
            assert sum(v) == 0

    def test_full_rank_gives_nothing(self):
        assert kernel_basis([[1, 0], [1, 1]], 2) == []

    def test_dependent_rows_collapse(self):
        basis = kernel_basis([[1, 2, 3], [2, 4, 6]], 3)
        assert len(basis) == 2

    def test_no_rows(self):
        basis = kernel_basis([], 3)
        assert len(basis) == 3

    def test_rational_entries(self):
        basis = kernel_basis([[Fraction(1, 2), Fraction(1, 3)]], 2)
        assert len(basis) == 1
        (v,) = basis
        assert v[0] / 2 + v[1] / 3 == 0

    def test_row_length_checked(self):
        with pytest.raises(DomainMismatch):
            kernel_basis([[1, 2]], 3)

    @given(st.lists(st.lists(st.integers(-4, 4), min_size=5, max_size=5),
                    min_size=0, max_size=4))
    def test_members_annihilate_rows(self, rows):
        basis = kernel_basis(rows, 5)
        for v in basis:
            for row in rows:
                assert sum(Fraction(r) * x for r, x in zip(row, v)) == 0


class TestRestrict:
    def test_two_by_two_slice(self):
        a = antisym([0, 1, 0, 2, 0, 3], 4)  # a02 = 1
        basis = [[1, 0, 0, 0], [0, 0, 1, 0]]
        b = restrict_form(a, basis)
        assert b[0][0] == 0 and b[1][1] == 0
        assert b[0][1] == a[0][2]
        assert b[1][0] == -a[0][2]
