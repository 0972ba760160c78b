from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stacksimplex import exactla
from stacksimplex.exactla import UnderdeterminedError

from oracles import sympy_det, sympy_rank

small = st.integers(min_value=-4, max_value=4)
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def square(n, elems=small):
    return st.lists(st.lists(elems, min_size=n, max_size=n), min_size=n, max_size=n)


@st.composite
def matrices(draw, max_rows=4, max_cols=4, elems=small):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return draw(st.lists(st.lists(elems, min_size=c, max_size=c), min_size=r, max_size=r))


class TestRationalText:
    @pytest.mark.parametrize(
        "text, value",
        [("5/2", Fraction(5, 2)), ("3", Fraction(3)), (" -4/6 ", Fraction(-2, 3)), ("0", Fraction(0))],
    )
    def test_parse(self, text, value):
        assert exactla.parse_rational(text) == value

    @pytest.mark.parametrize("text", ["", "1/0", "a", "1.5", "2/x", "1//2"])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            exactla.parse_rational(text)

    @given(rationals)
    def test_round_trip(self, x):
        assert exactla.parse_rational(exactla.format_rational(x)) == x

    def test_format_integers_without_denominator(self):
        assert exactla.format_rational(Fraction(6, 3)) == "2"
        assert exactla.format_rational(Fraction(-1, 2)) == "-1/2"


class TestDeterminant:
    @given(st.integers(1, 5).flatmap(square))
    def test_matches_sympy(self, rows):
        assert exactla.determinant(rows) == sympy_det(rows)

    @given(st.integers(1, 4).flatmap(lambda n: square(n, rationals)))
    def test_rational_entries(self, rows):
        assert exactla.determinant(rows) == sympy_det(rows)

    def test_needs_row_swap(self):
        assert exactla.determinant([[0, 1], [1, 0]]) == -1
        assert exactla.determinant([[0, 0, 1], [0, 1, 0], [1, 0, 0]]) == -1

    def test_non_square(self):
        with pytest.raises(ValueError):
            exactla.determinant([[1, 2, 3], [4, 5, 6]])


class TestElimination:
    @given(matrices())
    def test_rank_matches_sympy(self, rows):
        assert exactla.rank(rows) == sympy_rank(rows)

    @given(matrices())
    def test_nullspace_is_kernel(self, rows):
        ncols = len(rows[0])
        basis = exactla.nullspace(rows)
        assert len(basis) == ncols - exactla.rank(rows)
        for v in basis:
            assert all(x == 0 for x in exactla.matvec(rows, v))
        if basis:
            assert exactla.rank(basis) == len(basis)

    @given(matrices())
    def test_rref_shape(self, rows):
        reduced, pivots = exactla.rref(rows)
        assert pivots == sorted(pivots)
        for i, p in enumerate(pivots):
            column = [r[p] for r in reduced]
            assert column == [Fraction(int(j == i)) for j in range(len(reduced))]

    @given(st.integers(1, 4).flatmap(square))
    def test_inverse(self, rows):
        if sympy_det(rows) == 0:
            with pytest.raises(ZeroDivisionError):
                exactla.inverse(rows)
        else:
            inv = exactla.inverse(rows)
            assert exactla.matmul(rows, inv) == exactla.identity(len(rows))

    def test_solve_unique(self):
        assert exactla.solve_linear([[2, 1], [1, 3]], [3, 5]) == (Fraction(4, 5), Fraction(7, 5))

    def test_solve_inconsistent(self):
        assert exactla.solve_linear([[1, 1], [1, 1]], [1, 2]) is None

    def test_solve_underdetermined(self):
        with pytest.raises(UnderdeterminedError):
            exactla.solve_linear([[1, 1]], [1])

    @given(st.integers(1, 4).flatmap(square), st.lists(small, min_size=4, max_size=4))
    def test_solve_round_trip(self, rows, x):
        x = x[: len(rows)]
        b = exactla.matvec(rows, x)
        if sympy_det(rows) != 0:
            assert exactla.solve_linear(rows, b) == tuple(Fraction(v) for v in x)


class TestUnimodular:
    def test_examples(self):
        assert exactla.is_unimodular([[1, 1], [0, 1]])
        assert exactla.is_unimodular([[0, -1], [1, 0]])
        assert not exactla.is_unimodular([[2, 0], [0, 1]])
        assert not exactla.is_unimodular([[Fraction(1, 2), 0], [0, 2]])

    def test_non_square(self):
        with pytest.raises(ValueError):
            exactla.is_unimodular([[1, 0]])


def _feasible_by_grid(constraints, box):
    """Feasibility of constraints whose solutions, if any, include a point of the grid."""
    nvars = len(constraints[0][0])
    for x in product(box, repeat=nvars):
        ok = True
        for coeffs, rel, rhs in constraints:
            lhs = sum(Fraction(c) * v for c, v in zip(coeffs, x))
            if not {"<=": lhs <= rhs, "=": lhs == rhs, ">=": lhs >= rhs}[rel]:
                ok = False
                break
        if ok:
            return True
    return False


class TestLP:
    def test_empty_system(self):
        assert exactla.lp_feasible([])

    def test_simple(self):
        assert exactla.lp_feasible([([1, 1], "<=", 1), ([1, 0], ">=", 0), ([0, 1], ">=", 0)])
        assert not exactla.lp_feasible([([1], ">=", 2), ([1], "<=", 1)])

    def test_free_variables_go_negative(self):
        assert exactla.lp_feasible([([1], "=", -3)])
        assert exactla.lp_feasible([([1, 1], "<=", -10)])

    def test_equalities(self):
        assert not exactla.lp_feasible([([1, 1], "=", 1), ([1, 1], "=", 2)])

    def test_nonnegative_mode(self):
        assert not exactla.lp_feasible([([1], "=", -3)], nonnegative=True)
        assert exactla.lp_feasible([([1, -1], "=", -3)], nonnegative=True)

    @settings(max_examples=40)
    @given(
        st.lists(
            st.tuples(st.lists(st.integers(-2, 2), min_size=2, max_size=2), st.integers(-2, 2)),
            min_size=1,
            max_size=4,
        )
    )
    def test_nonnegative_mode_matches_explicit_bounds(self, rows):
        cons = [(a, "<=", b) for a, b in rows] + [([1, 1], "<=", 4)]
        explicit = cons + [([1, 0], ">=", 0), ([0, 1], ">=", 0)]
        assert exactla.lp_feasible(cons, nonnegative=True) == exactla.lp_feasible(explicit)

    def test_bad_relation(self):
        with pytest.raises(ValueError):
            exactla.lp_feasible([([1], "<", 0)])

    @settings(max_examples=60)
    @given(
        st.lists(st.lists(small, min_size=2, max_size=2), min_size=1, max_size=5),
        st.lists(st.sampled_from(["<=", ">=", "="]), min_size=5, max_size=5),
        st.tuples(st.fractions(-2, 2, max_denominator=2), st.fractions(-2, 2, max_denominator=2)),
    )
    def test_planted_point_is_found_feasible(self, rows, rels, x0):
        cons = []
        for coeffs, rel in zip(rows, rels):
            value = sum(Fraction(c) * v for c, v in zip(coeffs, x0))
            slack = {"<=": 1, ">=": -1, "=": 0}[rel]
            cons.append((coeffs, rel, value + slack))
        assert exactla.lp_feasible(cons)

    @settings(max_examples=60)
    @given(st.lists(st.lists(small, min_size=2, max_size=2), min_size=1, max_size=4))
    def test_planted_contradiction(self, rows):
        a = rows[0]
        cons = [(r, "<=", 3) for r in rows] + [(a, ">=", 1), ([-v for v in a], ">=", 0)]
        # a.x >= 1 and a.x <= 0 cannot both hold
        assert not exactla.lp_feasible(cons)

    @settings(max_examples=40)
    @given(
        st.lists(
            st.tuples(st.lists(st.integers(-2, 2), min_size=2, max_size=2), st.integers(-2, 2)),
            min_size=1,
            max_size=4,
        )
    )
    def test_bounded_systems_against_grid(self, rows):
        # box 0 <= x <= 2 plus a.x <= b with integer data; vertices then have
        # denominators dividing small determinants, so a fine grid decides it
        cons = [([1, 0], ">=", 0), ([1, 0], "<=", 2), ([0, 1], ">=", 0), ([0, 1], "<=", 2)]
        cons += [(a, "<=", b) for a, b in rows]
        grid = sorted({Fraction(i, d) for d in range(1, 9) for i in range(0, 2 * d + 1)})
        assert exactla.lp_feasible(cons) == _feasible_by_grid(cons, grid)


def test_primitive():
    assert exactla.primitive([Fraction(1, 2), Fraction(-3, 4), 0]) == (2, -3, 0)
    assert exactla.primitive([0, 0]) == (0, 0)
