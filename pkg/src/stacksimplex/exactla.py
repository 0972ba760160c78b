"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`; vectors are tuples of fractions and
matrices are lists of rows.  Nothing in here ever rounds.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import NamedTuple, Sequence

Rational = Fraction
RatVector = tuple
RatMatrix = list


class UnderdeterminedError(ValueError):
    """Raised when a consistent linear system has more than one solution."""


class LinearConstraint(NamedTuple):
    coeffs: tuple
    rel: str  # one of "<=", "=", ">="
    rhs: Fraction


_RELATIONS = ("<=", "=", ">=")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or an integer literal into a Fraction."""
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    num, sep, den = text.partition("/")
    try:
        if sep:
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def format_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_vector(values) -> tuple:
    return tuple(Fraction(v) for v in values)


def as_matrix(rows) -> list:
    mat = [[Fraction(v) for v in row] for row in rows]
    if not mat or not mat[0]:
        raise ValueError("matrix must have at least one row and column")
    width = len(mat[0])
    if any(len(row) != width for row in mat):
        raise ValueError("ragged matrix")
    return mat


def identity(n: int) -> list:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(a) -> list:
    return [list(col) for col in zip(*a)]


def matmul(a, b) -> list:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a, v) -> tuple:
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a)


def rref(a) -> tuple[list, list]:
    """Reduced row echelon form by exact Gauss-Jordan.

    Returns ``(rows, pivots)`` where ``rows`` holds only the nonzero rows and
    ``pivots[i]`` is the pivot column of ``rows[i]``.
    """
    m = [[Fraction(v) for v in row] for row in a]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(a) -> int:
    return len(rref(a)[1])


def nullspace(a, ncols: int | None = None) -> list:
    """Basis of the right null space of ``a`` (exact)."""
    if ncols is None:
        ncols = len(a[0])
    rows, pivots = rref(a) if a else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(rows, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def solve_linear(a, b) -> tuple | None:
    """Solve ``a x = b`` exactly.

    Returns the unique solution, ``None`` if the system is inconsistent, and
    raises :class:`UnderdeterminedError` if it has infinitely many solutions.
    """
    a = as_matrix(a)
    b = as_vector(b)
    if len(b) != len(a):
        raise ValueError("right-hand side length does not match row count")
    ncols = len(a[0])
    rows, pivots = rref([row + [rhs] for row, rhs in zip(a, b)])
    if ncols in pivots:
        return None
    if len(pivots) < ncols:
        raise UnderdeterminedError("system is underdetermined")
    x = [Fraction(0)] * ncols
    for row, p in zip(rows, pivots):
        x[p] = row[ncols]
    return tuple(x)


def inverse(a) -> list:
    a = as_matrix(a)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("inverse of a non-square matrix")
    rows, pivots = rref([row + e for row, e in zip(a, identity(n))])
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in rows]


def determinant(a) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination."""
    a = as_matrix(a)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    # clear denominators so that the Bareiss divisions stay in Z
    scale = Fraction(1)
    m = []
    for row in a:
        den = 1
        for v in row:
            den = den * v.denominator // gcd(den, v.denominator)
        scale /= den
        m.append([int(v * den) for v in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] * scale


def is_unimodular(a) -> bool:
    a = as_matrix(a)
    if any(len(row) != len(a) for row in a):
        raise ValueError("unimodularity of a non-square matrix")
    if any(v.denominator != 1 for row in a for v in row):
        return False
    return abs(determinant(a)) == 1


def lp_feasible(constraints: Sequence, nonnegative: bool = False) -> bool:
    """Decide exact feasibility of a system of linear constraints.

    Each constraint is ``(coeffs, rel, rhs)`` with ``rel`` in ``<=``, ``=``,
    ``>=``.  Variables are free unless ``nonnegative`` is set.  Uses a
    phase-one simplex over the rationals with Bland's rule, so it always
    terminates.
    """
    rows = []
    nvars = None
    for coeffs, rel, rhs in constraints:
        if rel not in _RELATIONS:
            raise ValueError(f"unknown relation {rel!r}")
        coeffs = as_vector(coeffs)
        if nvars is None:
            nvars = len(coeffs)
        elif len(coeffs) != nvars:
            raise ValueError("constraints have different numbers of variables")
        rows.append((coeffs, rel, Fraction(rhs)))
    if not rows:
        return True
    if nvars == 0:
        return all(
            {"<=": 0 <= rhs, "=": rhs == 0, ">=": 0 >= rhs}[rel] for _, rel, rhs in rows
        )

    m = len(rows)
    n_slack = sum(rel != "=" for _, rel, _ in rows)
    # columns: x (or x+ and x- when free), slacks, artificials
    n_x = nvars if nonnegative else 2 * nvars
    n_struct = n_x + n_slack
    ncols = n_struct + m
    tab = []
    slack = n_x
    for i, (coeffs, rel, rhs) in enumerate(rows):
        row = [Fraction(0)] * (ncols + 1)
        for j, c in enumerate(coeffs):
            row[j] = c
            if not nonnegative:
                row[nvars + j] = -c
        if rel != "=":
            row[slack] = Fraction(1 if rel == "<=" else -1)
            slack += 1
        row[ncols] = rhs
        if rhs < 0:
            row = [-v for v in row]
        row[n_struct + i] = Fraction(1)
        tab.append(row)
    basis = [n_struct + i for i in range(m)]
    cost = [Fraction(0)] * n_struct + [Fraction(1)] * m

    while True:
        reduced = [
            cost[j] - sum((cost[basis[i]] * tab[i][j] for i in range(m)), Fraction(0))
            for j in range(ncols)
        ]
        entering = next((j for j in range(ncols) if reduced[j] < 0), None)
        if entering is None:
            break
        best = None
        for i in range(m):
            if tab[i][entering] > 0:
                key = (tab[i][ncols] / tab[i][entering], basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            # phase-one objective is bounded below by zero
            raise AssertionError("unbounded phase-one problem")
        r = best[1]
        piv = tab[r][entering]
        tab[r] = [v / piv for v in tab[r]]
        for i in range(m):
            if i != r and tab[i][entering] != 0:
                f = tab[i][entering]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[r])]
        basis[r] = entering

    objective = sum((cost[basis[i]] * tab[i][ncols] for i in range(m)), Fraction(0))
    return objective == 0


def lcm_of_denominators(values) -> int:
    out = 1
    for v in values:
        d = Fraction(v).denominator
        out = out * d // gcd(out, d)
    return out


def primitive(values) -> tuple:
    """Scale a rational vector to the primitive integer vector with the same direction."""
    den = lcm_of_denominators(values)
    ints = [int(Fraction(v) * den) for v in values]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return tuple(ints)
    return tuple(v // g for v in ints)
