"""Lattice-point counting for integer and rational dilates, and Ehrhart data.

Counting enumerates pivot coordinates (see :class:`~stacksimplex.polytope.VPolytope`)
inside the dilated bounding box.  The remaining coordinates are fixed by the
affine hull, so a polytope on a hyperplane such as ``sum(x) = const`` costs
one dimension less than its ambient space.  All inequalities are scaled to
integer coefficients before the scan.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, comb, floor

from . import exactla
from .permutations import sort_orbit, tau
from .polytope import (
    Region,
    UnclassifiedInside,
    VPolytope,
    _in_hull_lp,
    project_last_to_zero,
    translate,
)

CLOSED = Region.CLOSED
INTERIOR = Region.RELATIVE_INTERIOR


@dataclass(frozen=True)
class DilateCount:
    lam: Fraction
    count: int
    region: Region


@dataclass(frozen=True)
class EhrhartResult:
    poly: tuple
    hstar: tuple
    hollow: bool
    gorenstein_index: int | None

    def to_json(self) -> dict:
        return {
            "poly": [exactla.format_rational(c) for c in self.poly],
            "hstar": list(self.hstar),
            "hollow": self.hollow,
            "gorenstein_index": self.gorenstein_index,
        }


@dataclass(frozen=True)
class GorensteinCertificate:
    index: int | None
    method: str  # "symbolic" or "finite"
    checked_range: tuple | None = None


# ------------------------------------------------------------------ counting


def _scaled(coeffs, const) -> tuple:
    den = exactla.lcm_of_denominators(list(coeffs) + [const])
    return [int(a * den) for a in coeffs], int(const * den), den


def lattice_points(p: VPolytope, lam, region: Region = CLOSED):
    """Yield the integer points of ``lam * p`` (or of its relative interior).

    The zero dilate is the origin; its relative interior is taken to be empty
    unless ``p`` itself is a single point.
    """
    lam = Fraction(lam)
    if lam < 0:
        raise ValueError("dilation factor must be nonnegative")
    interior = region is INTERIOR
    n = p.ambient
    if lam == 0:
        if not interior or p.affine_dim == 0:
            yield (0,) * n
        return

    forms = p.inequalities
    if forms is None and interior:
        raise UnclassifiedInside(
            f"relative interior needs a simplex or affine dimension <= 4, got {p.affine_dim}"
        )

    d = p.affine_dim
    piv = p.pivots
    base = p.base
    verts = p.vertices
    lo = [ceil(min(lam * v[k] for v in verts)) for k in piv]
    hi = [floor(max(lam * v[k] for v in verts)) for k in piv]
    if any(a > b for a, b in zip(lo, hi)):
        return

    dependent = []
    for k in range(n):
        if k in piv:
            continue
        r = [p.basis[j][k] for j in range(d)]
        s = lam * base[k] - sum((lam * base[piv[j]] * r[j] for j in range(d)), Fraction(0))
        coeffs, const, den = _scaled(r, s)
        dependent.append((k, coeffs, const, den))

    def build(y):
        x = [0] * n
        for j, k in enumerate(piv):
            x[k] = y[j]
        for k, coeffs, const, den in dependent:
            num = const + sum(c * yj for c, yj in zip(coeffs, y))
            if num % den:
                return None
            x[k] = num // den
        return tuple(x)

    if forms is None:
        # no inequality description: fall back to exact LP membership
        scaled_verts = [tuple(lam * c for c in v) for v in verts]
        for y in _box(lo, hi):
            x = build(y)
            if x is not None and _in_hull_lp(x, scaled_verts):
                yield x
        return

    thr = 1 if interior else 0
    rows = []
    for a, c in forms:
        coeffs, const, _ = _scaled(a, lam * c)
        rows.append((coeffs, const))
    if d == 0:
        if all(const >= thr for _, const in rows):
            x = build(())
            if x is not None:
                yield x
        return

    # best case contribution of coordinates j.. for each row, used for pruning
    suffix = []
    for coeffs, _ in rows:
        acc = [0] * (d + 1)
        for j in range(d - 1, -1, -1):
            acc[j] = acc[j + 1] + max(coeffs[j] * lo[j], coeffs[j] * hi[j])
        suffix.append(acc)

    y = [0] * d
    last = d - 1

    def scan(level, partial):
        if level == last:
            a_lo, a_hi = lo[last], hi[last]
            for (coeffs, _), s in zip(rows, partial):
                c = coeffs[last]
                if c > 0:
                    a_lo = max(a_lo, -((s - thr) // c))
                elif c < 0:
                    a_hi = min(a_hi, (s - thr) // (-c))
                elif s < thr:
                    return
            for v in range(a_lo, a_hi + 1):
                y[last] = v
                x = build(y)
                if x is not None:
                    yield x
            return
        for v in range(lo[level], hi[level] + 1):
            nxt = [s + coeffs[level] * v for (coeffs, _), s in zip(rows, partial)]
            if any(s + acc[level + 1] < thr for s, acc in zip(nxt, suffix)):
                continue
            y[level] = v
            yield from scan(level + 1, nxt)

    yield from scan(0, [const for _, const in rows])


def _box(lo, hi):
    if not lo:
        yield ()
        return
    for v in range(lo[0], hi[0] + 1):
        for rest in _box(lo[1:], hi[1:]):
            yield (v,) + rest


def count_lattice(p: VPolytope, lam, region: Region = CLOSED) -> int:
    """``|lam * P  ∩ Z^n|``, or the relative-interior analogue."""
    return sum(1 for _ in lattice_points(p, lam, region))


def dilate_counts(p: VPolytope, lams) -> list:
    """``(lam, closed, interior)`` rows for a table export."""
    out = []
    for lam in lams:
        lam = Fraction(lam)
        out.append((lam, count_lattice(p, lam, CLOSED), count_lattice(p, lam, INTERIOR)))
    return out


def counts_csv(rows) -> str:
    lines = ["lambda,closed,interior"]
    for lam, closed, interior in rows:
        lines.append(f"{exactla.format_rational(lam)},{closed},{interior}")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------- Ehrhart theory


def _require_lattice(p: VPolytope):
    if not p.is_lattice:
        raise ValueError("Ehrhart polynomial needs a lattice polytope")


def ehrhart_polynomial(p: VPolytope) -> tuple:
    """Coefficients (constant term first) interpolated from ``t = 0..dim``."""
    _require_lattice(p)
    d = p.affine_dim
    nodes = range(d + 1)
    vander = [[Fraction(t) ** k for k in range(d + 1)] for t in nodes]
    counts = [count_lattice(p, t) for t in nodes]
    return exactla.solve_linear(vander, counts)


def poly_eval(coeffs, t) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def hstar_vector(p: VPolytope) -> tuple:
    """Numerator of the Ehrhart series over ``(1 - z)^(dim + 1)``, trailing zeros dropped."""
    poly = ehrhart_polynomial(p)
    d = p.affine_dim
    values = [poly_eval(poly, t) for t in range(d + 1)]
    h = []
    for i in range(d + 1):
        h.append(sum((-1) ** j * comb(d + 1, j) * values[i - j] for j in range(i + 1)))
    if any(v.denominator != 1 or v < 0 for v in h):
        raise ArithmeticError(f"h* entries are not nonnegative integers: {h}")
    h = [int(v) for v in h]
    while len(h) > 1 and h[-1] == 0:
        h.pop()
    return tuple(h)


@lru_cache(maxsize=None)
def _eulerian(n: int, k: int) -> int:
    if n == 0:
        return 1 if k == 0 else 0
    if k < 0 or k > n - 1:
        return 0
    return (k + 1) * _eulerian(n - 1, k) + (n - k) * _eulerian(n - 1, k - 1)


def eulerian(n: int, k: int) -> int:
    """Number of permutations of ``[n]`` with ``k`` descents."""
    if n < 1 or not 0 <= k <= n - 1:
        raise ValueError(f"Eulerian number A({n},{k}) out of range")
    return _eulerian(n, k)


def reciprocity_check(p: VPolytope, t: int) -> bool:
    poly = ehrhart_polynomial(p)
    signed = (-1) ** p.affine_dim * poly_eval(poly, -t)
    return signed == count_lattice(p, t, INTERIOR)


def is_hollow(p: VPolytope) -> bool:
    return count_lattice(p, 1, INTERIOR) == 0


def gorenstein_certificate(p: VPolytope, tmax: int | None = None) -> GorensteinCertificate:
    """Smallest Gorenstein index, certified symbolically for lattice polytopes.

    For a lattice polytope the relation ``L(P°; t) = L(P; t - k)`` for all
    ``t > k`` is, by reciprocity, the polynomial identity
    ``poly(t - k) = (-1)^d poly(-t)``; two polynomials of degree at most ``d``
    agreeing at ``d + 1`` points are equal.  The two point conditions are
    checked by enumeration.  Non-lattice input falls back to checking
    ``k < t <= tmax`` by enumeration, and the range is reported.
    """
    d = p.affine_dim
    kmax = d + 1
    if p.is_lattice:
        poly = ehrhart_polynomial(p)
        sign = (-1) ** d
        for k in range(1, kmax + 1):
            if any(poly_eval(poly, t - k) != sign * poly_eval(poly, -t) for t in range(d + 1)):
                continue
            if count_lattice(p, k - 1, INTERIOR) == 0 and count_lattice(p, k, INTERIOR) == 1:
                return GorensteinCertificate(k, "symbolic")
        return GorensteinCertificate(None, "symbolic")
    if tmax is None:
        tmax = kmax + 2
    for k in range(1, kmax + 1):
        if tmax < k + 2:
            break
        if count_lattice(p, k - 1, INTERIOR) != 0 or count_lattice(p, k, INTERIOR) != 1:
            continue
        if all(
            count_lattice(p, t, INTERIOR) == count_lattice(p, t - k) for t in range(k + 1, tmax + 1)
        ):
            return GorensteinCertificate(k, "finite", (k + 1, tmax))
    return GorensteinCertificate(None, "finite", (1, tmax))


def gorenstein_index(p: VPolytope, tmax: int | None = None) -> int | None:
    return gorenstein_certificate(p, tmax).index


def ehrhart_result(p: VPolytope) -> EhrhartResult:
    poly = ehrhart_polynomial(p)
    return EhrhartResult(
        poly=poly,
        hstar=hstar_vector(p),
        hollow=is_hollow(p),
        gorenstein_index=gorenstein_index(p),
    )


# --------------------------------------------------- the stack-sorting simplex


@lru_cache(maxsize=None)
def stack_simplex(n: int) -> VPolytope:
    """Convex hull of the stack-sorting orbit of ``2 3 ... n 1``."""
    return VPolytope(q.entries for q in sort_orbit(tau(n)).steps)


@lru_cache(maxsize=None)
def shifted_stack_simplex(n: int) -> VPolytope:
    """The stack-sorting simplex translated so that ``2 3 ... n 1`` sits at the origin."""
    return translate(stack_simplex(n), [-v for v in tau(n).entries])


@lru_cache(maxsize=None)
def shifted_count(n: int, lam: Fraction, region: Region = CLOSED) -> int:
    return count_lattice(shifted_stack_simplex(n), Fraction(lam), region)


def _check_n(n: int):
    if n < 2:
        raise ValueError("n must be at least 2")


def _check_lam(lam) -> Fraction:
    lam = Fraction(lam)
    if lam < 0:
        raise ValueError("dilation factor must be nonnegative")
    return lam


def recurrence_sides(n: int, lam) -> tuple:
    """Closed count of the shifted simplex in dimension ``n+1`` vs. the sum over ``k/n`` slices."""
    _check_n(n)
    lam = _check_lam(lam)
    lhs = shifted_count(n + 1, lam)
    rhs = sum(shifted_count(n, Fraction(k, n)) for k in range(floor(n * lam) + 1))
    return lhs, rhs


def recurrence_check(n: int, lam) -> bool:
    lhs, rhs = recurrence_sides(n, lam)
    return lhs == rhs


def interior_recurrence_sides(n: int, lam) -> tuple:
    _check_n(n)
    lam = _check_lam(lam)
    lhs = shifted_count(n + 1, lam, INTERIOR)
    rhs = sum(shifted_count(n, Fraction(k, n), INTERIOR) for k in range(1, ceil(n * lam)))
    return lhs, rhs


def interior_recurrence_check(n: int, lam) -> bool:
    lhs, rhs = interior_recurrence_sides(n, lam)
    return lhs == rhs


def real_gorenstein_sides(n: int, lam) -> tuple:
    _check_n(n)
    lam = _check_lam(lam)
    return shifted_count(n, lam), shifted_count(n, lam + 2, INTERIOR)


def real_gorenstein_check(n: int, lam) -> bool:
    lhs, rhs = real_gorenstein_sides(n, lam)
    return lhs == rhs


def projection_count_sides(n: int, lam, p) -> tuple:
    """Counts of ``lam (S - p)`` and of its image with the last coordinate zeroed."""
    _check_n(n)
    lam = _check_lam(lam)
    simplex = stack_simplex(n)
    p = exactla.as_vector(p)
    if len(p) != n or not simplex.in_affine_hull(p):
        raise ValueError(f"{p} is not in the affine hull of the simplex")
    p_proj = p[:-1] + (Fraction(0),)
    lhs = count_lattice(translate(simplex, [-v for v in p]), lam)
    rhs = count_lattice(translate(project_last_to_zero(simplex), [-v for v in p_proj]), lam)
    return lhs, rhs


def projection_count_check(n: int, lam, p) -> bool:
    lhs, rhs = projection_count_sides(n, lam, p)
    return lhs == rhs


def translation_count_sides(n: int, t: int) -> tuple:
    """Counts at ``t/n`` of the simplex shifted by ``2 3 ... n (n+1)`` and by ``2 3 ... n 1``."""
    _check_n(n)
    if t < 0:
        raise ValueError("t must be nonnegative")
    lam = Fraction(t, n)
    truncated = tau(n + 1).entries[:-1]
    lhs = count_lattice(translate(stack_simplex(n), [-v for v in truncated]), lam)
    return lhs, shifted_count(n, lam)


def translation_count_check(n: int, t: int) -> bool:
    lhs, rhs = translation_count_sides(n, t)
    return lhs == rhs


def floor_identity_sides(n: int, t: int) -> tuple:
    """Both sums of the floor/ceiling reindexing identity for interior counts.

    Left: interior counts at ``k/n + (2n-1)/n`` for ``k = 0..floor(n t/(n+1))``.
    Right: interior counts at ``k/n`` for ``k = 2n-1 .. ceil(n (t + 2n + 1)/(n+1)) - 1``.
    """
    _check_n(n)
    if t < 0:
        raise ValueError("t must be nonnegative")
    shift = Fraction(2 * n - 1, n)
    lhs = sum(
        shifted_count(n, Fraction(k, n) + shift, INTERIOR)
        for k in range(floor(Fraction(n * t, n + 1)) + 1)
    )
    upper = ceil(n * (Fraction(t, n + 1) + Fraction(2 * n + 1, n + 1))) - 1
    rhs = sum(shifted_count(n, Fraction(k, n), INTERIOR) for k in range(2 * n - 1, upper + 1))
    return lhs, rhs


def floor_identity_check(n: int, t: int) -> bool:
    lhs, rhs = floor_identity_sides(n, t)
    return lhs == rhs


def rational_grid(n: int, jmax_factor: int = 3) -> list:
    """Dilates ``j/q`` with ``1 <= q <= 2n`` and ``0 <= j <= jmax_factor * q``, sorted."""
    return sorted({Fraction(j, q) for q in range(1, 2 * n + 1) for j in range(jmax_factor * q + 1)})
