"""Polytopes given by explicit point lists.

A :class:`VPolytope` keeps an affine frame of its hull: a set of *pivot*
coordinates on which the hull projects injectively, plus the affine formulas
recovering the remaining coordinates.  Membership tests and lattice-point
enumeration both work in pivot coordinates.
"""

from __future__ import annotations

import json
from enum import Enum
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import gcd

from . import exactla
from .exactla import format_rational


class Region(Enum):
    CLOSED = "closed"
    RELATIVE_INTERIOR = "interior"


class MembershipClass(Enum):
    OUTSIDE = "outside"
    RELATIVE_BOUNDARY = "relative_boundary"
    RELATIVE_INTERIOR = "relative_interior"


class UnclassifiedInside(Exception):
    """The point is inside, but no facet description is available to say where."""


# brute-force facet enumeration is only attempted up to this affine dimension
MAX_FACET_DIM = 4


class VPolytope:
    """Convex hull of a finite point set.

    Duplicate points are dropped.  Points that are convex combinations of the
    others stay in :attr:`points` but are left out of :attr:`vertices`.
    """

    def __init__(self, points):
        pts = []
        seen = set()
        for p in points:
            v = exactla.as_vector(p)
            if v not in seen:
                seen.add(v)
                pts.append(v)
        if not pts:
            raise ValueError("a polytope needs at least one point")
        ambient = len(pts[0])
        if any(len(p) != ambient for p in pts):
            raise ValueError("points have different lengths")
        self.points = tuple(pts)
        self.ambient = ambient

        base = pts[0]
        diffs = [[a - b for a, b in zip(p, base)] for p in pts[1:]]
        rows, pivots = exactla.rref(diffs) if diffs else ([], [])
        self.affine_dim = len(pivots)
        self.pivots = tuple(pivots)
        self.basis = tuple(tuple(r) for r in rows)

    # ------------------------------------------------------------------ frame

    @property
    def base(self) -> tuple:
        return self.points[0]

    def hull_point(self, y) -> tuple:
        """The point of the affine hull with pivot coordinates ``y``."""
        base = self.base
        x = list(base)
        for j, pj in enumerate(self.pivots):
            delta = Fraction(y[j]) - base[pj]
            if delta:
                for k, bk in enumerate(self.basis[j]):
                    x[k] += delta * bk
        return tuple(x)

    def in_affine_hull(self, x) -> bool:
        x = exactla.as_vector(x)
        if len(x) != self.ambient:
            raise ValueError("dimension mismatch")
        return self.hull_point([x[p] for p in self.pivots]) == x

    # --------------------------------------------------------------- vertices

    @cached_property
    def extreme_flags(self) -> tuple:
        pts = self.points
        if len(pts) == self.affine_dim + 1:
            return (True,) * len(pts)
        return tuple(not _in_hull_lp(p, pts[:i] + pts[i + 1:]) for i, p in enumerate(pts))

    @property
    def vertices(self) -> tuple:
        return tuple(p for p, ext in zip(self.points, self.extreme_flags) if ext)

    @property
    def non_extreme_points(self) -> tuple:
        return tuple(p for p, ext in zip(self.points, self.extreme_flags) if not ext)

    @property
    def is_simplex(self) -> bool:
        return len(self.vertices) == self.affine_dim + 1

    @property
    def is_lattice(self) -> bool:
        return all(v.denominator == 1 for p in self.vertices for v in p)

    # ------------------------------------------------- inequality description

    @cached_property
    def _barycentric_inverse(self):
        verts = self.vertices
        v0 = [verts[0][p] for p in self.pivots]
        m = [[v[p] - b for p, b in zip(self.pivots, v0)] for v in verts[1:]]
        return exactla.inverse(m) if m else []

    def barycentric(self, x):
        """Barycentric coordinates of ``x`` w.r.t. :attr:`vertices`, or None off the hull."""
        if not self.is_simplex:
            raise ValueError("barycentric coordinates need a simplex")
        x = exactla.as_vector(x)
        if not self.in_affine_hull(x):
            return None
        verts = self.vertices
        y = [x[p] - verts[0][p] for p in self.pivots]
        inv = self._barycentric_inverse
        tail = [sum((y[k] * inv[k][j] for k in range(len(y))), Fraction(0)) for j in range(len(y))]
        return (1 - sum(tail, Fraction(0)),) + tuple(tail)

    @cached_property
    def inequalities(self):
        """Affine forms ``(a, c)`` with ``a . y + c >= 0`` describing the polytope.

        ``y`` are pivot coordinates of a hull point.  For a simplex the forms
        are its barycentric coordinates (one per vertex, in vertex order); for
        other polytopes of affine dimension at most :data:`MAX_FACET_DIM` they
        are facet inequalities found by brute force.  ``None`` otherwise.
        """
        d = self.affine_dim
        if self.is_simplex:
            if d == 0:
                return ((), Fraction(1)),
            verts = self.vertices
            v0 = [verts[0][p] for p in self.pivots]
            inv = self._barycentric_inverse
            forms = []
            for j in range(d):
                a = tuple(inv[k][j] for k in range(d))
                c = -sum((a[k] * v0[k] for k in range(d)), Fraction(0))
                forms.append((a, c))
            a0 = tuple(-sum((f[0][k] for f in forms), Fraction(0)) for k in range(d))
            c0 = 1 - sum((f[1] for f in forms), Fraction(0))
            return ((a0, c0),) + tuple(forms)
        if d > MAX_FACET_DIM:
            return None
        return _facets([[v[p] for p in self.pivots] for v in self.vertices])

    # ------------------------------------------------------------- transforms

    def map_points(self, f) -> "VPolytope":
        return VPolytope(f(p) for p in self.points)

    def to_json(self) -> dict:
        out = {
            "ambient": self.ambient,
            "vertices": [[format_rational(v) for v in p] for p in self.vertices],
            "affine_dim": self.affine_dim,
            "simplex": self.is_simplex,
        }
        if self.non_extreme_points:
            out["non_extreme"] = [[format_rational(v) for v in p] for p in self.non_extreme_points]
        return out

    def __repr__(self):
        pts = ", ".join("(" + ",".join(format_rational(v) for v in p) + ")" for p in self.points)
        return f"VPolytope([{pts}])"


def _in_hull_lp(x, pts) -> bool:
    """Is ``x`` a convex combination of ``pts``?  Exact LP on the weights."""
    cons = [([1] * len(pts), "=", 1)]
    for coord in range(len(x)):
        cons.append(([p[coord] for p in pts], "=", x[coord]))
    return exactla.lp_feasible(cons, nonnegative=True)


def _facets(points) -> tuple:
    """Facet inequalities of a full-dimensional point configuration (brute force)."""
    d = len(points[0])
    found = []
    seen = set()
    for subset in combinations(points, d):
        w0 = subset[0]
        rows = [[a - b for a, b in zip(w, w0)] for w in subset[1:]]
        null = exactla.nullspace(rows, d) if rows else [tuple(Fraction(int(i == 0)) for i in range(d))]
        if len(null) != 1:
            continue
        a = null[0]
        c = -sum((ai * wi for ai, wi in zip(a, w0)), Fraction(0))
        vals = [sum((ai * wi for ai, wi in zip(a, w)), Fraction(0)) + c for w in points]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            a = tuple(-ai for ai in a)
            c = -c
        else:
            continue
        key = exactla.primitive(list(a) + [c])
        if key not in seen:
            seen.add(key)
            found.append((tuple(Fraction(v) for v in key[:-1]), Fraction(key[-1])))
    return tuple(found)


# ---------------------------------------------------------------- operations


def from_points(pts) -> VPolytope:
    return VPolytope(pts)


def affinely_independent(pts) -> bool:
    pts = [exactla.as_vector(p) for p in pts]
    if not pts:
        raise ValueError("empty point set")
    base = pts[0]
    diffs = [[a - b for a, b in zip(p, base)] for p in pts[1:]]
    return not diffs or exactla.rank(diffs) == len(diffs)


def membership(p: VPolytope, x) -> MembershipClass:
    x = exactla.as_vector(x)
    if len(x) != p.ambient:
        raise ValueError(f"point has length {len(x)}, polytope lives in dimension {p.ambient}")
    if not p.in_affine_hull(x):
        return MembershipClass.OUTSIDE
    if p.is_simplex:
        bary = p.barycentric(x)
        if any(b < 0 for b in bary):
            return MembershipClass.OUTSIDE
        if all(b > 0 for b in bary):
            return MembershipClass.RELATIVE_INTERIOR
        return MembershipClass.RELATIVE_BOUNDARY
    if not _in_hull_lp(x, p.vertices):
        return MembershipClass.OUTSIDE
    forms = p.inequalities
    if forms is None:
        raise UnclassifiedInside(f"no facet description in affine dimension {p.affine_dim}")
    y = [x[k] for k in p.pivots]
    values = [sum((ai * yi for ai, yi in zip(a, y)), Fraction(0)) + c for a, c in forms]
    if all(v > 0 for v in values):
        return MembershipClass.RELATIVE_INTERIOR
    return MembershipClass.RELATIVE_BOUNDARY


def dilate(p: VPolytope, lam) -> VPolytope:
    lam = Fraction(lam)
    if lam < 0:
        raise ValueError("dilation factor must be nonnegative")
    if lam == 0:
        return VPolytope([(0,) * p.ambient])
    return p.map_points(lambda v: tuple(lam * c for c in v))


def translate(p: VPolytope, v) -> VPolytope:
    v = exactla.as_vector(v)
    if len(v) != p.ambient:
        raise ValueError("dimension mismatch")
    return p.map_points(lambda x: tuple(a + b for a, b in zip(x, v)))


def project_last_to_zero(p: VPolytope) -> VPolytope:
    return p.map_points(lambda x: x[:-1] + (Fraction(0),))


def drop_last(p: VPolytope) -> VPolytope:
    if p.ambient < 2:
        raise ValueError("cannot drop the only coordinate")
    return p.map_points(lambda x: x[:-1])


def lift_append_zero(p: VPolytope) -> VPolytope:
    return p.map_points(lambda x: x + (Fraction(0),))


def normalized_volume(p: VPolytope) -> int:
    """Normalized volume of a lattice simplex, measured in its own affine lattice.

    Equals the gcd of the maximal minors of the edge matrix: a primitive
    lattice basis of the hull has coprime maximal minors.
    """
    if not (p.is_simplex and p.is_lattice):
        raise ValueError("normalized volume needs a lattice simplex")
    d = p.affine_dim
    if d == 0:
        return 1
    verts = p.vertices
    edges = [[a - b for a, b in zip(v, verts[0])] for v in verts[1:]]
    g = 0
    for cols in combinations(range(p.ambient), d):
        minor = exactla.determinant([[row[c] for c in cols] for row in edges])
        g = gcd(g, int(minor))
    return g


def polytope_json(p: VPolytope) -> str:
    return json.dumps(p.to_json(), sort_keys=True)


# ------------------------------------------------------------------ builtins


def cube(n: int) -> VPolytope:
    """The unit cube with vertex set {0,1}^n."""
    if n < 1:
        raise ValueError("cube dimension must be positive")
    return VPolytope(
        tuple((mask >> (n - 1 - i)) & 1 for i in range(n)) for mask in range(2 ** n)
    )
