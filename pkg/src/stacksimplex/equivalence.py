"""Lecture-hall simplices and the unimodular map from the stack-sorting simplex."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import exactla
from .ehrhart import lattice_points, stack_simplex
from .permutations import iterate, tau
from .polytope import VPolytope


@dataclass(frozen=True)
class TransformCertificate:
    """The affine map ``x -> matrix @ x + translation``."""

    matrix: tuple
    translation: tuple

    def __post_init__(self):
        matrix = tuple(tuple(Fraction(v) for v in row) for row in self.matrix)
        translation = exactla.as_vector(self.translation)
        if any(v.denominator != 1 for row in matrix for v in row) or any(
            v.denominator != 1 for v in translation
        ):
            raise ValueError("certificate entries must be integers")
        if len(translation) != len(matrix):
            raise ValueError("translation length does not match the matrix")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "translation", translation)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def apply(self, x, scale=1) -> tuple:
        """Image of ``x`` under the map, with the translation scaled for dilates."""
        return tuple(
            sum((a * b for a, b in zip(row, x)), Fraction(0)) + scale * t
            for row, t in zip(self.matrix, self.translation)
        )

    def to_json(self) -> dict:
        return {
            "matrix": [[int(v) for v in row] for row in self.matrix],
            "translation": [int(v) for v in self.translation],
        }


def lecture_hall_vertices(n: int) -> list:
    """``0, (0,..,0,n), (0,..,n-1,n), ..., (1,2,..,n)`` in that order."""
    if n < 1:
        raise ValueError("lecture-hall simplex needs n >= 1")
    return [tuple(i if i >= j else 0 for i in range(1, n + 1)) for j in range(n + 1, 0, -1)]


def lecture_hall_simplex(n: int) -> VPolytope:
    return VPolytope(lecture_hall_vertices(n))


def lecture_hall_facet(n: int) -> VPolytope:
    """Hull of the lecture-hall vertices other than the origin."""
    return VPolytope(lecture_hall_vertices(n)[1:])


def lecture_hall_count_direct(n: int, t: int) -> int:
    """Integer sequences with ``0 <= a_1 <= a_2/2 <= ... <= a_n/n <= t``, counted directly."""
    if n < 1 or t < 0:
        raise ValueError("need n >= 1 and t >= 0")

    def extend(i, prev):
        # prev = a_{i-1}; next entry a_i needs a_i/i >= prev/(i-1) and a_i <= i t
        if i > n:
            return 1
        start = 0 if i == 1 else -((-i * prev) // (i - 1))
        return sum(extend(i + 1, a) for a in range(start, i * t + 1))

    return extend(1, 0)


def drop_zero_vertex_lift(n: int) -> VPolytope:
    """Append ``n+1`` to each lecture-hall vertex in dimension ``n``.

    The result is the hull of the nonzero lecture-hall vertices in dimension
    ``n+1``; that set equality is checked before returning.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    lifted = [v + (n + 1,) for v in lecture_hall_vertices(n)]
    if set(lifted) != set(lecture_hall_vertices(n + 1)[1:]):
        raise AssertionError("lifted vertices differ from the nonzero vertices one dimension up")
    return VPolytope(lifted)


def simplex_to_lecturehall_certificate(n: int) -> TransformCertificate:
    """Lower-triangular ``-1`` matrix plus ``(v_2, ..., v_{n+1})`` with ``v_k = 2 + ... + k``.

    It sends the stack-sorting simplex of ``2 3 ... n 1`` onto the hull of the
    nonzero lecture-hall vertices; that is checked before returning.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    matrix = [[-1 if j <= i else 0 for j in range(n)] for i in range(n)]
    translation = [sum(range(2, k + 1)) for k in range(2, n + 2)]
    cert = TransformCertificate(matrix, translation)
    columns = [iterate(tau(n), n - i).entries for i in range(1, n + 1)]
    images = {tuple(int(v) for v in cert.apply(c)) for c in columns}
    if images != set(lecture_hall_vertices(n)[1:]):
        raise AssertionError("certificate does not map the simplex onto the lecture-hall facet")
    return cert


def identity_certificate(n: int) -> TransformCertificate:
    return TransformCertificate(exactla.identity(n), (0,) * n)


@dataclass(frozen=True)
class EquivalenceWitness:
    """First dilate where the certificate fails, and why."""

    t: int
    reason: str


def equivalence_witness(
    source: VPolytope, target: VPolytope, cert: TransformCertificate, tmax: int
) -> EquivalenceWitness | None:
    """``None`` if the certificate is a lattice bijection on dilates ``1..tmax``."""
    if source.ambient != cert.dim or target.ambient != cert.dim:
        raise ValueError("certificate dimension does not match the polytopes")
    if not exactla.is_unimodular([list(r) for r in cert.matrix]):
        raise ValueError("certificate matrix is not unimodular")
    mapped_vertices = {cert.apply(v) for v in source.vertices}
    if mapped_vertices != set(target.vertices):
        return EquivalenceWitness(1, "vertex sets do not correspond")
    for t in range(1, tmax + 1):
        src = list(lattice_points(source, t))
        image = {cert.apply(x, scale=t) for x in src}
        tgt = {exactla.as_vector(x) for x in lattice_points(target, t)}
        if len(image) != len(src):
            return EquivalenceWitness(t, "map is not injective on lattice points")
        if image != tgt:
            missing = sorted(tgt - image)
            extra = sorted(image - tgt)
            point = missing[0] if missing else extra[0]
            which = "missed" if missing else "outside the target"
            pretty = ",".join(exactla.format_rational(v) for v in point)
            return EquivalenceWitness(t, f"lattice point ({pretty}) {which}")
    return None


def verify_integral_equivalence(
    source: VPolytope, target: VPolytope, cert: TransformCertificate, tmax: int
) -> bool:
    return equivalence_witness(source, target, cert, tmax) is None


def stack_simplex_equivalence(n: int, tmax: int) -> bool:
    """Check the certificate between the stack-sorting simplex and the lecture-hall facet."""
    return verify_integral_equivalence(
        stack_simplex(n), lecture_hall_facet(n), simplex_to_lecturehall_certificate(n), tmax
    )
