"""Mechanical verification of the stack-sorting simplex results on finite grids."""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

from . import exactla
from .ehrhart import (
    INTERIOR,
    count_lattice,
    ehrhart_polynomial,
    floor_identity_sides,
    gorenstein_certificate,
    hstar_vector,
    interior_recurrence_sides,
    lattice_points,
    poly_eval,
    projection_count_sides,
    rational_grid,
    real_gorenstein_sides,
    recurrence_sides,
    shifted_count,
    stack_simplex,
    translation_count_sides,
)
from .equivalence import (
    TransformCertificate,
    equivalence_witness,
    drop_zero_vertex_lift,
    lecture_hall_count_direct,
    lecture_hall_facet,
    lecture_hall_simplex,
    simplex_to_lecturehall_certificate,
)
from .permutations import (
    Permutation,
    all_permutations,
    descent_distribution,
    enumerate_Ln1,
    is_exactly_t_sortable,
    is_Ln1,
    iterate,
    sort_orbit,
    stack_sort,
    tail_form_check,
    tau,
)
from .polytope import VPolytope, normalized_volume

# grid caps taken from the acceptance targets; nmax/tmax can only shrink them
LAMBDA_NUMERATOR_FACTOR = 3


@dataclass
class CheckResult:
    id: str
    anchor: str
    grid: str
    passed: bool
    checked: int
    witness: str | None = None
    wall_time: float = 0.0

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "anchor": self.anchor,
            "grid": self.grid,
            "passed": self.passed,
            "checked": self.checked,
            "witness": self.witness,
        }


@dataclass
class VerificationReport:
    entries: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def summary(self) -> dict:
        npass = sum(e.passed for e in self.entries)
        return {"passed": npass, "failed": len(self.entries) - npass, "total": len(self.entries)}

    def to_json(self, timings: bool = True) -> dict:
        out = {
            "status": "PASS" if self.passed else "FAIL",
            "summary": self.summary,
            "entries": [e.to_json() for e in self.entries],
        }
        if timings:
            out["timings"] = {e.id: round(e.wall_time, 4) for e in self.entries}
        return out

    def table(self, timings: bool = True) -> str:
        width = max((len(e.id) for e in self.entries), default=2)
        lines = []
        for e in self.entries:
            status = "PASS" if e.passed else "FAIL"
            line = f"{status}  {e.id:<{width}}  {e.anchor} [{e.grid}]"
            if timings:
                line += f"  {e.wall_time:.2f}s"
            lines.append(line)
            if e.witness:
                lines.append(f"      witness: {e.witness}")
        s = self.summary
        overall = "PASS" if self.passed else "FAIL"
        lines.append(f"{overall}: {s['passed']}/{s['total']} checks passed")
        return "\n".join(lines)


class _Tally:
    """Counts checked instances and keeps the first failure."""

    def __init__(self):
        self.checked = 0
        self.witness = None

    def check(self, ok: bool, label) -> None:
        self.checked += 1
        if not ok and self.witness is None:
            self.witness = label() if callable(label) else str(label)

    def result(self):
        return self.checked, self.witness


def _fmt(lam) -> str:
    return exactla.format_rational(lam)


# --------------------------------------------------------------------- checks


def check_stack_sort_examples(nmax, tmax, seed, **_):
    t = _Tally()
    t.check(str(stack_sort(Permutation.parse("213"))) == "123", "s(213) != 123")
    orbit = [str(q) for q in sort_orbit(tau(5)).steps]
    t.check(orbit == ["23451", "23415", "23145", "21345", "12345"], f"orbit of 23451 was {orbit}")
    return t.result()


def check_orbit_length_bound(nmax, tmax, seed, **_):
    t = _Tally()
    for n in range(1, min(nmax, 7) + 1):
        for p in all_permutations(n):
            t.check(sort_orbit(p).index <= n - 1, f"{p} needs more than {n - 1} passes")
    return t.result()


def check_maximal_sortability(nmax, tmax, seed, **_):
    t = _Tally()
    for n in range(3, min(nmax, 7) + 1):
        maximal = 0
        for p in all_permutations(n):
            exact = is_exactly_t_sortable(p, n - 1)
            maximal += exact
            t.check(is_Ln1(p) == exact, f"{p}: Ln1={is_Ln1(p)}, exactly {n - 1}-sortable={exact}")
        t.check(len(enumerate_Ln1(n)) == factorial(n - 2), f"|L^{n}| != {factorial(n - 2)}")
        t.check(maximal == factorial(n - 2), f"n={n}: {maximal} maximal permutations")
    return t.result()


def check_max_split(nmax, tmax, seed, samples=200, **_):
    rng = random.Random(seed)
    t = _Tally()
    for _ in range(samples):
        n = rng.randint(1, max(nmax, 2))
        entries = list(range(1, n + 1))
        rng.shuffle(entries)
        p = Permutation(entries)
        cut = entries.index(n)
        left, right = entries[:cut], entries[cut + 1:]

        def sorted_part(part):
            # stack-sort a sequence of distinct values by relabelling to 1..k
            if not part:
                return []
            ranks = {v: i + 1 for i, v in enumerate(sorted(part))}
            back = {i: v for v, i in ranks.items()}
            out = stack_sort(Permutation([ranks[v] for v in part]))
            return [back[v] for v in out.entries]

        expected = sorted_part(left) + sorted_part(right) + [n]
        t.check(list(stack_sort(p).entries) == expected, f"split identity fails for {p}")
    return t.result()


def check_iterate_tail_form(nmax, tmax, seed, **_):
    t = _Tally()
    for n in range(3, min(nmax, 6) + 1):
        for p in enumerate_Ln1(n):
            for i in range(1, n - 1):
                t.check(tail_form_check(p, i), f"s^{i}({p}) = {iterate(p, i)}")
    return t.result()


def check_final_iterates(nmax, tmax, seed, **_):
    t = _Tally()
    for n in range(4, min(nmax, 7) + 1):
        a = (2, 3, 1) + tuple(range(4, n + 1))
        b = (2, 1) + tuple(range(3, n + 1))
        for p in enumerate_Ln1(n):
            t.check(iterate(p, n - 3).entries == a, f"s^{n - 3}({p}) = {iterate(p, n - 3)}")
            t.check(iterate(p, n - 2).entries == b, f"s^{n - 2}({p}) = {iterate(p, n - 2)}")
    return t.result()


def check_tau_iterates(nmax, tmax, seed, **_):
    t = _Tally()
    for n in range(2, 10):
        for i in range(1, n):
            expected = tuple(range(2, n - i + 1)) + (1,) + tuple(range(n - i + 1, n + 1))
            got = iterate(tau(n), i)
            t.check(got.entries == expected, f"s^{i}(tau_{n}) = {got}")
    return t.result()


def check_orbit_simplex(nmax, tmax, seed, **_):
    t = _Tally()
    for n in range(3, min(nmax, 6) + 1):
        for p in enumerate_Ln1(n):
            poly = VPolytope(q.entries for q in sort_orbit(p).steps)
            t.check(
                poly.affine_dim == n - 1 and poly.is_simplex and len(poly.points) == n,
                f"conv orbit of {p}: dim {poly.affine_dim}, simplex {poly.is_simplex}",
            )
    return t.result()


def check_hollowness(nmax, tmax, seed, **_):
    t = _Tally()
    for n in range(2, min(nmax, 6) + 1):
        simplex = stack_simplex(n)
        t.check(count_lattice(simplex, 1, INTERIOR) == 0, f"interior point in simplex n={n}")
        verts = set(simplex.vertices)
        identity = Permutation.identity(n).entries
        e_index = simplex.vertices.index(exactla.as_vector(identity))
        for x in lattice_points(simplex, 1):
            if exactla.as_vector(x) in verts:
                continue
            bary = simplex.barycentric(x)
            t.check(
                x[0] == 2 and bary[e_index] == 0,
                f"non-vertex lattice point {x} of simplex n={n} is off the facet opposite e",
            )
    return t.result()


def check_ehrhart_polynomial(nmax, tmax, seed, **_):
    t = _Tally()
    for n in range(2, min(nmax, 6) + 1):
        simplex = stack_simplex(n)
        for s in range(0, min(tmax, 4) + 1):
            got = count_lattice(simplex, s)
            t.check(got == (s + 1) ** (n - 1), f"L(n={n}; t={s}) = {got}")
        poly = ehrhart_polynomial(simplex)
        binom = tuple(Fraction(comb(n - 1, k)) for k in range(n))
        t.check(poly == binom, f"n={n}: coefficients {[_fmt(c) for c in poly]}")
    return t.result()


def check_lecture_hall_count(nmax, tmax, seed, **_):
    t = _Tally()
    for n in range(1, min(nmax, 5) + 1):
        lh = lecture_hall_simplex(n)
        for s in range(0, min(tmax, 4) + 1):
            direct = lecture_hall_count_direct(n, s)
            counted = count_lattice(lh, s)
            t.check(direct == counted == (s + 1) ** n, f"n={n}, t={s}: direct {direct}, counted {counted}")
    return t.result()


def check_lecture_hall_recursion(nmax, tmax, seed, **_):
    t = _Tally()
    for n in range(1, min(nmax, 4) + 1):
        lh = lecture_hall_simplex(n)
        q = drop_zero_vertex_lift(n)
        for s in range(0, min(tmax, 3) + 1):
            a, b = count_lattice(lh, s), count_lattice(q, s)
            t.check(a == b, f"n={n}, t={s}: {a} vs {b}")
    return t.result()


def check_integral_equivalence(nmax, tmax, seed, corrupt_certificate=False, **_):
    t = _Tally()
    for n in range(2, min(nmax, 5) + 1):
        cert = simplex_to_lecturehall_certificate(n)
        if corrupt_certificate:
            bumped = (cert.translation[0] + 1,) + cert.translation[1:]
            cert = TransformCertificate(cert.matrix, bumped)
        simplex, facet = stack_simplex(n), lecture_hall_facet(n)
        w = equivalence_witness(simplex, facet, cert, min(tmax, 3))
        t.check(w is None, lambda: f"n={n}, t={w.t}: {w.reason}")
        lh = lecture_hall_simplex(n - 1)
        for s in range(0, min(tmax, 4) + 1):
            chain = (
                count_lattice(simplex, s),
                count_lattice(facet, s),
                count_lattice(lh, s),
                (s + 1) ** (n - 1),
            )
            t.check(len(set(chain)) == 1, f"n={n}, t={s}: counts {chain}")
    for n in range(2, 9):
        cert = simplex_to_lecturehall_certificate(n)
        t.check(exactla.is_unimodular([list(r) for r in cert.matrix]), f"certificate n={n} not unimodular")
    return t.result()


def check_worked_example(nmax, tmax, seed, **_):
    t = _Tally()
    lam = Fraction(5, 2)
    direct = shifted_count(3, lam)
    rec_lhs, rec_rhs = recurrence_sides(2, lam)
    proj_lhs, proj_rhs = projection_count_sides(3, lam, tau(3).entries)
    routes = (direct, rec_rhs, proj_rhs)
    t.check(routes == (12, 12, 12) and rec_lhs == proj_lhs == 12, f"routes gave {routes}")
    return t.result()


def _grid_check(sides, nmax, cap, label):
    t = _Tally()
    for n in range(2, min(nmax, cap) + 1):
        for lam in rational_grid(n, LAMBDA_NUMERATOR_FACTOR):
            lhs, rhs = sides(n, lam)
            t.check(lhs == rhs, f"{label} n={n}, lambda={_fmt(lam)}: {lhs} vs {rhs}")
    return t.result()


def check_projection(nmax, tmax, seed, **_):
    t = _Tally()
    for n in range(2, min(nmax, 4) + 1):
        for p in (tau(n).entries, Permutation.identity(n).entries):
            for lam in rational_grid(n, LAMBDA_NUMERATOR_FACTOR):
                lhs, rhs = projection_count_sides(n, lam, p)
                t.check(lhs == rhs, f"n={n}, p={p}, lambda={_fmt(lam)}: {lhs} vs {rhs}")
    return t.result()


def check_translation(nmax, tmax, seed, **_):
    t = _Tally()
    for n in range(2, min(nmax, 4) + 1):
        for s in range(0, 3 * n + 1):
            lhs, rhs = translation_count_sides(n, s)
            t.check(lhs == rhs, f"n={n}, t={s}: {lhs} vs {rhs}")
    return t.result()


def check_recurrence(nmax, tmax, seed, **_):
    return _grid_check(recurrence_sides, nmax, 4, "closed")


def check_interior_recurrence(nmax, tmax, seed, **_):
    return _grid_check(interior_recurrence_sides, nmax, 4, "interior")


def check_real_gorenstein(nmax, tmax, seed, **_):
    return _grid_check(real_gorenstein_sides, nmax, 4, "shift by 2")


def check_real_gorenstein_lattice_slices(nmax, tmax, seed, **_):
    """The shift-by-2 relation on dilates lambda with (n-1)*lambda integral."""
    t = _Tally()
    for n in range(2, min(nmax, 4) + 1):
        for lam in rational_grid(n, LAMBDA_NUMERATOR_FACTOR):
            if ((n - 1) * lam).denominator != 1:
                continue
            lhs, rhs = real_gorenstein_sides(n, lam)
            t.check(lhs == rhs, f"n={n}, lambda={_fmt(lam)}: {lhs} vs {rhs}")
    return t.result()


def check_gorenstein_index(nmax, tmax, seed, **_):
    t = _Tally()
    for n in range(2, min(nmax, 6) + 1):
        simplex = stack_simplex(n)
        cert = gorenstein_certificate(simplex)
        t.check(cert.index == 2 and cert.method == "symbolic", f"n={n}: {cert}")
        i1, i2 = count_lattice(simplex, 1, INTERIOR), count_lattice(simplex, 2, INTERIOR)
        t.check((i1, i2) == (0, 1), f"n={n}: interior counts at 1, 2 are {i1}, {i2}")
    return t.result()


def check_floor_identity(nmax, tmax, seed, **_):
    t = _Tally()
    for n in range(2, min(nmax, 4) + 1):
        for s in range(0, 13):
            lhs, rhs = floor_identity_sides(n, s)
            t.check(lhs == rhs, f"n={n}, t={s}: {lhs} vs {rhs}")
    return t.result()


def check_hstar(nmax, tmax, seed, **_):
    t = _Tally()
    for n in range(3, min(nmax, 6) + 1):
        simplex = stack_simplex(n)
        h = hstar_vector(simplex)
        expected = descent_distribution(n - 1)
        vol = normalized_volume(simplex)
        t.check(h == expected, f"n={n}: h* {h} vs descents {expected}")
        t.check(sum(h) == vol == factorial(n - 1), f"n={n}: sum h* {sum(h)}, volume {vol}")
    return t.result()


def check_reciprocity(nmax, tmax, seed, **_):
    t = _Tally()
    for n in range(2, min(nmax, 5) + 1):
        simplex = stack_simplex(n)
        poly = ehrhart_polynomial(simplex)
        for s in range(1, min(tmax, 3) + 1):
            lhs = (-1) ** (n - 1) * poly_eval(poly, -s)
            rhs = count_lattice(simplex, s, INTERIOR)
            t.check(lhs == rhs, f"n={n}, t={s}: {lhs} vs {rhs}")
    return t.result()


# (id, anchor, grid, function)
CHECKS = [
    ("stack-sort-examples", "one pass of the stack: 213 -> 123, orbit of 23451", "fixed", check_stack_sort_examples),
    ("orbit-length", "every permutation of [n] sorts in at most n-1 passes", "n<=min(nmax,7)", check_orbit_length_bound),
    ("maximal-iff-Ln1", "Ln1 iff exactly (n-1)-stack-sortable; |L^n| = (n-2)!", "3<=n<=min(nmax,7)", check_maximal_sortability),
    ("max-split", "s(LxR) = s(L)s(R)x for x the maximum", "200 random permutations", check_max_split),
    ("Ln1-tail-form", "s^i of an Ln1 permutation ends (n-i)1(n-i+1)...n", "3<=n<=min(nmax,6)", check_iterate_tail_form),
    ("Ln1-final-iterates", "s^(n-3) = 2314..n and s^(n-2) = 213..n on Ln1", "4<=n<=min(nmax,7)", check_final_iterates),
    ("tau-iterates", "s^i(23..n1) = 23..(n-i)1(n-i+1)..n", "2<=n<=9", check_tau_iterates),
    ("Ln1-orbit-simplex", "orbit of an Ln1 permutation spans an (n-1)-simplex", "3<=n<=min(nmax,6)", check_orbit_simplex),
    ("hollowness", "stack-sorting simplex is hollow; extra points lie opposite e", "2<=n<=min(nmax,6)", check_hollowness),
    ("ehrhart-polynomial", "lattice points of the t-th dilate number (t+1)^(n-1)", "2<=n<=min(nmax,6), t<=min(tmax,4)", check_ehrhart_polynomial),
    ("lecture-hall-count", "lecture-hall simplex counts (t+1)^n, direct and enumerated", "n<=min(nmax,5), t<=min(tmax,4)", check_lecture_hall_count),
    ("lecture-hall-recursion", "lecture-hall simplex vs lifted hull of nonzero vertices", "n<=min(nmax,4), t<=min(tmax,3)", check_lecture_hall_recursion),
    ("integral-equivalence", "unimodular bijection onto the lecture-hall facet", "2<=n<=min(nmax,5), t<=min(tmax,3); unimodular n<=8", check_integral_equivalence),
    ("worked-example", "(5/2)-dilate of the shifted n=3 simplex has 12 points by three routes", "fixed", check_worked_example),
    ("projection", "zeroing the last coordinate preserves real-dilate counts", "2<=n<=min(nmax,4), rational grid", check_projection),
    ("translation", "shift by 23..n(n+1) vs 23..n1 agree at dilates t/n", "2<=n<=min(nmax,4), t<=3n", check_translation),
    ("real-recurrence", "closed count in dim n+1 = sum over k/n slices in dim n", "2<=n<=min(nmax,4), rational grid", check_recurrence),
    ("interior-recurrence", "interior count in dim n+1 = sum over interior k/n slices", "2<=n<=min(nmax,4), rational grid", check_interior_recurrence),
    ("real-gorenstein", "closed count at lambda = interior count at lambda+2, all rational lambda", "2<=n<=min(nmax,4), rational grid", check_real_gorenstein),
    ("real-gorenstein-slices", "closed count at lambda = interior count at lambda+2, (n-1)lambda integral", "2<=n<=min(nmax,4), rational grid", check_real_gorenstein_lattice_slices),
    ("gorenstein-index", "stack-sorting simplex is Gorenstein of index 2", "2<=n<=min(nmax,6)", check_gorenstein_index),
    ("floor-identity", "reindexing of interior slice sums across floor/ceiling bounds", "2<=n<=min(nmax,4), t<=12", check_floor_identity),
    ("hstar-eulerian", "h* = Eulerian numbers of order n-1; sum = normalized volume (n-1)!", "3<=n<=min(nmax,6)", check_hstar),
    ("reciprocity", "(-1)^(n-1) L(-t) = interior count of the t-th dilate", "2<=n<=min(nmax,5), t<=min(tmax,3)", check_reciprocity),
]

CHECK_IDS = [c[0] for c in CHECKS]


def _run_one(args):
    index, nmax, tmax, seed, corrupt = args
    cid, anchor, grid, fn = CHECKS[index]
    start = time.perf_counter()
    checked, witness = fn(nmax, tmax, seed, corrupt_certificate=corrupt)
    elapsed = time.perf_counter() - start
    return CheckResult(cid, anchor, grid, witness is None, checked, witness, elapsed)


def run_verification(
    nmax: int = 5,
    tmax: int = 3,
    seed: int = 0,
    jobs: int = 1,
    only=None,
    corrupt_certificate: bool = False,
) -> VerificationReport:
    """Run every check (or those named in ``only``) and collect a report."""
    if nmax < 2:
        raise ValueError("nmax must be at least 2")
    if tmax < 1:
        raise ValueError("tmax must be at least 1")
    selected = [i for i, c in enumerate(CHECKS) if only is None or c[0] in only]
    tasks = [(i, nmax, tmax, seed, corrupt_certificate) for i in selected]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = [_run_one(task) for task in tasks]
    return VerificationReport(results)
