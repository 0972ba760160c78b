"""Stack-sorting on permutations and the ``Ln1`` family."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations as _itertools_permutations


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection on ``{1, ..., n}`` in one-line notation."""

    entries: tuple

    def __post_init__(self):
        entries = tuple(int(v) for v in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValueError("a permutation needs at least one entry")
        if sorted(entries) != list(range(1, len(entries) + 1)):
            raise ValueError(f"not a permutation of 1..{len(entries)}: {entries}")

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Read ``"23451"`` (n <= 9) or ``"2,3,...,10,1"``."""
        text = text.strip()
        if "," in text:
            parts = [p.strip() for p in text.split(",")]
        else:
            parts = list(text)
        try:
            return cls(tuple(int(p) for p in parts))
        except ValueError as exc:
            raise ValueError(f"malformed permutation {text!r}: {exc}") from exc

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.entries)

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.entries, 1))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __str__(self):
        if self.n <= 9:
            return "".join(str(v) for v in self.entries)
        return ",".join(str(v) for v in self.entries)

    def __repr__(self):
        return f"Permutation({self})"

    def to_json(self) -> list:
        return list(self.entries)


@dataclass(frozen=True)
class SortOrbit:
    """The iterates ``s^0(p), s^1(p), ...`` up to and including the identity."""

    steps: tuple

    @property
    def index(self) -> int:
        """Exact sortability index: the number of passes needed."""
        return len(self.steps) - 1

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def to_json(self) -> dict:
        return {"steps": [p.to_json() for p in self.steps], "index": self.index}


def _stack_sort_entries(entries) -> tuple:
    stack = []
    out = []
    for v in entries:
        while stack and v > stack[-1]:
            out.append(stack.pop())
        stack.append(v)
    while stack:
        out.append(stack.pop())
    return tuple(out)


def stack_sort(p: Permutation) -> Permutation:
    """One pass of the last-in/first-out stack-sorting algorithm."""
    return Permutation(_stack_sort_entries(p.entries))


def sort_orbit(p: Permutation) -> SortOrbit:
    steps = [p]
    while not steps[-1].is_identity():
        steps.append(stack_sort(steps[-1]))
    return SortOrbit(tuple(steps))


def iterate(p: Permutation, times: int) -> Permutation:
    """``s^times(p)``; the identity is a fixed point so any ``times >= 0`` works."""
    if times < 0:
        raise ValueError("iteration count must be nonnegative")
    for _ in range(times):
        if p.is_identity():
            break
        p = stack_sort(p)
    return p


def is_exactly_t_sortable(p: Permutation, t: int) -> bool:
    return sort_orbit(p).index == t


def is_Ln1(p: Permutation) -> bool:
    """True iff ``p`` ends with ``n`` followed by ``1``.

    Defined as false for ``n < 3``: the family needs a prefix drawn from
    ``{2, ..., n-1}``.
    """
    n = p.n
    if n < 3:
        return False
    return p[n - 2] == n and p[n - 1] == 1


def enumerate_Ln1(n: int) -> list:
    """All ``(n-2)!`` permutations ``L n 1`` in lexicographic order."""
    if n < 3:
        raise ValueError("the Ln1 family needs n >= 3")
    return [Permutation(prefix + (n, 1)) for prefix in _itertools_permutations(range(2, n))]


def all_permutations(n: int) -> list:
    """Every element of S_n in lexicographic order."""
    if n < 1:
        raise ValueError("n must be positive")
    return [Permutation(e) for e in _itertools_permutations(range(1, n + 1))]


def tau(n: int) -> Permutation:
    """The permutation ``2 3 ... n 1``."""
    if n < 2:
        raise ValueError("tau needs n >= 2")
    return Permutation(tuple(range(2, n + 1)) + (1,))


def tail_form_check(p: Permutation, i: int) -> bool:
    """Does ``s^i(p)`` end with ``(n-i), 1, (n-i+1), ..., n``?

    ``p`` must lie in the Ln1 family and ``1 <= i <= n-2``.
    """
    if not is_Ln1(p):
        raise ValueError(f"{p} is not an Ln1 permutation")
    n = p.n
    if not 1 <= i <= n - 2:
        raise ValueError(f"iteration {i} outside 1..{n - 2}")
    expected = (n - i, 1) + tuple(range(n - i + 1, n + 1))
    return iterate(p, i).entries[-len(expected):] == expected


def descent_count(p: Permutation) -> int:
    e = p.entries
    return sum(e[i] > e[i + 1] for i in range(len(e) - 1))


def descent_distribution(n: int) -> tuple:
    """Number of permutations of ``[n]`` with ``k`` descents, for ``k = 0..n-1``."""
    counts = [0] * n
    for p in all_permutations(n):
        counts[descent_count(p)] += 1
    return tuple(counts)
