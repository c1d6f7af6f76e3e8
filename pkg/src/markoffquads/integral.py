"""Exact arithmetic on positive integer Markoff quads.

Everything here is plain Python int (arbitrary precision); no floating
point.  Flips of positive integer quads stay positive and integral: the
replaced entry and its substitute multiply to (sum of the other three)^2.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, InvalidQuadError


@dataclass(frozen=True)
class IntegerQuad:
    """Nonnegative integer solution of (a+b+c+d)^2 = abcd, exact."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise DomainError(f"entry {name}={v!r} is not an int")
            if v < 0:
                raise DomainError(f"entry {name}={v} is negative")
        a, b, c, d = self.values()
        if (a + b + c + d) ** 2 != a * b * c * d:
            raise InvalidQuadError(f"({a},{b},{c},{d}) fails (a+b+c+d)^2 = abcd")

    @classmethod
    def from_values(cls, values) -> "IntegerQuad":
        vals = tuple(values)
        if len(vals) != 4:
            raise DomainError(f"expected 4 entries, got {len(vals)}")
        return cls(*vals)

    def values(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def sorted_values(self) -> tuple[int, int, int, int]:
        return tuple(sorted(self.values()))


def int_flip(q: IntegerQuad, i: int) -> IntegerQuad:
    """Exact flip at 1-based index i."""
    if i not in (1, 2, 3, 4):
        raise DomainError(f"entry index must be 1..4, got {i}")
    vals = list(q.values())
    others = [v for j, v in enumerate(vals) if j != i - 1]
    vals[i - 1] = others[0] * others[1] * others[2] - 2 * sum(others) - vals[i - 1]
    return IntegerQuad.from_values(vals)


def int_reduce(q: IntegerQuad) -> tuple[IntegerQuad, list[int]]:
    """Flip the maximal entry while that strictly decreases it.

    Only a maximal entry can strictly decrease (the replaced entry and
    its substitute multiply to the square of the rest), and entries
    strictly shrink, so this terminates.  Ties d' = d are terminal.
    Returns the terminal quad sorted ascending plus the flip word
    (1-based positions in the input orientation).
    """
    vals = list(q.values())
    if min(vals) <= 0:
        raise DomainError("reduction needs all entries positive")
    word: list[int] = []
    while True:
        m = max(range(4), key=lambda j: (vals[j], -j))
        others = [v for j, v in enumerate(vals) if j != m]
        new = others[0] * others[1] * others[2] - 2 * sum(others) - vals[m]
        if new >= vals[m]:
            return IntegerQuad.from_values(sorted(vals)), word
        vals[m] = new
        word.append(m + 1)


# Search box from the reduction argument: after sorting, the largest
# entry is at most the sum of the others, forcing a <= 4 and
# 5 <= ab <= 36; bounding (a+b+2d)^2 >= ab_min (d - a - b_max) d then
# caps d per value of a.  Per a: (b_min, b_max, d_max).
SEARCH_BOUNDS = {
    1: (5, 36, 337),
    2: (3, 18, 101),
    3: (3, 12, 40),
    4: (4, 9, 26),
}


@lru_cache(maxsize=1)
def _fundamental() -> tuple[IntegerQuad, ...]:
    found = set()
    for a, (blo, bhi, dmax) in SEARCH_BOUNDS.items():
        for b in range(max(a, blo), bhi + 1):
            for d in range(b, dmax + 1):
                for c in range(max(b, d - a - b), d + 1):
                    if (a + b + c + d) ** 2 == a * b * c * d:
                        found.add((a, b, c, d))
    return tuple(IntegerQuad.from_values(v) for v in sorted(found))


def enumerate_fundamental() -> list[IntegerQuad]:
    """All reduced positive integer quads, by exhaustive search over the
    reduction bounds.

    The search returns nine quads.  Besides the classical eight it finds
    (2, 4, 6, 12): a valid solution (24^2 = 576 = 2*4*6*12) that is
    flip-rigid (the largest entry's flip is a self-flip, every other
    flip increases), hence reduced, and whose flip orbit is disjoint
    from the other roots'.
    """
    return list(_fundamental())


def classify(q: IntegerQuad) -> tuple[IntegerQuad, list[int]]:
    """Reduce and match against the fundamental table; returns the root
    and the flip word taken.  A reduced quad outside the table means the
    input was not a positive integer quad."""
    reduced, word = int_reduce(q)
    table = {r.values() for r in _fundamental()}
    if reduced.values() not in table:
        raise InvalidQuadError(
            f"reduced form {reduced.values()} is not a fundamental quad"
        )
    return reduced, word


def enumerate_integral_below(B: int) -> list[IntegerQuad]:
    """Every positive integer quad with max entry <= B, as sorted
    tuples, by breadth-first flip closure from the fundamental roots."""
    if B < 4:
        raise DomainError("need B >= 4 (the smallest quad is (4,4,4,4))")
    seen: set[tuple[int, int, int, int]] = set()
    queue = deque()
    for root in _fundamental():
        v = root.sorted_values()
        if max(v) <= B and v not in seen:
            seen.add(v)
            queue.append(v)
    while queue:
        vals = queue.popleft()
        for i in range(4):
            others = [v for j, v in enumerate(vals) if j != i]
            new = others[0] * others[1] * others[2] - 2 * sum(others) - vals[i]
            nxt = list(vals)
            nxt[i] = new
            canon = tuple(sorted(nxt))
            if max(canon) <= B and canon not in seen:
                seen.add(canon)
                queue.append(canon)
    return [IntegerQuad.from_values(v) for v in sorted(seen)]
