"""Crooked chain patterns: generation, recognition, minimal search.

A chain pattern over ``n`` links is a walk ``s(0..m-1)`` on the integers
``1..n`` that starts at 1, ends at n, moves by at most one link per step, and
visits every link.  The pattern is *crooked* when every span doubles back:
for all positions ``a < b`` with ``|s(b) - s(a)| >= 2`` there are positions
``a < c < d < b`` such that ``s(c)`` is one step from ``s(b)`` toward
``s(a)`` and ``s(d)`` is one step from ``s(a)`` toward ``s(b)``.

The recognizer :func:`is_crooked` runs one linear sweep per ordered value
pair, so it is O(n^2 * m) instead of the O(m^3)-ish direct reading of the
quantifier; :func:`is_crooked_naive` keeps the direct reading for
cross-checking.  The generator builds walks recursively (go almost to the far
end, return almost to the start, then cross), duplicating junction values so
that every turning point is a two-edge plateau—turn vertices of the
associated interval complex then have plateau neighbors on both sides, which
downstream pattern searches rely on.  Levels beyond 1 compose a fresh crooked
walk over the positions of the previous level; the composite is re-checked
with the recognizer before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .domain import Complex1D, make_interval
from .errors import InvalidParameterError, PLSelectError
from .plfun import PLFunction
from . import _kernels


@dataclass(frozen=True)
class CrookedPattern:
    """A link walk; ``entries`` are 1-based link indices."""

    links: int
    entries: tuple[int, ...]

    def __post_init__(self):
        n, s = self.links, self.entries
        if n < 2:
            raise InvalidParameterError("a chain pattern needs at least 2 links")
        if not s or s[0] != 1 or s[-1] != n:
            raise InvalidParameterError("pattern must start at link 1 and end at link n")
        if set(s) != set(range(1, n + 1)):
            raise InvalidParameterError("pattern must visit every link exactly")
        for i in range(len(s) - 1):
            if abs(s[i + 1] - s[i]) > 1:
                raise InvalidParameterError(f"step {i} jumps more than one link")

    def __len__(self) -> int:
        return len(self.entries)


def is_crooked(entries, links: int | None = None) -> bool:
    """Does the walk satisfy the doubling-back condition for every span?"""
    return first_crooked_violation(entries) is None


def first_crooked_violation(entries) -> tuple[int, int] | None:
    """First span (a, b) violating crookedness in sweep order, else None."""
    seq = list(entries)
    values = sorted(set(seq))
    for x in values:
        for y in values:
            if y < x + 2:
                continue
            hit = _kernels.crooked_span_violation(seq, x, y, y - 1, x + 1)
            if hit is not None:
                return hit
            hit = _kernels.crooked_span_violation(seq, y, x, x + 1, y - 1)
            if hit is not None:
                return hit
    return None


def is_crooked_naive(entries) -> bool:
    """Direct quantifier reading; quadratic-cubic, for cross-checks only."""
    seq = list(entries)
    m = len(seq)
    for a in range(m):
        for b in range(a + 1, m):
            if abs(seq[b] - seq[a]) < 2:
                continue
            step = 1 if seq[b] > seq[a] else -1
            c_val = seq[b] - step
            d_val = seq[a] + step
            ok = False
            for c in range(a + 1, b):
                if seq[c] != c_val:
                    continue
                if any(seq[d] == d_val for d in range(c + 1, b)):
                    ok = True
                    break
            if not ok:
                return False
    return True


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------


def crooked_walk(a: int, b: int) -> list[int]:
    """A crooked walk from a to b with two-edge plateaus at every turn."""
    dist = abs(b - a)
    if dist == 0:
        return [a]
    if dist == 1:
        return [a, b]
    step = 1 if b > a else -1
    if dist == 2:
        mid = a + step
        return [a, mid, mid, mid, b]
    p, q = b - step, a + step
    return (
        crooked_walk(a, p)
        + [p]
        + crooked_walk(p, q)
        + [q]
        + crooked_walk(q, b)
    )


def _compose(outer: list[int], inner: list[int]) -> list[int]:
    """inner maps positions to 1..len(outer); outer maps those to links."""
    return [outer[i - 1] for i in inner]


def associated_interval(entries) -> Complex1D:
    """Interval complex with one vertex per walk position, uniform on [0,1]."""
    m = len(entries)
    if m < 2:
        raise InvalidParameterError("walk too short for an interval complex")
    return make_interval([Fraction(i, m - 1) for i in range(m)])


def pattern_function(pattern: CrookedPattern) -> PLFunction:
    """The walk as a PL map onto [0,1]: position i maps to (s_i - 1)/(n - 1)."""
    dom = associated_interval(pattern.entries)
    n = pattern.links
    return PLFunction(dom, tuple(Fraction(s - 1, n - 1) for s in pattern.entries))


def generate_crooked_chain(n: int, level: int) -> tuple[CrookedPattern, Complex1D]:
    """Generate a chain pattern over ``n`` links at the given refinement depth.

    Level 0 is the straight pattern 1..n (not crooked for n >= 3); level 1 is
    one recursive crooked walk; level k composes k such walks.  Every level
    >= 1 output is verified against :func:`is_crooked` before being returned.
    """
    if n < 2:
        raise InvalidParameterError("need at least 2 links")
    if level < 0:
        raise InvalidParameterError("level must be nonnegative")
    if level == 0:
        walk = list(range(1, n + 1))
    else:
        walk = crooked_walk(1, n)
        for _ in range(level - 1):
            outer = walk
            inner = crooked_walk(1, len(outer))
            walk = _compose(outer, inner)
        if not is_crooked(walk):
            raise PLSelectError(
                f"internal error: generated level-{level} walk fails the crooked check"
            )
    pattern = CrookedPattern(links=n, entries=tuple(walk))
    return pattern, associated_interval(walk)


def minimal_crooked_pattern(n: int, max_length: int = 24) -> CrookedPattern:
    """Shortest crooked pattern over ``n`` links, by length-ordered search.

    Tries lengths in increasing order; within a length, walks are explored in
    lexicographic order of their entries, so the result is deterministic.
    Intended for small ``n`` (the search is exponential in the length).
    """
    if n < 2:
        raise InvalidParameterError("need at least 2 links")
    for length in range(n, max_length + 1):
        found = _search_length(n, length)
        if found is not None:
            return CrookedPattern(links=n, entries=tuple(found))
    raise InvalidParameterError(
        f"no crooked pattern over {n} links within length {max_length}"
    )


def _search_length(n: int, length: int) -> list[int] | None:
    walk = [1]

    def go(pos: int) -> list[int] | None:
        if pos == length:
            if walk[-1] == n and is_crooked(walk):
                return list(walk)
            return None
        cur = walk[-1]
        remaining = length - pos - 1
        for nxt in (cur - 1, cur, cur + 1):
            if not 1 <= nxt <= n:
                continue
            if n - nxt > remaining:  # cannot reach the last link in time
                continue
            walk.append(nxt)
            hit = go(pos + 1)
            if hit is not None:
                return hit
            walk.pop()
        return None

    return go(1) if length >= 2 else None
