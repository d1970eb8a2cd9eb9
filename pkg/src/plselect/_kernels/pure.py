"""Pure-Python kernels; reference semantics for the compiled versions.

Both implementations must be observationally identical: same results, same
visit counts, same traversal order.  Keep any change here in lockstep with
``_fast.pyx``.
"""

from __future__ import annotations

MAX_CELLS = 128


def crooked_span_violation(seq, a_val, b_val, c_val, d_val):
    """First span from an ``a_val`` position to a later ``b_val`` position
    that has no intermediate ``c_val`` position followed by a ``d_val``
    position.  Returns ``(a, b)`` or None.

    One left-to-right sweep: ``best`` is the largest c-position that has some
    d-position after it (and before the current point); a span ending at ``t``
    is satisfiable iff its start lies strictly left of ``best``.
    """
    last_a = -1
    last_c = -1
    best = -1
    for t, val in enumerate(seq):
        if val == b_val and last_a >= 0 and last_a >= best:
            return (last_a, t)
        if val == d_val and last_c >= 0 and last_c > best:
            best = last_c
        if val == c_val:
            last_c = t
        if val == a_val:
            last_a = t
    return None


def cover_search(allowed, kinds, ends):
    """Depth-first search for a cell labeling, lexicographically least.

    ``allowed[t]`` is a bitset over label masks 1..7 (bit ``m`` set iff mask
    ``m`` is admissible for cell ``t``).  ``kinds[t]`` is 0 for a vertex and 1
    for an edge; for an edge, ``ends[t]`` gives the positions of its two
    endpoint vertices earlier in the order, and the edge mask must be a
    subset of both endpoint masks.  Returns ``(assignment, visited)`` where
    ``assignment`` is None when the search space is exhausted; ``visited``
    counts accepted node expansions either way.
    """
    n = len(allowed)
    if n > MAX_CELLS:
        raise ValueError(f"cover_search is capped at {MAX_CELLS} cells, got {n}")
    if n == 0:
        return [], 0
    assign = [0] * n
    nxt = [1] * n
    visited = 0
    t = 0
    while True:
        if t == n:
            return list(assign), visited
        m = nxt[t]
        found = 0
        while m <= 7:
            if (allowed[t] >> m) & 1:
                if kinds[t] == 1:
                    i, j = ends[t]
                    if (m & ~assign[i]) or (m & ~assign[j]):
                        m += 1
                        continue
                found = m
                break
            m += 1
        if found:
            visited += 1
            assign[t] = found
            nxt[t] = found + 1
            t += 1
            if t < n:
                nxt[t] = 1
        else:
            assign[t] = 0
            if t == 0:
                return None, visited
            t -= 1
