# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels: crooked-span sweep and label-cover DFS.

Must stay observationally identical to ``pure.py``: same results, same visit
counts, same traversal order.
"""

from cpython cimport array
import array as _array

DEF MAX_CELLS = 128


def crooked_span_violation(seq, int a_val, int b_val, int c_val, int d_val):
    cdef array.array arr = _array.array("i", seq)
    cdef int[::1] s = arr
    cdef Py_ssize_t m = s.shape[0]
    cdef Py_ssize_t t
    cdef long last_a = -1, last_c = -1, best = -1
    cdef int val
    for t in range(m):
        val = s[t]
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
    cdef Py_ssize_t n = len(allowed)
    if n > MAX_CELLS:
        raise ValueError(f"cover_search is capped at {MAX_CELLS} cells, got {n}")
    if n == 0:
        return [], 0
    cdef int c_allowed[MAX_CELLS]
    cdef int c_kind[MAX_CELLS]
    cdef int end_i[MAX_CELLS]
    cdef int end_j[MAX_CELLS]
    cdef int assign[MAX_CELLS]
    cdef int nxt[MAX_CELLS]
    cdef Py_ssize_t t
    for t in range(n):
        c_allowed[t] = allowed[t]
        c_kind[t] = kinds[t]
        if c_kind[t] == 1:
            end_i[t] = ends[t][0]
            end_j[t] = ends[t][1]
        else:
            end_i[t] = -1
            end_j[t] = -1
        assign[t] = 0
        nxt[t] = 1
    cdef long visited = 0
    cdef int m, found
    t = 0
    while True:
        if t == n:
            return [assign[k] for k in range(n)], visited
        m = nxt[t]
        found = 0
        while m <= 7:
            if (c_allowed[t] >> m) & 1:
                if c_kind[t] == 1:
                    if (m & ~assign[end_i[t]]) or (m & ~assign[end_j[t]]):
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
