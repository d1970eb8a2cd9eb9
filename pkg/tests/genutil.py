"""Shared hypothesis strategies and small random-instance builders."""

from fractions import Fraction

from hypothesis import strategies as st

from plselect.domain import Complex1D, make_graph, make_interval
from plselect.plfun import PLFunction

small_fractions = st.fractions(min_value=-4, max_value=4, max_denominator=8)
unit_fractions = st.fractions(min_value=0, max_value=1, max_denominator=12)


@st.composite
def intervals(draw, min_vertices=2, max_vertices=6):
    k = draw(st.integers(min_vertices, max_vertices))
    pts = draw(
        st.lists(
            st.fractions(min_value=0, max_value=4, max_denominator=6),
            min_size=k,
            max_size=k,
            unique=True,
        )
    )
    return make_interval(sorted(pts))


@st.composite
def graphs(draw, min_vertices=2, max_vertices=7, extra_edges=2):
    """Connected graph-kind complexes: a random tree plus a few chords."""
    k = draw(st.integers(min_vertices, max_vertices))
    coords = draw(st.lists(small_fractions, min_size=k, max_size=k))
    edges = set()
    for v in range(1, k):
        u = draw(st.integers(0, v - 1))
        edges.add((u, v))
    for _ in range(draw(st.integers(0, extra_edges))):
        a = draw(st.integers(0, k - 1))
        b = draw(st.integers(0, k - 1))
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return make_graph(coords, sorted(edges))


@st.composite
def complexes(draw):
    if draw(st.booleans()):
        return draw(intervals())
    return draw(graphs())


@st.composite
def plfunctions(draw, dom=None):
    if dom is None:
        dom = draw(complexes())
    vals = draw(
        st.lists(small_fractions, min_size=dom.n_vertices, max_size=dom.n_vertices)
    )
    return PLFunction(dom, tuple(vals))


@st.composite
def function_pairs(draw):
    dom = draw(complexes())
    f = draw(plfunctions(dom=dom))
    g = draw(plfunctions(dom=dom))
    return f, g


@st.composite
def function_triples(draw):
    dom = draw(complexes())
    return tuple(draw(plfunctions(dom=dom)) for _ in range(3))
