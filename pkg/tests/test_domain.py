from fractions import Fraction

import pytest
from hypothesis import given

from genutil import complexes, intervals
from plselect.domain import (
    CellSet,
    ClosedSet,
    closed_from_cells,
    closed_set,
    complex_from_json,
    empty_set,
    extract,
    interior,
    make_graph,
    make_interval,
    subdivide,
    whole_set,
)
from plselect.errors import InvalidDomainError

F = Fraction


def test_make_interval_minimal():
    dom = make_interval([0, 1])
    assert dom.n_vertices == 2
    assert dom.n_edges == 1
    assert dom.kind == "interval"


def test_make_interval_quarters():
    dom = make_interval([0, F(1, 4), F(3, 4), 1])
    assert dom.n_vertices == 4
    assert dom.n_edges == 3
    assert dom.edges == ((0, 1), (1, 2), (2, 3))


def test_make_interval_degenerate():
    with pytest.raises(InvalidDomainError):
        make_interval([0, 0])


def test_make_interval_decreasing():
    with pytest.raises(InvalidDomainError):
        make_interval([0, 1, F(1, 2)])


def test_graph_rejects_loop_and_duplicate():
    with pytest.raises(InvalidDomainError):
        make_graph([0, 1], [(0, 0)])
    with pytest.raises(InvalidDomainError):
        make_graph([0, 1], [(0, 1), (1, 0)])
    with pytest.raises(InvalidDomainError):
        make_graph([0, 1], [(0, 2)])


def test_graph_connectivity_flag():
    with pytest.raises(InvalidDomainError):
        make_graph([0, 1, 2], [(0, 1)])
    dom = make_graph([0, 1, 2], [(0, 1)], allow_disconnected=True)
    assert len(dom.components()) == 2


def test_closed_set_requires_endpoints():
    dom = make_interval([0, 1, 2])
    with pytest.raises(InvalidDomainError):
        ClosedSet(dom, frozenset({0}), frozenset({0}))
    s = closed_set(dom, [0, 1], [0])
    assert s.has_cell(("v", 0)) and s.has_cell(("e", 0))
    assert not s.has_cell(("v", 2))


def test_interior_boundary_vertex():
    dom = make_interval([0, F(1, 2), 1])
    s = closed_set(dom, [0, 1], [0])  # the subinterval [0, 1/2]
    inner = interior(s)
    assert inner.has_cell(("v", 0))
    assert inner.has_cell(("e", 0))
    assert not inner.has_cell(("v", 1))


def test_interior_whole_is_whole():
    dom = make_interval([0, 1, 2])
    assert interior(whole_set(dom)).is_whole()


def test_interior_single_midpoint_vertex_is_empty():
    dom = make_interval([0, 1, 2])
    s = closed_set(dom, [1], [])
    assert interior(s).is_empty()


def test_interior_isolated_included_vertex_of_degree_zero():
    dom = make_graph([0, 1, 5], [(0, 1)], allow_disconnected=True)
    s = closed_set(dom, [2], [])
    assert interior(s).has_cell(("v", 2))


def test_set_algebra_and_cells():
    dom = make_interval([0, 1, 2, 3])
    a = closed_set(dom, [0, 1], [0])
    b = closed_set(dom, [1, 2], [1])
    assert (a | b).vertices == frozenset({0, 1, 2})
    assert (a | b).edges == frozenset({0, 1})
    assert (a & b).vertices == frozenset({1}) and not (a & b).edges
    assert a.issubset(a | b)
    assert empty_set(dom).is_empty()
    assert a.first_cell_outside(b) in {("v", 0), ("e", 0)}
    assert (a | b).first_cell_outside(a | b) is None


def test_closed_from_cells_roundtrip():
    dom = make_interval([0, 1, 2])
    s = closed_set(dom, [1, 2], [1])
    again = closed_from_cells(dom, s.cell_ids())
    assert again.vertices == s.vertices and again.edges == s.edges


def test_subdivide_identity():
    dom = make_interval([0, 1])
    sub = subdivide(dom, {})
    assert sub.is_identity()
    assert sub.new is dom


def test_subdivide_interval_midpoint():
    dom = make_interval([0, 1])
    sub = subdivide(dom, {0: [F(1, 2)]})
    assert sub.new.n_vertices == 3
    assert [sub.new.coords[i] for i in range(3)] == [0, F(1, 2), 1]
    relocated = sub.relocate_values((F(0), F(1)))
    assert relocated == (F(0), F(1, 2), F(1))


def test_subdivide_relocates_sets():
    dom = make_interval([0, 2])
    sub = subdivide(dom, {0: [F(1, 2), F(3, 4)]})  # coordinates 1 and 3/2
    s = whole_set(dom)
    moved = sub.relocate_set(s)
    assert moved.is_whole()
    assert isinstance(moved, ClosedSet)


def test_extract_subcomplex():
    dom = make_interval([0, 1, 2, 3])
    s = closed_set(dom, [1, 2, 3], [1, 2])
    view = extract(s)
    assert view.complex.n_vertices == 3
    assert view.complex.n_edges == 2
    assert view.complex.kind == "graph"
    # coordinates carried over from the parent
    got = sorted(view.complex.coords[i] for i in range(3))
    assert got == [1, 2, 3]
    restricted = view.restrict_values((F(10), F(11), F(12), F(13)))
    lifted = view.lift_values(restricted)
    assert lifted == {1: F(11), 2: F(12), 3: F(13)}


def test_complex_json_roundtrip():
    dom = make_interval([0, F(1, 4), 1])
    assert complex_from_json(dom.to_json()).coords == dom.coords
    g = make_graph([0, 1, F(1, 2)], [(0, 1), (1, 2), (0, 2)])
    back = complex_from_json(g.to_json())
    assert back.edges == g.edges and back.kind == "graph"


@given(complexes())
def test_interior_contained_in_set(dom):
    s = whole_set(dom)
    assert interior(s).issubset(s)


@given(intervals())
def test_components_partition_vertices(dom):
    comps = dom.components()
    seen = sorted(v for comp in comps for v in comp)
    assert seen == list(range(dom.n_vertices))
