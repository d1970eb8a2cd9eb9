"""Pattern checking, final-case scaffolding, assembly, and pattern search."""

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plselect.crochet import (
    CrochetPattern,
    StageScaffold,
    assemble_final,
    build_scaffold,
    check_fspace_hypothesis,
    check_pattern,
    pattern_from_json,
    search_pattern,
)
from plselect.domain import (
    closed_set,
    empty_set,
    interior,
    make_interval,
    whole_set,
)
from plselect.errors import (
    HypothesisViolation,
    InvalidParameterError,
    SizeCapError,
)
from plselect.plfun import PLFunction
from plselect.poly import FactoredPoly, factored
from plselect.selection import find_selection, oracle_bruteforce, zigzag_witness

PATH3 = make_interval([0, 1, 2])
LEFT = closed_set(PATH3, {0, 1}, {0})
RIGHT = closed_set(PATH3, {1, 2}, {1})
NONE3 = empty_set(PATH3)
ALL3 = whole_set(PATH3)


def interval_set(domain, lo: int, hi: int):
    """Closed run of vertices [lo, hi] with the edges between them."""
    return closed_set(domain, range(lo, hi + 1), range(lo, hi))


def zigzag_instance(values):
    """Zig-zag cubic over the piecewise linear walk through ``values``."""
    dom = make_interval(range(len(values)))
    f = PLFunction.from_values(dom, values)
    f1, f2, f3, p = zigzag_witness(f)
    u = PLFunction.constant(f1.domain, 0)
    v = PLFunction.constant(f1.domain, 1)
    return f1.domain, p, u, v


# walk staying on the band plateaus: crosses 1/4 and 3/4 only along edges
# where the crossing root is constant, then rises past both bands at the end
CROOKED_WALK = [
    0,
    F(1, 4),
    F(1, 4),
    F(3, 4),
    F(3, 4),
    F(3, 4),
    F(1, 4),
    F(1, 4),
    F(1, 4),
    F(3, 4),
    F(3, 4),
    1,
]

# same texture squeezed to exactly 15 cells; the low band is never left, so
# B is empty and the search cap is exercised at its default
SMALL_WALK = [F(1, 4), F(3, 4), F(1, 4), F(1, 4), F(1, 4), F(3, 4), F(3, 4), 1]


# -- check_pattern -----------------------------------------------------------


def test_degenerate_cover_passes():
    verdict = check_pattern(
        CrochetPattern(ALL3, NONE3, NONE3), ALL3, NONE3, NONE3, NONE3
    )
    assert verdict.ok
    assert bool(verdict)
    assert verdict.describe() == "pass"


def test_covering_failure_names_first_missing_cell():
    verdict = check_pattern(
        CrochetPattern(LEFT, NONE3, NONE3), NONE3, NONE3, NONE3, NONE3
    )
    assert not verdict.ok
    assert verdict.clause == "X0 | X1 | X2 covers X"
    assert verdict.witness == "v2"


def test_a_outside_x0():
    verdict = check_pattern(
        CrochetPattern(LEFT, RIGHT, NONE3),
        closed_set(PATH3, {2}, ()),
        NONE3,
        NONE3,
        ALL3,
    )
    assert verdict.clause == "A <= X0"
    assert verdict.witness == "v2"


def test_b_outside_x2():
    verdict = check_pattern(
        CrochetPattern(LEFT, NONE3, RIGHT),
        NONE3,
        closed_set(PATH3, {0}, ()),
        NONE3,
        NONE3,
    )
    assert verdict.clause == "B <= X2"
    assert verdict.witness == "v0"


def test_x0_x1_overlap_outside_v():
    verdict = check_pattern(
        CrochetPattern(LEFT, RIGHT, NONE3), NONE3, NONE3, NONE3, NONE3
    )
    assert verdict.clause == "X0 & X1 <= V"
    assert verdict.witness == "v1"


def test_x0_x2_must_be_disjoint():
    verdict = check_pattern(
        CrochetPattern(LEFT, NONE3, RIGHT), NONE3, NONE3, NONE3, NONE3
    )
    assert verdict.clause == "X0 & X2 empty"
    assert verdict.witness == "v1"
    assert "X0 & X2 empty" in verdict.describe()


def test_x1_x2_overlap_outside_u():
    verdict = check_pattern(
        CrochetPattern(NONE3, LEFT, RIGHT), NONE3, NONE3, NONE3, ALL3
    )
    assert verdict.clause == "X1 & X2 <= U"
    assert verdict.witness == "v1"


def test_interiors_taken_automatically():
    # passing C directly must behave like passing interior(C)
    c = closed_set(PATH3, {1, 2}, {1})
    as_closed = check_pattern(CrochetPattern(NONE3, LEFT, RIGHT), NONE3, NONE3, c, NONE3)
    as_interior = check_pattern(
        CrochetPattern(NONE3, LEFT, RIGHT), NONE3, NONE3, interior(c), NONE3
    )
    assert as_closed.ok == as_interior.ok
    assert as_closed.clause == as_interior.clause == "X1 & X2 <= U"
    assert as_closed.witness == "v1"  # v1 is a boundary vertex of c


def test_pattern_rejects_foreign_domains():
    other = make_interval([0, 1, 3])
    with pytest.raises(InvalidParameterError):
        check_pattern(
            CrochetPattern(ALL3, NONE3, NONE3),
            whole_set(other),
            NONE3,
            NONE3,
            NONE3,
        )


def test_pattern_json_round_trip():
    pat = CrochetPattern(LEFT, NONE3, RIGHT)
    blob = pat.to_json()
    assert blob == {"X0": ["v0", "v1", "e0"], "X1": [], "X2": ["v1", "v2", "e1"]}
    again = pattern_from_json(PATH3, blob)
    assert again == pat


@st.composite
def closed_sets(draw, domain):
    edges = draw(st.sets(st.sampled_from(range(domain.n_edges))))
    vertices = set(draw(st.sets(st.sampled_from(range(domain.n_vertices)))))
    for e in edges:
        a, b = domain.edges[e]
        vertices.update((a, b))
    return closed_set(domain, vertices, edges)


@given(data=st.data())
@settings(max_examples=120, deadline=None)
def test_enlarging_u_and_v_never_breaks_a_pass(data):
    dom = make_interval([0, 1, 2, 3, 4])
    pat = CrochetPattern(
        data.draw(closed_sets(dom)),
        data.draw(closed_sets(dom)),
        data.draw(closed_sets(dom)),
    )
    a = data.draw(closed_sets(dom))
    b = data.draw(closed_sets(dom))
    u = data.draw(closed_sets(dom))
    v = data.draw(closed_sets(dom))
    before = check_pattern(pat, a, b, u, v)
    bigger_u = u | data.draw(closed_sets(dom))
    bigger_v = v | data.draw(closed_sets(dom))
    after = check_pattern(pat, a, b, bigger_u, bigger_v)
    if before.ok:
        assert after.ok


# -- build_scaffold ----------------------------------------------------------


def constant_cubic():
    dom = make_interval([0, 1])
    roots = tuple(PLFunction.constant(dom, c) for c in (0, F(1, 2), 1))
    p = FactoredPoly(roots, is_sorted=True)
    u = PLFunction.constant(dom, 0)
    v = PLFunction.constant(dom, 1)
    return dom, p, u, v


def test_scaffold_constants_has_empty_a_and_b():
    _, p, u, v = constant_cubic()
    (stage,) = build_scaffold(p, u, v)
    assert stage.index == 1
    assert stage.A.is_empty()
    assert stage.B.is_empty()


def test_scaffold_zigzag_cubic_regions():
    dom4 = make_interval([0, F(1, 4), F(3, 4), 1])
    f1, f2, f3, p = zigzag_witness(PLFunction.coordinate(dom4))
    assert f1.domain == dom4  # band crossings already sit at vertices
    u = PLFunction.constant(dom4, 0)
    v = PLFunction.constant(dom4, 1)
    (stage,) = build_scaffold(p, u, v)
    assert stage.A == closed_set(dom4, {2, 3}, {2})  # [3/4, 1]
    assert stage.B == closed_set(dom4, {0, 1}, {0})  # [0, 1/4]
    assert stage.C == closed_set(dom4, {2, 3}, {2})
    assert stage.D == closed_set(dom4, {0, 1}, {0})


def test_scaffold_requires_u_below_v():
    dom = make_interval([0, 1, 2])
    # double root at 0 keeps p(v) >= 0 while v pulls away from u on e1 only
    roots = tuple(PLFunction.constant(dom, c) for c in (-1, 0, 0))
    p = FactoredPoly(roots, is_sorted=True)
    u = PLFunction.constant(dom, 0)
    v = PLFunction.from_values(dom, [0, 0, 1])  # u = v on all of e0
    with pytest.raises(HypothesisViolation) as err:
        build_scaffold(p, u, v)
    assert err.value.clause == "X = cl(u < v)"
    assert err.value.witness == "v0"


def test_scaffold_requires_sorted_odd_aligned_and_bracketed():
    dom, p, u, v = constant_cubic()
    unsorted = FactoredPoly(tuple(reversed(p.roots)), is_sorted=False)
    with pytest.raises(InvalidParameterError):
        build_scaffold(unsorted, u, v)
    even = FactoredPoly(p.roots[:2], is_sorted=True)
    with pytest.raises(InvalidParameterError):
        build_scaffold(even, u, v)

    crossing = FactoredPoly(
        (
            PLFunction.constant(dom, -1),
            PLFunction.coordinate(dom).shift(F(-1, 2)),
            PLFunction.constant(dom, 1),
        ),
        is_sorted=True,
    )
    with pytest.raises(InvalidParameterError):
        build_scaffold(crossing, u, v)  # middle root crosses u inside e0

    high = PLFunction.constant(dom, 2)
    with pytest.raises(HypothesisViolation) as err:
        build_scaffold(p, high, v.shift(2))
    assert err.value.clause == "p(u) <= 0"


def test_stage_scaffold_validates_containments():
    a = closed_set(PATH3, {0}, ())
    with pytest.raises(InvalidParameterError):
        StageScaffold(1, a, NONE3, NONE3, NONE3)  # A escapes C
    with pytest.raises(InvalidParameterError):
        StageScaffold(0, NONE3, NONE3, NONE3, NONE3)


# -- check_fspace_hypothesis -------------------------------------------------


def test_fspace_vacuous_pass_on_constants():
    _, p, u, v = constant_cubic()
    (stage,) = build_scaffold(p, u, v)
    assert check_fspace_hypothesis(stage).ok


def test_fspace_fails_at_boundary_vertex():
    dom4 = make_interval([0, F(1, 4), F(3, 4), 1])
    _, _, _, p = zigzag_witness(PLFunction.coordinate(dom4))
    u = PLFunction.constant(dom4, 0)
    v = PLFunction.constant(dom4, 1)
    (stage,) = build_scaffold(p, u, v)
    verdict = check_fspace_hypothesis(stage)
    assert not verdict.ok
    assert verdict.clause == "A <= int C"
    assert verdict.witness == "v2"  # A reaches the boundary vertex of C


def test_fspace_passes_on_plateau_walk():
    dom, p, u, v = zigzag_instance(CROOKED_WALK)
    assert dom.n_cells == 23
    (stage,) = build_scaffold(p, u, v)
    verdict = check_fspace_hypothesis(stage)
    assert verdict.ok, verdict.describe()


def test_fspace_pass_does_not_imply_pattern_or_selection():
    # monotone plateau walk: the hypothesis checks pass, yet no covering
    # pattern and no continuous selection exist on this complex
    dom, p, u, v = zigzag_instance([0, F(1, 4), F(1, 4), F(3, 4), F(3, 4), 1])
    assert dom.n_cells == 11
    (stage,) = build_scaffold(p, u, v)
    assert check_fspace_hypothesis(stage).ok
    outcome = search_pattern(stage.A, stage.B, stage.C, stage.D, dom)
    assert outcome.exhausted
    assert not find_selection(p, u, v).found
    assert oracle_bruteforce(p, u, v) == []


# -- assemble_final ----------------------------------------------------------


def test_assemble_constants_rides_lowest_root():
    dom, p, u, v = constant_cubic()
    scaffolds = build_scaffold(p, u, v)
    pattern = CrochetPattern(whole_set(dom), empty_set(dom), empty_set(dom))
    w = assemble_final(p, u, v, scaffolds, [pattern])
    assert w.values == (F(0), F(0))


def test_assemble_rejects_overlapping_x_and_z():
    dom, p, u, v = constant_cubic()
    scaffolds = build_scaffold(p, u, v)
    bad = CrochetPattern(whole_set(dom), empty_set(dom), whole_set(dom))
    with pytest.raises(HypothesisViolation) as err:
        assemble_final(p, u, v, scaffolds, [bad])
    assert err.value.clause == "stage 1: X0 & X2 empty"
    assert err.value.witness == "v0"


def test_assemble_replays_stage_facts():
    # scaffold tampered to hide A and B: the pattern clauses pass vacuously,
    # so the fact replay must catch the violated inequality itself
    dom4 = make_interval([0, F(1, 4), F(3, 4), 1])
    _, _, _, p = zigzag_witness(PLFunction.coordinate(dom4))
    u = PLFunction.constant(dom4, 0)
    v = PLFunction.constant(dom4, 1)
    hollow = StageScaffold(
        1, empty_set(dom4), empty_set(dom4), empty_set(dom4), empty_set(dom4)
    )
    pattern = CrochetPattern(whole_set(dom4), empty_set(dom4), empty_set(dom4))
    with pytest.raises(HypothesisViolation) as err:
        assemble_final(p, u, v, [hollow], [pattern])
    assert err.value.clause == "stage 1 fact (1): u <= f_1 on X | Y"
    assert err.value.witness == "v0"  # f1(0) = -1/4 < 0 = u


def test_assemble_crooked_walk_with_hand_pattern():
    dom, p, u, v = zigzag_instance(CROOKED_WALK)
    scaffolds = build_scaffold(p, u, v)
    pattern = CrochetPattern(
        interval_set(dom, 7, 11),  # rides the lowest root
        interval_set(dom, 4, 7),  # middle root across the descent
        interval_set(dom, 0, 4),  # top root from the low end
    )
    w = assemble_final(p, u, v, scaffolds, [pattern])
    assert w.values == (F(3, 4), 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, F(1, 4))
    assert [s.values for s in oracle_bruteforce(p, u, v)].count(w.values) == 1
    canonical = find_selection(p, u, v)
    assert canonical.w.values == w.values


def test_assemble_small_walk_with_hand_pattern():
    dom, p, u, v = zigzag_instance(SMALL_WALK)
    scaffolds = build_scaffold(p, u, v)
    pattern = CrochetPattern(
        interval_set(dom, 3, 7),
        interval_set(dom, 0, 3),
        empty_set(dom),
    )
    w = assemble_final(p, u, v, scaffolds, [pattern])
    assert w.values == (0, 1, 0, 0, 0, 0, 0, F(1, 4))


def test_assemble_validates_pattern_count_and_domain():
    dom, p, u, v = constant_cubic()
    scaffolds = build_scaffold(p, u, v)
    with pytest.raises(InvalidParameterError):
        assemble_final(p, u, v, scaffolds, [])
    # equal-valued complexes compare equal, so build a genuinely different one
    other = make_interval([0, 2])
    alien = CrochetPattern(whole_set(other), empty_set(other), empty_set(other))
    with pytest.raises(InvalidParameterError):
        assemble_final(p, u, v, scaffolds, [alien])


# -- search_pattern ----------------------------------------------------------


def test_search_trivial_when_a_and_b_empty():
    outcome = search_pattern(NONE3, NONE3, NONE3, NONE3, PATH3)
    assert outcome.found
    assert outcome.pattern.x0.is_whole()
    assert outcome.pattern.x1.is_empty()
    assert outcome.pattern.x2.is_empty()
    assert outcome.visited > 0


def test_search_two_vertex_path_is_exhausted():
    dom = make_interval([0, 1])
    outcome = search_pattern(
        closed_set(dom, {0}, ()),
        closed_set(dom, {1}, ()),
        empty_set(dom),
        empty_set(dom),
        dom,
    )
    assert outcome.exhausted
    assert outcome.pattern is None


def test_search_finds_crooked_pattern_at_cap():
    dom, p, u, v = zigzag_instance(SMALL_WALK)
    assert dom.n_cells == 15
    (stage,) = build_scaffold(p, u, v)
    outcome = search_pattern(stage.A, stage.B, stage.C, stage.D, dom)
    assert outcome.found
    verdict = check_pattern(outcome.pattern, stage.A, stage.B, stage.C, stage.D)
    assert verdict.ok
    # B is empty here, so the lexicographically least cover is all-X0
    assert outcome.pattern.x0.is_whole()


def test_search_crooked_chain_supplies_assembly():
    dom, p, u, v = zigzag_instance(CROOKED_WALK)
    (stage,) = build_scaffold(p, u, v)
    outcome = search_pattern(stage.A, stage.B, stage.C, stage.D, dom, cell_cap=23)
    assert outcome.found
    w = assemble_final(p, u, v, [stage], [outcome.pattern])
    assert [s.values for s in oracle_bruteforce(p, u, v)].count(w.values) == 1


def test_search_cap_is_enforced():
    dom = make_interval(range(9))  # 17 cells
    with pytest.raises(SizeCapError) as err:
        search_pattern(
            empty_set(dom), empty_set(dom), empty_set(dom), empty_set(dom), dom
        )
    assert err.value.cap == 15
    assert err.value.actual == 17
    outcome = search_pattern(
        empty_set(dom),
        empty_set(dom),
        empty_set(dom),
        empty_set(dom),
        dom,
        cell_cap=17,
    )
    assert outcome.found
