"""Ground truth by exhaustion: root selections as walks through a branch graph.

After refining at every pairwise crossing among the roots and the bounds, a
continuous selection must ride a single branch along each open edge (two
linear branches that agree twice agree everywhere), so existence becomes a
finite reachability question.  Interval domains get a left-to-right sweep
with an explicit frontier trace; graph domains get exhaustive backtracking
with forward checking and, on failure, a propagation fixpoint that certifies
the obstruction.

The module also houses the degree-three zig-zag construction (the family that
blocks continuous root choice on an interval), its inverse bookkeeping that
reads a covering crochet pattern off a zero-bounded selection, and the sign
probe that factors f as w |f|.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .crochet import CrochetPattern
from .domain import Complex1D, ClosedSet, cell_id, closed_set
from .errors import (
    HypothesisViolation,
    InvalidParameterError,
    PLSelectError,
    SizeCapError,
)
from .plfun import PLFunction, align, align_pair, pl_max, pl_min, refine_at_zeros
from .poly import FactoredPoly, align_instance, sign_profile
from .regions import _certify_bracket

#: oracle_bruteforce refuses instances with more refined edges than this.
ORACLE_EDGE_CAP = 12

#: find_selection refuses cyclic domains with more cells than this.
CYCLIC_CELL_CAP = 64

_QUARTER = Fraction(1, 4)
_THREE_QUARTERS = Fraction(3, 4)


# -- branch graph ------------------------------------------------------------


@dataclass(frozen=True)
class BranchGraph:
    """Admissible values per vertex and admissible branch indices per edge.

    Lives on the refinement where no two of ``roots + (lower, upper)`` cross
    inside an edge, so a branch within bounds at both endpoints of an edge is
    within bounds throughout it.
    """

    poly: FactoredPoly
    lower: PLFunction
    upper: PLFunction
    vertex_values: tuple[tuple[Fraction, ...], ...]
    edge_branches: tuple[tuple[int, ...], ...]

    @property
    def domain(self) -> Complex1D:
        return self.poly.domain


def build_branch_graph(p: FactoredPoly, u: PLFunction, v: PLFunction) -> BranchGraph:
    """Refine, take ``lower = u ∧ v`` and ``upper = u ∨ v``, and tabulate
    which root values survive the bounds at each vertex and along each edge.
    """
    rp, ru, rv = align_instance(p, u, v)
    lower, upper = pl_min(ru, rv), pl_max(ru, rv)
    dom = rp.domain
    vertex_values = tuple(
        tuple(
            sorted(
                {
                    f.values[x]
                    for f in rp.roots
                    if lower.values[x] <= f.values[x] <= upper.values[x]
                }
            )
        )
        for x in range(dom.n_vertices)
    )
    edge_branches = tuple(
        tuple(
            i
            for i, f in enumerate(rp.roots)
            if lower.values[a] <= f.values[a] <= upper.values[a]
            and lower.values[b] <= f.values[b] <= upper.values[b]
        )
        for a, b in dom.edges
    )
    return BranchGraph(rp, lower, upper, vertex_values, edge_branches)


# -- selection search --------------------------------------------------------


@dataclass(frozen=True)
class Obstruction:
    """Certificate that no continuous selection exists.

    ``cut_vertex`` is the first vertex whose reachable admissible set is
    empty (for interval sweeps) or, when propagation on a cyclic component
    stabilises without emptying any vertex, the least vertex of the failing
    component.  ``reachable`` records the per-vertex value sets at the moment
    the search stopped.
    """

    cut_vertex: str
    reachable: tuple[tuple[Fraction, ...], ...]

    def to_json(self) -> dict:
        return {
            "cut_vertex": self.cut_vertex,
            "reachable": [[str(val) for val in row] for row in self.reachable],
        }


@dataclass(frozen=True)
class SelectionResult:
    """Either a selection ``w`` or an :class:`Obstruction`, never both."""

    w: PLFunction | None
    obstruction: Obstruction | None

    def __post_init__(self) -> None:
        if (self.w is None) == (self.obstruction is None):
            raise InvalidParameterError(
                "exactly one of w and obstruction must be present"
            )

    @property
    def found(self) -> bool:
        return self.w is not None


def find_selection(
    p: FactoredPoly,
    u: PLFunction,
    v: PLFunction,
    *,
    check_brackets: bool = True,
    cell_cap: int = CYCLIC_CELL_CAP,
) -> SelectionResult:
    """Decide whether some continuous ``w`` picks a root of ``p`` everywhere
    within ``[u ∧ v, u ∨ v]``, and exhibit one or a certified obstruction.

    With ``check_brackets`` (the default) the sign conditions p(u) ≤ 0 ≤ p(v)
    are verified first; pass ``check_brackets=False`` for exploratory use on
    instances that do not promise them.  When several selections exist the
    returned one follows the lowest admissible branch index, ties broken
    toward lower vertex numbers.
    """
    if check_brackets:
        _certify_bracket(p, u, v)
    graph = build_branch_graph(p, u, v)
    if graph.domain.kind == "interval":
        return _select_interval(graph)
    return _select_graph(graph, cell_cap)


def _checked(graph: BranchGraph, values: list[Fraction]) -> SelectionResult:
    w = PLFunction(graph.domain, tuple(values))
    if not sign_profile(graph.poly, w).is_zero():
        raise PLSelectError("internal error: selected w is not a root everywhere")
    if graph.lower.first_violation_le(w) is not None:
        raise PLSelectError("internal error: selected w escapes the lower bound")
    if w.first_violation_le(graph.upper) is not None:
        raise PLSelectError("internal error: selected w escapes the upper bound")
    return SelectionResult(w, None)


def _select_interval(graph: BranchGraph) -> SelectionResult:
    """Forward reachability sweep; on success, rebuild the canonical walk
    from the backward-feasible sets so greedy choices never dead-end.
    """
    dom = graph.domain
    roots = graph.poly.roots
    n = dom.n_vertices
    reach: list[tuple[Fraction, ...]] = [()] * n
    reach[0] = graph.vertex_values[0]
    cut: int | None = 0 if not reach[0] else None
    if cut is None:
        for e in range(dom.n_edges):
            a, b = e, e + 1
            seen = set(reach[a])
            reach[b] = tuple(
                sorted(
                    {
                        roots[i].values[b]
                        for i in graph.edge_branches[e]
                        if roots[i].values[a] in seen
                    }
                )
            )
            if not reach[b]:
                cut = b
                break
    if cut is not None:
        return SelectionResult(None, Obstruction(f"v{cut}", tuple(reach)))

    feasible: list[set[Fraction]] = [set()] * n
    feasible[n - 1] = set(graph.vertex_values[n - 1])
    for e in range(dom.n_edges - 1, -1, -1):
        feasible[e] = {
            roots[i].values[e]
            for i in graph.edge_branches[e]
            if roots[i].values[e + 1] in feasible[e + 1]
        }

    values: list[Fraction] = []
    start = next(
        (f.values[0] for f in roots if f.values[0] in feasible[0]), None
    )
    if start is None:
        raise PLSelectError("internal error: nonempty frontier but no feasible start")
    values.append(start)
    for e in range(dom.n_edges):
        step = next(
            (
                roots[i].values[e + 1]
                for i in graph.edge_branches[e]
                if roots[i].values[e] == values[e]
                and roots[i].values[e + 1] in feasible[e + 1]
            ),
            None,
        )
        if step is None:
            raise PLSelectError("internal error: feasible walk lost its continuation")
        values.append(step)
    return _checked(graph, values)


def _vertex_candidates(graph: BranchGraph, x: int) -> list[Fraction]:
    """Admissible values at ``x`` ordered by the lowest branch attaining them."""
    out: list[Fraction] = []
    for f in graph.poly.roots:
        val = f.values[x]
        if graph.lower.values[x] <= val <= graph.upper.values[x] and val not in out:
            out.append(val)
    return out


def _propagate(
    graph: BranchGraph, comp: tuple[int, ...], comp_edges: list[int]
) -> tuple[dict[int, tuple[Fraction, ...]], int | None]:
    """Arc-consistency fixpoint on one component.

    Repeatedly discards vertex values that no admissible branch can carry
    across some incident edge.  Returns the narrowed per-vertex sets and the
    first vertex emptied, if any.
    """
    roots = graph.poly.roots
    dom = graph.domain
    domains: dict[int, list[Fraction]] = {
        x: list(graph.vertex_values[x]) for x in comp
    }
    changed = True
    while changed:
        changed = False
        for e in comp_edges:
            a, b = dom.edges[e]
            for s, t in ((a, b), (b, a)):
                kept = [
                    val
                    for val in domains[s]
                    if any(
                        roots[i].values[s] == val and roots[i].values[t] in domains[t]
                        for i in graph.edge_branches[e]
                    )
                ]
                if len(kept) != len(domains[s]):
                    domains[s] = kept
                    changed = True
                    if not kept:
                        return {x: tuple(vals) for x, vals in domains.items()}, s
    return {x: tuple(vals) for x, vals in domains.items()}, None


def _component_obstruction(
    graph: BranchGraph, comp: tuple[int, ...], comp_edges: list[int]
) -> Obstruction:
    domains, emptied = _propagate(graph, comp, comp_edges)
    cut = emptied if emptied is not None else comp[0]
    reachable = tuple(
        domains.get(x, graph.vertex_values[x]) for x in range(graph.domain.n_vertices)
    )
    return Obstruction(f"v{cut}", reachable)


def _select_graph(graph: BranchGraph, cell_cap: int) -> SelectionResult:
    """Backtracking assignment per component, vertices in ascending order,
    with forward checking across edges into unassigned neighbours.
    """
    dom = graph.domain
    components = dom.components()
    comp_of = {x: ci for ci, comp in enumerate(components) for x in comp}
    edges_of: list[list[int]] = [[] for _ in components]
    for e, (a, b) in enumerate(dom.edges):
        edges_of[comp_of[a]].append(e)
    if any(
        len(edges_of[ci]) >= len(comp) for ci, comp in enumerate(components)
    ) and dom.n_cells > cell_cap:
        raise SizeCapError(
            f"selection search on cyclic domains is capped at {cell_cap} cells; "
            f"this domain has {dom.n_cells}",
            cap=cell_cap,
            actual=dom.n_cells,
        )

    roots = graph.poly.roots
    values: list[Fraction | None] = [None] * dom.n_vertices
    candidates = [_vertex_candidates(graph, x) for x in range(dom.n_vertices)]

    def consistent(x: int, val: Fraction) -> bool:
        for e in dom.incident[x]:
            a, b = dom.edges[e]
            y = b if a == x else a
            other = values[y]
            if other is None:
                # forward check: some admissible branch must carry val onward
                if not any(roots[i].values[x] == val for i in graph.edge_branches[e]):
                    return False
            elif not any(
                roots[i].values[x] == val and roots[i].values[y] == other
                for i in graph.edge_branches[e]
            ):
                return False
        return True

    def assign(comp: tuple[int, ...], k: int) -> bool:
        if k == len(comp):
            return True
        x = comp[k]
        for val in candidates[x]:
            if consistent(x, val):
                values[x] = val
                if assign(comp, k + 1):
                    return True
                values[x] = None
        return False

    for ci, comp in enumerate(components):
        if not assign(comp, 0):
            return SelectionResult(
                None, _component_obstruction(graph, comp, edges_of[ci])
            )
    if any(val is None for val in values):
        raise PLSelectError("internal error: assignment left a vertex unvalued")
    return _checked(graph, list(values))  # type: ignore[arg-type]


# -- independent oracle ------------------------------------------------------


def oracle_bruteforce(
    p: FactoredPoly, u: PLFunction, v: PLFunction
) -> list[PLFunction]:
    """Every continuous PL selection, by direct enumeration.

    Deliberately shares no code with :func:`find_selection`: admissibility is
    recomputed from scratch and the search walks per-edge value pairs
    (deduplicated, so coincident roots collapse), pruning only on vertex
    agreement.  Exhaustive, hence the edge cap.
    """
    if u.domain != p.domain or v.domain != p.domain:
        raise InvalidParameterError("bounds must live on the polynomial's complex")
    _, rel = align([*p.roots, u, v])
    roots, ru, rv = rel[: p.degree], rel[p.degree], rel[p.degree + 1]
    dom = roots[0].domain
    if dom.n_edges > ORACLE_EDGE_CAP:
        raise SizeCapError(
            f"oracle enumerates up to {p.degree}^{dom.n_edges} branch assignments; "
            f"the cap is {ORACLE_EDGE_CAP} edges",
            cap=ORACLE_EDGE_CAP,
            actual=dom.n_edges,
        )
    lo = tuple(min(a, b) for a, b in zip(ru.values, rv.values))
    hi = tuple(max(a, b) for a, b in zip(ru.values, rv.values))

    edge_pairs: list[list[tuple[Fraction, Fraction]]] = []
    for a, b in dom.edges:
        edge_pairs.append(
            sorted(
                {
                    (f.values[a], f.values[b])
                    for f in roots
                    if lo[a] <= f.values[a] <= hi[a] and lo[b] <= f.values[b] <= hi[b]
                }
            )
        )
    vertex_options = [
        sorted({f.values[x] for f in roots if lo[x] <= f.values[x] <= hi[x]})
        for x in range(dom.n_vertices)
    ]

    found: set[tuple[Fraction, ...]] = set()
    values: list[Fraction | None] = [None] * dom.n_vertices

    def fill_free(free: list[int], k: int) -> None:
        if k == len(free):
            found.add(tuple(values))  # type: ignore[arg-type]
            return
        x = free[k]
        for val in vertex_options[x]:
            values[x] = val
            fill_free(free, k + 1)
        values[x] = None

    def extend(e: int) -> None:
        if e == dom.n_edges:
            fill_free([x for x in range(dom.n_vertices) if values[x] is None], 0)
            return
        a, b = dom.edges[e]
        for va, vb in edge_pairs[e]:
            if values[a] is not None and values[a] != va:
                continue
            if values[b] is not None and values[b] != vb:
                continue
            saved = values[a], values[b]
            values[a], values[b] = va, vb
            extend(e + 1)
            values[a], values[b] = saved

    extend(0)
    return [PLFunction(dom, row) for row in sorted(found)]


# -- zig-zag construction ----------------------------------------------------


def zigzag_witness(
    f: PLFunction,
) -> tuple[PLFunction, PLFunction, PLFunction, FactoredPoly]:
    """Three sorted roots whose cubic brackets 0 and 1 yet encodes ``f``.

    For ``f`` mapping into [0, 1], builds (after refining at the crossings of
    1/4 and 3/4) the piecewise family

    * ``f1``: ``f - 1/4`` below the first band, ``0`` between the bands,
      ``f - 3/4`` above;
    * ``f2``: ``(f - 1/4)/2`` below, ``2(f - 1/4)`` between, ``(f + 5/4)/2``
      above;
    * ``f3``: ``f + 3/4`` below, ``1`` between, ``f + 1/4`` above;

    each linear on every refined edge, with f1 ≤ f2 ≤ f3 and f3 - f1 ≡ 1.
    Any continuous root of the product cubic staying in [0, 1] would have to
    cross between branches a unit apart, which is the point of the family.
    """
    for x, val in enumerate(f.values):
        if not 0 <= val <= 1:
            raise HypothesisViolation("0 <= f <= 1", witness=f"v{x}")
    _, _, sub = refine_at_zeros(
        f.domain, [f.shift(-_QUARTER), f.shift(-_THREE_QUARTERS)]
    )
    rf = f.relocate(sub)
    lo: list[Fraction] = []
    mid: list[Fraction] = []
    hi: list[Fraction] = []
    for val in rf.values:
        if val <= _QUARTER:
            lo.append(val - _QUARTER)
            mid.append((val - _QUARTER) / 2)
            hi.append(val + _THREE_QUARTERS)
        elif val <= _THREE_QUARTERS:
            lo.append(Fraction(0))
            mid.append(2 * (val - _QUARTER))
            hi.append(Fraction(1))
        else:
            lo.append(val - _THREE_QUARTERS)
            mid.append((val + Fraction(5, 4)) / 2)
            hi.append(val + _QUARTER)
    dom = rf.domain
    f1 = PLFunction(dom, tuple(lo))
    f2 = PLFunction(dom, tuple(mid))
    f3 = PLFunction(dom, tuple(hi))
    return f1, f2, f3, FactoredPoly((f1, f2, f3), is_sorted=True)


def _recover_generator(f2: PLFunction) -> PLFunction:
    """Invert the middle zig-zag branch: each branch of f2 is injective in
    its band, so f is recoverable from f2 alone once edges are refined at
    the crossings of f2 with 0 and 1.
    """
    out: list[Fraction] = []
    for val in f2.values:
        if val <= 0:
            out.append(2 * val + _QUARTER)
        elif val <= 1:
            out.append(val / 2 + _QUARTER)
        else:
            out.append(2 * val - Fraction(5, 4))
    return PLFunction(f2.domain, tuple(out))


def _equality_set(a: PLFunction, b: PLFunction) -> ClosedSet:
    """Cells on which two functions on one complex agree identically."""
    dom = a.domain
    vs = {x for x in range(dom.n_vertices) if a.values[x] == b.values[x]}
    es = {e for e, (i, j) in enumerate(dom.edges) if i in vs and j in vs}
    return closed_set(dom, vs, es)


def zigzag_partition(
    w: PLFunction, f1: PLFunction, f2: PLFunction, f3: PLFunction
) -> CrochetPattern:
    """Read the covering pattern off a selection of the zig-zag cubic.

    ``X0 = {w = f3}``, ``X1 = {w = f2}``, ``X2 = {w = f1}``; the six pattern
    clauses are re-verified against the recovered generator, with A = {f = 0},
    B = {f = 1}, and the band conditions f = 3/4 on X0 ∩ X1, f = 1/4 on
    X1 ∩ X2.  X0 ∩ X2 is empty outright since f3 - f1 ≡ 1.
    """
    base = w.domain
    for g in (f1, f2, f3):
        if g.domain != base:
            raise InvalidParameterError(
                "selection and roots must share one complex"
            )
    # branch boundaries live where f2 hits 0 or 1; cut there so equality
    # sets and the recovered generator are edge-exact
    _, _, sub = refine_at_zeros(base, [f2, f2.shift(-1)])
    rw, r1, r2, r3 = (g.relocate(sub) for g in (w, f1, f2, f3))
    dom, (rw, r1, r2, r3) = align([rw, r1, r2, r3])

    diffs = [rw - r for r in (r1, r2, r3)]
    for x in range(dom.n_vertices):
        if all(d.values[x] != 0 for d in diffs):
            raise HypothesisViolation("p(w) = 0", witness=f"v{x}")
    for e, (a, b) in enumerate(dom.edges):
        if not any(d.values[a] == 0 and d.values[b] == 0 for d in diffs):
            raise HypothesisViolation("p(w) = 0", witness=f"e{e}")

    x0 = _equality_set(rw, r3)
    x1 = _equality_set(rw, r2)
    x2 = _equality_set(rw, r1)
    if not (x0 | x1 | x2).is_whole():
        raise PLSelectError("internal error: equality sets fail to cover")

    gen = _recover_generator(r2)
    zero = PLFunction.constant(dom, 0)
    one = PLFunction.constant(dom, 1)
    a_set = _equality_set(gen, zero)
    b_set = _equality_set(gen, one)
    hit = a_set.first_cell_outside(x0)
    if hit is not None:
        raise HypothesisViolation("A <= X0", witness=cell_id(hit))
    hit = b_set.first_cell_outside(x2)
    if hit is not None:
        raise HypothesisViolation("B <= X2", witness=cell_id(hit))
    for x in sorted((x0 & x1).vertices):
        if gen.values[x] != _THREE_QUARTERS:
            raise HypothesisViolation("f = 3/4 on X0 & X1", witness=f"v{x}")
    for x in sorted((x1 & x2).vertices):
        if gen.values[x] != _QUARTER:
            raise HypothesisViolation("f = 1/4 on X1 & X2", witness=f"v{x}")
    meet = x0 & x2
    if not meet.is_empty():
        raise HypothesisViolation(
            "X0 & X2 empty", witness=cell_id(next(meet.cells()))
        )
    return CrochetPattern(x0, x1, x2)


# -- sign probe --------------------------------------------------------------


@dataclass(frozen=True)
class FSpaceProbeResult:
    """Sign factor ``w`` with ``f = w·|f|`` and |w| ≤ 1, or the blocking cell.

    ``f`` is returned refined at its zero crossings; ``w`` lives on the same
    complex.  ``witness`` names the first cell shared by the closures of
    {f > 0} and {f < 0} when no factorization exists.
    """

    f: PLFunction
    w: PLFunction | None
    witness: str | None

    @property
    def found(self) -> bool:
        return self.w is not None


def f_space_probe(f: PLFunction) -> FSpaceProbeResult:
    """Factor out the sign of ``f``: find continuous ``w`` with ``f = w·|f|``.

    Such a ``w`` exists exactly when the closures of {f > 0} and {f < 0} are
    disjoint.  The canonical choice is +1 on the positive closure, -1 on the
    negative one, 0 on vertices seeing neither sign, and elsewhere the hop
    distance interpolation (dist_neg - dist_pos)/(dist_neg + dist_pos).
    """
    rf, _ = align_pair(f, PLFunction.constant(f.domain, 0))
    dom = rf.domain
    pos: set[int] = set()
    neg: set[int] = set()
    for x, val in enumerate(rf.values):
        if val > 0:
            pos.add(x)
        elif val < 0:
            neg.add(x)
    for a, b in dom.edges:
        va, vb = rf.values[a], rf.values[b]
        if va > 0 or vb > 0:
            pos.update((a, b))
        elif va < 0 or vb < 0:
            neg.update((a, b))
    clash = sorted(pos & neg)
    if clash:
        return FSpaceProbeResult(rf, None, f"v{clash[0]}")

    def hop_distances(sources: set[int]) -> list[int | None]:
        dist: list[int | None] = [None] * dom.n_vertices
        queue: deque[int] = deque()
        for s in sorted(sources):
            dist[s] = 0
            queue.append(s)
        while queue:
            x = queue.popleft()
            for e in dom.incident[x]:
                a, b = dom.edges[e]
                y = b if a == x else a
                if dist[y] is None:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    d_pos = hop_distances(pos)
    d_neg = hop_distances(neg)
    vals: list[Fraction] = []
    for x in range(dom.n_vertices):
        dp, dn = d_pos[x], d_neg[x]
        if dp is None and dn is None:
            vals.append(Fraction(0))
        elif dn is None:
            vals.append(Fraction(1))
        elif dp is None:
            vals.append(Fraction(-1))
        else:
            vals.append(Fraction(dn - dp, dn + dp))
    w = PLFunction(dom, tuple(vals))
    if not probe_is_valid(rf, w):
        raise PLSelectError("internal error: constructed sign factor fails its check")
    return FSpaceProbeResult(rf, w, None)


def probe_is_valid(f: PLFunction, w: PLFunction) -> bool:
    """Exact check that ``f = w·|f|`` with |w| ≤ 1, both on one complex.

    Restricted to an edge, both sides are polynomials of degree ≤ 2 in the
    edge parameter once |f| is split at its sign change, so checking the
    endpoints and the midpoints of the (at most two) pieces decides identity.
    """
    if f.domain != w.domain:
        raise InvalidParameterError("sign-factor check needs one shared complex")
    if any(abs(val) > 1 for val in w.values):
        return False
    half = Fraction(1, 2)
    for a, b in f.domain.edges:
        fa, fb = f.values[a], f.values[b]
        wa, wb = w.values[a], w.values[b]
        if fa * fb < 0:
            t0 = fa / (fa - fb)
            points = (Fraction(0), t0 / 2, t0, (t0 + 1) / 2, Fraction(1))
        else:
            points = (Fraction(0), half, Fraction(1))
        for t in points:
            ft = fa + (fb - fa) * t
            wt = wa + (wb - wa) * t
            if wt * abs(ft) != ft:
                return False
    return True
