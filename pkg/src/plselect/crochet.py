"""Crochet patterns: triples of closed sets that thread a selection together.

A pattern is a cover of the complex by closed sets ``X0, X1, X2`` whose outer
sets never meet and whose adjacent overlaps are confined to prescribed
interiors.  On a finite complex such a cover is not automatic, so patterns are
either given explicitly or found by exhaustive search over all labelings, with
exhaustion itself a certified outcome.

The odd-degree final assembly consumes one pattern per stage: stage ``i``
plays the sorted roots ``f_{2i-1}, f_{2i}, f_{2i+1}`` against the bounds,
builds the four guide sets (A, B, C, D), and the glued selection follows the
pattern through the stages.  Every inequality the construction leans on is
re-checked exactly, with a witness cell on failure.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from ._kernels import cover_search
from .domain import (
    Cell,
    CellSet,
    ClosedSet,
    Complex1D,
    cell_id,
    closed_from_cells,
    closed_set,
    interior,
    whole_set,
)
from .errors import (
    GlueConflictError,
    HypothesisViolation,
    InvalidParameterError,
    PLSelectError,
    SizeCapError,
)
from .plfun import PLFunction, closure_of_pred, region_ge, region_le
from .poly import FactoredPoly, align_instance, sign_profile
from .regions import _certify_bracket, _check_le_on, glue

PATTERN_SEARCH_CAP = 15


@dataclass(frozen=True)
class CrochetPattern:
    """Closed cover (X0, X1, X2); in staged use the parts act as X_i, Y_i, Z_i."""

    x0: ClosedSet
    x1: ClosedSet
    x2: ClosedSet

    def __post_init__(self):
        for name, part in (("X0", self.x0), ("X1", self.x1), ("X2", self.x2)):
            if not isinstance(part, ClosedSet):
                raise InvalidParameterError(f"{name} must be a closed subcomplex")
        if self.x1.domain != self.x0.domain or self.x2.domain != self.x0.domain:
            raise InvalidParameterError("pattern parts live on different complexes")

    @property
    def domain(self) -> Complex1D:
        return self.x0.domain

    def parts(self) -> tuple[ClosedSet, ClosedSet, ClosedSet]:
        return (self.x0, self.x1, self.x2)

    def to_json(self) -> dict:
        return {
            "X0": self.x0.cell_ids(),
            "X1": self.x1.cell_ids(),
            "X2": self.x2.cell_ids(),
        }


def pattern_from_json(domain: Complex1D, obj) -> CrochetPattern:
    try:
        parts = [closed_from_cells(domain, obj[key]) for key in ("X0", "X1", "X2")]
    except KeyError as exc:
        raise InvalidParameterError(f"pattern JSON needs key {exc.args[0]!r}") from None
    return CrochetPattern(*parts)


@dataclass(frozen=True)
class Verdict:
    """Outcome of a constraint check: pass, or first violated clause + cell."""

    ok: bool
    clause: str | None = None
    witness: str | None = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "pass"
        return f"fail: {self.clause} (witness {self.witness})"


def _as_interior(s: CellSet) -> CellSet:
    """Closed sets stand in for their interiors; open cell sets pass through."""
    return interior(s) if isinstance(s, ClosedSet) else s


def check_pattern(
    pat: CrochetPattern, A: ClosedSet, B: ClosedSet, u_int: CellSet, v_int: CellSet
) -> Verdict:
    """Check the six pattern clauses in a fixed order; first failure wins.

    Order: covering, A <= X0, B <= X2, X0 & X1 <= V, X0 & X2 empty,
    X1 & X2 <= U.  ``u_int`` / ``v_int`` may be closed sets (their interiors
    are taken) or already-open cell sets.  Violations are verdicts, never
    exceptions.
    """
    dom = pat.domain
    for s in (A, B, u_int, v_int):
        if s.domain != dom:
            raise InvalidParameterError(
                "pattern and constraint sets live on different complexes"
            )
    ui = _as_interior(u_int)
    vi = _as_interior(v_int)
    x0, x1, x2 = pat.parts()
    cover = x0 | x1 | x2
    if not cover.is_whole():
        missing = whole_set(dom).first_cell_outside(cover)
        return Verdict(False, "X0 | X1 | X2 covers X", cell_id(missing))
    hit = A.first_cell_outside(x0)
    if hit is not None:
        return Verdict(False, "A <= X0", cell_id(hit))
    hit = B.first_cell_outside(x2)
    if hit is not None:
        return Verdict(False, "B <= X2", cell_id(hit))
    hit = (x0 & x1).first_cell_outside(vi)
    if hit is not None:
        return Verdict(False, "X0 & X1 <= V", cell_id(hit))
    meet = x0 & x2
    if not meet.is_empty():
        return Verdict(False, "X0 & X2 empty", cell_id(next(meet.cells())))
    hit = (x1 & x2).first_cell_outside(ui)
    if hit is not None:
        return Verdict(False, "X1 & X2 <= U", cell_id(hit))
    return Verdict(True)


# ---------------------------------------------------------------------------
# Stage scaffolding for the odd final case
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StageScaffold:
    """Guide sets for stage ``i`` of the odd final case.

    A = cl{v < f_{2i+1}},  B = cl{u > f_{2i-1}},
    C = {v <= f_{2i}},     D = {u >= f_{2i}}.

    A within C and B within D are containment consequences of the sign
    brackets, so they are enforced at construction.
    """

    index: int
    A: ClosedSet
    B: ClosedSet
    C: ClosedSet
    D: ClosedSet

    def __post_init__(self):
        if self.index < 1:
            raise InvalidParameterError("stage indices start at 1")
        dom = self.A.domain
        if any(s.domain != dom for s in (self.B, self.C, self.D)):
            raise InvalidParameterError("scaffold sets live on different complexes")
        hit = self.A.first_cell_outside(self.C)
        if hit is not None:
            raise InvalidParameterError(
                f"stage {self.index}: A escapes C at {cell_id(hit)}"
            )
        hit = self.B.first_cell_outside(self.D)
        if hit is not None:
            raise InvalidParameterError(
                f"stage {self.index}: B escapes D at {cell_id(hit)}"
            )

    @property
    def domain(self) -> Complex1D:
        return self.A.domain


def _require_final_shape(p: FactoredPoly) -> int:
    if not p.is_sorted:
        raise InvalidParameterError("the final case needs a sorted root list; sort first")
    if p.degree % 2 == 0:
        raise InvalidParameterError(f"the final case needs odd degree, got {p.degree}")
    return (p.degree - 1) // 2


def _require_aligned(p: FactoredPoly, u: PLFunction, v: PLFunction) -> None:
    p2, _, _ = align_instance(p, u, v)
    if p2.domain != p.domain:
        raise InvalidParameterError(
            "roots and bounds cross inside an edge; refine with align_instance first"
        )


def _require_closure_of_lt(u: PLFunction, v: PLFunction) -> None:
    lt_closure = closure_of_pred(v - u, ">")
    if not lt_closure.is_whole():
        missing = whole_set(u.domain).first_cell_outside(lt_closure)
        raise HypothesisViolation("X = cl(u < v)", witness=cell_id(missing))


def build_scaffold(
    p: FactoredPoly, u: PLFunction, v: PLFunction
) -> list[StageScaffold]:
    """Guide sets for every stage of a sorted odd instance.

    Requires an aligned instance whose whole complex is the closure of
    {u < v} and whose sign brackets certify; each failure is reported with
    the cell where it happens.
    """
    k = _require_final_shape(p)
    _require_aligned(p, u, v)
    _certify_bracket(p, u, v)
    _require_closure_of_lt(u, v)
    out = []
    for i in range(1, k + 1):
        f_lo, f_mid, f_hi = p.roots[2 * i - 2], p.roots[2 * i - 1], p.roots[2 * i]
        out.append(
            StageScaffold(
                i,
                A=closure_of_pred(v - f_hi, "<"),
                B=closure_of_pred(u - f_lo, ">"),
                C=region_le(v - f_mid),
                D=region_ge(u - f_mid),
            )
        )
    return out


def check_fspace_hypothesis(s: StageScaffold) -> Verdict:
    """The interior containments the assembly leans on.

    In an F-space the closures A and B sink into the interiors of C and D
    automatically, and those interiors cannot meet; a finite complex has to
    be checked.  Clauses in order: A <= int C, B <= int D,
    int C & int D empty.
    """
    ic = interior(s.C)
    i_d = interior(s.D)
    hit = s.A.first_cell_outside(ic)
    if hit is not None:
        return Verdict(False, "A <= int C", cell_id(hit))
    hit = s.B.first_cell_outside(i_d)
    if hit is not None:
        return Verdict(False, "B <= int D", cell_id(hit))
    meet = ic & i_d
    if not meet.is_empty():
        return Verdict(False, "int C & int D empty", cell_id(next(meet.cells())))
    return Verdict(True)


def _equal_on(functions: Sequence[PLFunction], region: CellSet, clause: str) -> None:
    # closed regions carry edge endpoints, so vertex equality settles edges
    for x in sorted(region.vertices):
        vals = {f.values[x] for f in functions}
        if len(vals) > 1:
            raise HypothesisViolation(clause, witness=f"v{x}")


def assemble_final(
    p: FactoredPoly,
    u: PLFunction,
    v: PLFunction,
    scaffolds: Sequence[StageScaffold],
    patterns: Sequence[CrochetPattern],
) -> PLFunction:
    """Glue the staged selection prescribed by the patterns.

    Stage i contributes f_{2i-1} on X_i and f_{2i} on Y_i, both cut down to
    the part not yet claimed (inside every earlier Z_j); what survives all
    stages takes the top root.  Before gluing, every stage's pattern
    constraints and the five stage facts are re-verified; overlaps are
    checked to agree exactly, replaying the well-definedness argument.  The
    result satisfies u <= w <= v and p(w) = 0, and both are asserted.
    """
    k = _require_final_shape(p)
    if len(scaffolds) != k or len(patterns) != k:
        raise InvalidParameterError(
            f"degree {p.degree} needs exactly {k} scaffolds and {k} patterns"
        )
    _require_aligned(p, u, v)
    _certify_bracket(p, u, v)
    _require_closure_of_lt(u, v)
    dom = p.domain
    for s, pat in zip(scaffolds, patterns):
        if s.domain != dom or pat.domain != dom:
            raise InvalidParameterError(
                "scaffolds and patterns must live on the instance complex"
            )

    for i, (s, pat) in enumerate(zip(scaffolds, patterns), start=1):
        if s.index != i:
            raise InvalidParameterError(f"scaffold at position {i} carries index {s.index}")
        verdict = check_pattern(pat, s.A, s.B, s.C, s.D)
        if not verdict:
            raise HypothesisViolation(
                f"stage {i}: {verdict.clause}", witness=verdict.witness
            )

    for i, pat in enumerate(patterns, start=1):
        f_lo, f_mid, f_hi = p.roots[2 * i - 2], p.roots[2 * i - 1], p.roots[2 * i]
        x, y, z = pat.parts()
        _check_le_on(u, f_lo, x | y, f"stage {i} fact (1): u <= f_{2*i-1} on X | Y")
        _check_le_on(f_hi, v, y | z, f"stage {i} fact (2): v >= f_{2*i+1} on Y | Z")
        _equal_on(
            (u, f_lo, f_mid),
            x & y,
            f"stage {i} fact (3): u = f_{2*i-1} = f_{2*i} on X & Y",
        )
        _equal_on(
            (v, f_hi, f_mid),
            y & z,
            f"stage {i} fact (4): v = f_{2*i+1} = f_{2*i} on Y & Z",
        )
        chain = f"stage {i} fact (5): u <= f_{2*i-1} <= f_{2*i} <= f_{2*i+1} <= v on Y"
        for lo, hi in ((u, f_lo), (f_lo, f_mid), (f_mid, f_hi), (f_hi, v)):
            _check_le_on(lo, hi, y, chain)

    pieces: list[tuple[ClosedSet, PLFunction]] = []
    names: list[str] = []
    unclaimed = whole_set(dom)
    for i, pat in enumerate(patterns, start=1):
        x, y, z = pat.parts()
        pieces.append((x & unclaimed, p.roots[2 * i - 2]))
        names.append(f"X{i}")
        pieces.append((y & unclaimed, p.roots[2 * i - 1]))
        names.append(f"Y{i}")
        unclaimed = unclaimed & z
    pieces.append((unclaimed, p.roots[-1]))
    names.append("Z*")

    for a in range(len(pieces)):
        for b in range(a + 1, len(pieces)):
            overlap = pieces[a][0] & pieces[b][0]
            if overlap.is_empty():
                continue
            for x in sorted(overlap.vertices):
                va, vb = pieces[a][1].values[x], pieces[b][1].values[x]
                if va != vb:
                    raise GlueConflictError(
                        f"v{x}",
                        message=(
                            f"well-definedness fails: pieces {names[a]} and "
                            f"{names[b]} disagree at v{x}: {va} vs {vb}"
                        ),
                    )
    w = glue(pieces)
    if u.first_violation_le(w) is not None or w.first_violation_le(v) is not None:
        raise PLSelectError("internal error: assembled selection escapes [u, v]")
    if not sign_profile(p, w).is_zero():
        raise PLSelectError("internal error: assembled selection is not a root")
    return w


# ---------------------------------------------------------------------------
# Exhaustive pattern search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PatternSearchOutcome:
    """Either the lexicographically least pattern or a certified exhaustion."""

    pattern: CrochetPattern | None
    visited: int

    @property
    def found(self) -> bool:
        return self.pattern is not None

    @property
    def exhausted(self) -> bool:
        return self.pattern is None


def _canonical_cell_order(dom: Complex1D) -> list[Cell]:
    """Vertices in breadth-first order; each edge right after its later endpoint.

    Components are taken up by least vertex and neighbors by edge index, so
    the order — and with it the search's tie-breaking — is deterministic.
    """
    emitted_v = [False] * dom.n_vertices
    emitted_e = [False] * dom.n_edges
    seen = [False] * dom.n_vertices
    order: list[Cell] = []
    for root in range(dom.n_vertices):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            x = queue.popleft()
            emitted_v[x] = True
            order.append(("v", x))
            for e in dom.incident[x]:
                y = dom.other_end(e, x)
                if emitted_v[y] and not emitted_e[e]:
                    emitted_e[e] = True
                    order.append(("e", e))
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
    return order


def search_pattern(
    A: ClosedSet,
    B: ClosedSet,
    u_int: CellSet,
    v_int: CellSet,
    domain: Complex1D | None = None,
    *,
    cell_cap: int = PATTERN_SEARCH_CAP,
) -> PatternSearchOutcome:
    """Exhaustive pattern search; first find in lexicographic label order.

    Each cell gets a nonempty label subset of {X0, X1, X2} minus the
    forbidden {X0, X2} pair; local admissibility (membership forced by A or
    B, overlap labels confined to the given interiors) and the closedness of
    labels along edges make a labeling valid exactly when the induced triple
    passes ``check_pattern``.  Exhaustion of the label space is returned as
    an outcome, not an error.
    """
    dom = domain if domain is not None else A.domain
    ui = _as_interior(u_int)
    vi = _as_interior(v_int)
    for s in (A, B, ui, vi):
        if s.domain != dom:
            raise InvalidParameterError(
                "search constraint sets live on a different complex"
            )
    if dom.n_cells > cell_cap:
        raise SizeCapError(
            f"pattern search enumerates labelings of {dom.n_cells} cells; "
            f"the cap is {cell_cap}",
            cap=cell_cap,
            actual=dom.n_cells,
        )
    order = _canonical_cell_order(dom)
    pos = {cell: t for t, cell in enumerate(order)}
    allowed: list[int] = []
    kinds: list[int] = []
    ends: list[tuple[int, int]] = []
    for cell in order:
        bits = 0
        for m in range(1, 8):
            if m & 5 == 5:
                continue
            if A.has_cell(cell) and not m & 1:
                continue
            if B.has_cell(cell) and not m & 4:
                continue
            if m & 3 == 3 and not vi.has_cell(cell):
                continue
            if m & 6 == 6 and not ui.has_cell(cell):
                continue
            bits |= 1 << m
        allowed.append(bits)
        kind, idx = cell
        if kind == "v":
            kinds.append(0)
            ends.append((0, 0))
        else:
            a, b = dom.edges[idx]
            kinds.append(1)
            ends.append((pos[("v", a)], pos[("v", b)]))
    assignment, visited = cover_search(allowed, kinds, ends)
    if assignment is None:
        return PatternSearchOutcome(None, visited)
    vs: tuple[list[int], ...] = ([], [], [])
    es: tuple[list[int], ...] = ([], [], [])
    for cell, m in zip(order, assignment):
        kind, idx = cell
        target = vs if kind == "v" else es
        for bit in range(3):
            if m >> bit & 1:
                target[bit].append(idx)
    pat = CrochetPattern(
        closed_set(dom, vs[0], es[0]),
        closed_set(dom, vs[1], es[1]),
        closed_set(dom, vs[2], es[2]),
    )
    verdict = check_pattern(pat, A, B, ui, vi)
    if not verdict:
        raise PLSelectError(f"internal error: searched pattern fails {verdict.clause}")
    return PatternSearchOutcome(pat, visited)
