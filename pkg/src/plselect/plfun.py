"""Piecewise-linear functions on 1-complexes, with exact refinement.

A :class:`PLFunction` stores one rational value per vertex and is linear on
every edge.  Because of linearity, vertexwise facts propagate: two functions
on the same complex satisfy ``f <= g`` everywhere iff they do at every vertex,
and they agree on an edge iff they agree at both endpoints.

The workhorse is :func:`refine`: given several functions it subdivides the
domain at every transversal pairwise crossing, after which any two of the
functions are, on each open edge, either identical or nowhere equal.  All
sign-based region constructions (:func:`closure_of_pred`, the nonnegative /
nonpositive regions) assume—and, when called standalone, arrange—that state.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .domain import (
    CellSet,
    ClosedSet,
    Complex1D,
    Subdivision,
    as_fraction,
    cell_id,
    closed_set,
    subdivide,
)
from .errors import InvalidDomainError, InvalidParameterError


@dataclass(frozen=True)
class PLFunction:
    domain: Complex1D
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != self.domain.n_vertices:
            raise InvalidDomainError(
                f"{len(self.values)} values for {self.domain.n_vertices} vertices"
            )
        for v in self.values:
            if not isinstance(v, Fraction):
                raise InvalidParameterError(f"vertex value {v!r} is not a Fraction")

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_values(cls, domain: Complex1D, values: Sequence) -> "PLFunction":
        return cls(domain, tuple(as_fraction(v) for v in values))

    @classmethod
    def constant(cls, domain: Complex1D, value) -> "PLFunction":
        c = as_fraction(value)
        return cls(domain, tuple(c for _ in range(domain.n_vertices)))

    @classmethod
    def coordinate(cls, domain: Complex1D) -> "PLFunction":
        return cls(domain, tuple(domain.coords))

    # -- pointwise structure ---------------------------------------------------

    def at(self, vertex: int) -> Fraction:
        return self.values[vertex]

    def on_edge(self, edge: int) -> tuple[Fraction, Fraction]:
        a, b = self.domain.edges[edge]
        return self.values[a], self.values[b]

    def evaluate(self, x) -> Fraction:
        """Evaluate at coordinate ``x`` (interval-kind domains only)."""
        if self.domain.kind != "interval":
            raise InvalidParameterError("coordinate evaluation needs an interval domain")
        pt = as_fraction(x)
        cs = self.domain.coords
        if not cs[0] <= pt <= cs[-1]:
            raise InvalidParameterError(f"{pt} outside [{cs[0]}, {cs[-1]}]")
        lo, hi = 0, len(cs) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if cs[mid] <= pt:
                lo = mid
            else:
                hi = mid
        if pt == cs[lo]:
            return self.values[lo]
        t = (pt - cs[lo]) / (cs[hi] - cs[lo])
        return self.values[lo] + (self.values[hi] - self.values[lo]) * t

    # -- linear arithmetic (stays PL on the same complex) ----------------------

    def _check(self, other: "PLFunction") -> None:
        if self.domain != other.domain:
            raise InvalidParameterError("functions live on different complexes")

    def __add__(self, other: "PLFunction") -> "PLFunction":
        self._check(other)
        return PLFunction(self.domain, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "PLFunction") -> "PLFunction":
        self._check(other)
        return PLFunction(self.domain, tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "PLFunction":
        return PLFunction(self.domain, tuple(-a for a in self.values))

    def scale(self, factor) -> "PLFunction":
        c = as_fraction(factor)
        return PLFunction(self.domain, tuple(c * a for a in self.values))

    def shift(self, offset) -> "PLFunction":
        c = as_fraction(offset)
        return PLFunction(self.domain, tuple(a + c for a in self.values))

    def relocate(self, sub: Subdivision) -> "PLFunction":
        if sub.old != self.domain:
            raise InvalidParameterError("subdivision belongs to a different complex")
        return PLFunction(sub.new, sub.relocate_values(self.values))

    def le(self, other: "PLFunction") -> bool:
        """Everywhere ``self <= other`` (same complex; vertexwise suffices)."""
        self._check(other)
        return all(a <= b for a, b in zip(self.values, other.values))

    def first_violation_le(self, other: "PLFunction", region: CellSet | None = None) -> str | None:
        """Least cell of ``region`` where ``self <= other`` fails, if any."""
        self._check(other)
        verts = sorted(region.vertices) if region is not None else range(self.domain.n_vertices)
        for v in verts:
            if self.values[v] > other.values[v]:
                return cell_id(("v", v))
        return None


# ---------------------------------------------------------------------------
# Refinement at crossings
# ---------------------------------------------------------------------------


def _crossing_cuts(domain: Complex1D, functions: Sequence[PLFunction]) -> dict[int, list[Fraction]]:
    cuts: dict[int, list[Fraction]] = {}
    for e, (a, b) in enumerate(domain.edges):
        ts: set[Fraction] = set()
        for i in range(len(functions)):
            fa, fb = functions[i].values[a], functions[i].values[b]
            for j in range(i + 1, len(functions)):
                ga, gb = functions[j].values[a], functions[j].values[b]
                d0, d1 = fa - ga, fb - gb
                if (d0 > 0 > d1) or (d0 < 0 < d1):
                    ts.add(d0 / (d0 - d1))
        if ts:
            cuts[e] = sorted(ts)
    return cuts


def refine(
    domain: Complex1D, functions: Sequence[PLFunction]
) -> tuple[Complex1D, list[PLFunction], Subdivision]:
    """Subdivide at every transversal pairwise crossing of ``functions``.

    One pass suffices: crossings of linear functions on an edge are already
    determined by the original endpoint values, and subdividing never creates
    new crossings.  Returns the refined complex, the relocated functions, and
    the subdivision (the identity when nothing crosses, preserving object
    identity of the domain).
    """
    for f in functions:
        if f.domain != domain:
            raise InvalidParameterError("all functions must share the given domain")
    sub = subdivide(domain, _crossing_cuts(domain, functions))
    if sub.is_identity():
        return domain, list(functions), sub
    return sub.new, [f.relocate(sub) for f in functions], sub


def refine_at_zeros(
    domain: Complex1D, functions: Sequence[PLFunction]
) -> tuple[Complex1D, list[PLFunction], Subdivision]:
    """Subdivide only where one of ``functions`` crosses zero transversally.

    Coarser than :func:`refine` (which also cuts at pairwise crossings); after
    it, every input function has a well-defined sign on every open edge.
    """
    cuts: dict[int, list[Fraction]] = {}
    for e, (a, b) in enumerate(domain.edges):
        ts: set[Fraction] = set()
        for f in functions:
            if f.domain != domain:
                raise InvalidParameterError("all functions must share the given domain")
            va, vb = f.values[a], f.values[b]
            if va * vb < 0:
                ts.add(va / (va - vb))
        if ts:
            cuts[e] = sorted(ts)
    sub = subdivide(domain, cuts)
    if sub.is_identity():
        return domain, list(functions), sub
    return sub.new, [f.relocate(sub) for f in functions], sub


def align(functions: Sequence[PLFunction]) -> tuple[Complex1D, list[PLFunction]]:
    """Common refinement of functions that already share a complex."""
    if not functions:
        raise InvalidParameterError("nothing to align")
    dom = functions[0].domain
    new_dom, relocated, _ = refine(dom, functions)
    return new_dom, relocated


def align_pair(f: PLFunction, g: PLFunction) -> tuple[PLFunction, PLFunction]:
    """Put two functions (possibly on different interval refinements) on one complex.

    Same complex: returned as-is after crossing refinement.  Two interval
    complexes over the same span: breakpoints are merged and both functions are
    evaluated exactly on the merge.  Anything else is an error.
    """
    if f.domain == g.domain:
        _, (rf, rg) = align([f, g])
        return rf, rg
    if f.domain.kind == g.domain.kind == "interval" and (
        f.domain.coords[0] == g.domain.coords[0] and f.domain.coords[-1] == g.domain.coords[-1]
    ):
        from .domain import make_interval

        points = sorted(set(f.domain.coords) | set(g.domain.coords))
        dom = make_interval(points)
        rf = PLFunction(dom, tuple(f.evaluate(x) for x in points))
        rg = PLFunction(dom, tuple(g.evaluate(x) for x in points))
        _, (rf, rg) = align([rf, rg])
        return rf, rg
    raise InvalidParameterError("functions live on incompatible complexes")


def pl_equal(f: PLFunction, g: PLFunction) -> bool:
    rf, rg = align_pair(f, g)
    return rf.values == rg.values


# ---------------------------------------------------------------------------
# Lattice operations
# ---------------------------------------------------------------------------


def lattice(kind: str, f: PLFunction, g: PLFunction) -> PLFunction:
    """Pointwise min/max, returned on the refinement at f-g crossings."""
    if kind not in ("min", "max"):
        raise InvalidParameterError(f"lattice kind must be 'min' or 'max', not {kind!r}")
    rf, rg = align_pair(f, g)
    op = min if kind == "min" else max
    return PLFunction(rf.domain, tuple(op(a, b) for a, b in zip(rf.values, rg.values)))


def pl_min(f: PLFunction, g: PLFunction) -> PLFunction:
    return lattice("min", f, g)


def pl_max(f: PLFunction, g: PLFunction) -> PLFunction:
    return lattice("max", f, g)


def pl_abs(f: PLFunction) -> PLFunction:
    """|f| on the refinement at zeros of f."""
    zero = PLFunction.constant(f.domain, 0)
    rf, _ = align_pair(f, zero)
    return PLFunction(rf.domain, tuple(abs(a) for a in rf.values))


# ---------------------------------------------------------------------------
# Sign regions
# ---------------------------------------------------------------------------


def edge_interior_sign(g: PLFunction, edge: int) -> int:
    """Sign of ``g`` on the open edge; requires no transversal interior zero.

    After refinement at zeros, ``g`` restricted to an edge is linear with
    endpoint values that never have strictly opposite signs, so the open part
    is identically zero (both endpoints zero) or keeps one strict sign.
    """
    va, vb = g.on_edge(edge)
    if (va > 0 > vb) or (va < 0 < vb):
        raise InvalidParameterError(
            f"edge e{edge} has an interior sign change; refine at zeros first"
        )
    if va == 0 and vb == 0:
        return 0
    return 1 if (va > 0 or vb > 0) else -1


def _sign_regions(g: PLFunction) -> tuple[PLFunction, ClosedSet, ClosedSet, ClosedSet]:
    """(refined g, cl{g<0}, {g=0}, cl{g>0})."""
    rg, _ = align_pair(g, PLFunction.constant(g.domain, 0))
    dom = rg.domain
    neg_e, zero_e, pos_e = set(), set(), set()
    for e in range(dom.n_edges):
        s = edge_interior_sign(rg, e)
        (neg_e if s < 0 else pos_e if s > 0 else zero_e).add(e)
    neg_v = {v for v in range(dom.n_vertices) if rg.values[v] < 0}
    zero_v = {v for v in range(dom.n_vertices) if rg.values[v] == 0}
    pos_v = {v for v in range(dom.n_vertices) if rg.values[v] > 0}
    for e in neg_e:
        a, b = dom.edges[e]
        neg_v.update((a, b))
    for e in pos_e:
        a, b = dom.edges[e]
        pos_v.update((a, b))
    return (
        rg,
        closed_set(dom, neg_v, neg_e),
        closed_set(dom, zero_v, zero_e),
        closed_set(dom, pos_v, pos_e),
    )


def closure_of_pred(g: PLFunction, relation: str) -> ClosedSet:
    """Closure of {g<0} / {g>0}, or the zero set {g=0}, as a closed subcomplex.

    The result lives on the refinement of ``g.domain`` at the zeros of ``g``
    (reachable via ``result.domain``); when no refinement is needed it lives
    on the original complex object.
    """
    _, neg, zero, pos = _sign_regions(g)
    if relation == "<":
        return neg
    if relation == ">":
        return pos
    if relation == "=":
        return zero
    raise InvalidParameterError(f"relation must be one of '<', '>', '=', not {relation!r}")


def region_le(g: PLFunction) -> ClosedSet:
    """{g <= 0} as a closed subcomplex (closure of strict union zero set)."""
    _, neg, zero, _ = _sign_regions(g)
    u = neg.union(zero)
    return closed_set(u.domain, u.vertices, u.edges)


def region_ge(g: PLFunction) -> ClosedSet:
    _, _, zero, pos = _sign_regions(g)
    u = pos.union(zero)
    return closed_set(u.domain, u.vertices, u.edges)
