"""Completely factored polynomials over PL functions.

A factored polynomial is the product of ``(t - f_i)`` over an ordered list of
PL root functions on one complex.  Two sorting routines produce the
nondecreasing root list: one evaluates the min-over-max lattice formula
literally (exponential in the degree, capped), the other sorts the value
tuple at each vertex of the refinement at pairwise crossings.  Both are kept
because their exact agreement is itself a checked property.

``sign_profile`` is the only way the rest of the package looks at ``p(u)``:
the sign of the product is the product of the factor signs, which are
constant on each open edge once the domain is refined at the zeros of
``u - f_i``.  The piecewise-cubic (or worse) composite ``p(u)`` is never
materialized.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .domain import Cell, ClosedSet, Complex1D, Subdivision, cell_id, closed_set
from .errors import InvalidParameterError, SizeCapError
from .plfun import PLFunction, align, edge_interior_sign, pl_max, pl_min, refine_at_zeros

LATTICE_SORT_CAP = 8


@dataclass(frozen=True)
class FactoredPoly:
    """p(t) = (t - roots[0]) (t - roots[1]) ... ; all roots on one complex."""

    roots: tuple[PLFunction, ...]
    is_sorted: bool = False

    def __post_init__(self):
        if not self.roots:
            raise InvalidParameterError("a factored polynomial needs at least one root")
        dom = self.roots[0].domain
        for f in self.roots[1:]:
            if f.domain != dom:
                raise InvalidParameterError("all roots must share one complex")
        if self.is_sorted:
            for i in range(len(self.roots) - 1):
                a, b = self.roots[i], self.roots[i + 1]
                for x in range(dom.n_vertices):
                    if a.values[x] > b.values[x]:
                        raise InvalidParameterError(
                            f"sorted flag refused: root {i} exceeds root {i+1} at v{x}"
                        )

    @property
    def degree(self) -> int:
        return len(self.roots)

    @property
    def domain(self) -> Complex1D:
        return self.roots[0].domain


def factored(roots, is_sorted: bool = False) -> FactoredPoly:
    return FactoredPoly(tuple(roots), is_sorted)


def align_instance(
    p: FactoredPoly, u: PLFunction, v: PLFunction
) -> tuple[FactoredPoly, PLFunction, PLFunction]:
    """Refine so that no two of ``roots + (u, v)`` cross inside an edge.

    After this, every pairwise order relation is decided vertexwise, which is
    what the region covers and the selection machinery require.  The domain
    object is preserved when nothing crosses.
    """
    if u.domain != p.domain or v.domain != p.domain:
        raise InvalidParameterError("bounds must live on the polynomial's complex")
    _, rel = align([*p.roots, u, v])
    n = len(p.roots)
    return FactoredPoly(tuple(rel[:n]), p.is_sorted), rel[n], rel[n + 1]


def sort_roots_lattice(p: FactoredPoly, cap: int = LATTICE_SORT_CAP) -> FactoredPoly:
    """Sorted roots via the lattice formula: the i-th output is the minimum
    over all i-element root subsets of the subset maximum.

    Enumerates all subsets, so the degree is capped (default 8); above the
    cap a size error points at :func:`sort_roots_pointwise`.
    """
    n = p.degree
    if n > cap:
        raise SizeCapError(
            f"lattice sort enumerates subsets; degree {n} exceeds cap {cap} "
            f"(use sort_roots_pointwise)",
            cap=cap,
            actual=n,
        )
    _, roots = align(list(p.roots))
    out = []
    for i in range(1, n + 1):
        best: PLFunction | None = None
        for subset in itertools.combinations(roots, i):
            hi = subset[0]
            for f in subset[1:]:
                hi = pl_max(hi, f)
            best = hi if best is None else pl_min(best, hi)
        assert best is not None
        out.append(best)
    return FactoredPoly(tuple(out), is_sorted=True)


def sort_roots_pointwise(p: FactoredPoly) -> FactoredPoly:
    """Sorted roots by sorting the value tuple at each refinement vertex.

    Between pairwise crossings the order of the roots is constant, so the
    vertexwise sort yields PL functions on the refined complex.
    """
    dom, roots = align(list(p.roots))
    columns = [sorted(f.values[x] for f in roots) for x in range(dom.n_vertices)]
    out = tuple(
        PLFunction(dom, tuple(columns[x][i] for x in range(dom.n_vertices)))
        for i in range(p.degree)
    )
    return FactoredPoly(out, is_sorted=True)


# ---------------------------------------------------------------------------
# Sign profiles of p(u)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SignProfile:
    """Exact sign of p(u) on every cell of a refinement of the domain."""

    domain: Complex1D
    vertex_signs: tuple[int, ...]
    edge_signs: tuple[int, ...]
    sub: Subdivision

    def sign_of(self, cell: Cell) -> int:
        kind, idx = cell
        return self.vertex_signs[idx] if kind == "v" else self.edge_signs[idx]

    def first_cell_where(self, predicate) -> Cell | None:
        for x, s in enumerate(self.vertex_signs):
            if predicate(s):
                return ("v", x)
        for e, s in enumerate(self.edge_signs):
            if predicate(s):
                return ("e", e)
        return None

    def first_positive(self) -> Cell | None:
        return self.first_cell_where(lambda s: s > 0)

    def first_negative(self) -> Cell | None:
        return self.first_cell_where(lambda s: s < 0)

    def is_nonpositive(self) -> bool:
        return self.first_positive() is None

    def is_nonnegative(self) -> bool:
        return self.first_negative() is None

    def is_zero(self) -> bool:
        return self.first_cell_where(lambda s: s != 0) is None

    def zero_set(self) -> ClosedSet:
        """Cells where p(u) vanishes identically; closed by factor linearity."""
        vs = {x for x, s in enumerate(self.vertex_signs) if s == 0}
        es = {e for e, s in enumerate(self.edge_signs) if s == 0}
        return closed_set(self.domain, vs, es)

    def describe(self, cell: Cell) -> str:
        s = self.sign_of(cell)
        word = "zero" if s == 0 else ("positive" if s > 0 else "negative")
        return f"{cell_id(cell)}: {word}"


def sign_profile(p: FactoredPoly, u: PLFunction) -> SignProfile:
    """Signs of p(u), refined at the zeros of every factor u - f_i."""
    if u.domain != p.domain:
        raise InvalidParameterError("u must live on the polynomial's complex")
    diffs = [u - f for f in p.roots]
    dom, rel, sub = refine_at_zeros(p.domain, diffs)
    vsigns = []
    for x in range(dom.n_vertices):
        s = 1
        for d in rel:
            val = d.values[x]
            if val == 0:
                s = 0
                break
            if val < 0:
                s = -s
        vsigns.append(s)
    esigns = []
    for e in range(dom.n_edges):
        s = 1
        for d in rel:
            fs = edge_interior_sign(d, e)
            if fs == 0:
                s = 0
                break
            s *= fs
        esigns.append(s)
    return SignProfile(dom, tuple(vsigns), tuple(esigns), sub)
