"""The P/Q/R closed cover, gluing of partial solutions, and degree reductions.

Splitting the domain by the sign of ``v - u`` gives three closed sets:
``P`` (closure of ``u < v``), ``Q`` (where ``u = v``), ``R`` (closure of
``u > v``).  Partial solutions on closed pieces are recombined by ``glue``,
which demands exact agreement on every shared cell — that check, not any
topology argument, is what makes glued functions trustworthy.

The two reductions lower the degree while preserving the bracketing
``p(u) <= 0 <= p(v)``:

* even degree: drop the lowest root on ``P``, the highest on ``R``;
* odd degree on ``R`` only: drop both extreme roots, which flips the
  bracket, so the reduced problem swaps ``u`` and ``v``.

Every inequality the derivation relies on is re-checked exactly here; a
failure raises with the cell at which it broke, since nothing guarantees a
caller's inputs satisfy the standing hypotheses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .domain import Cell, CellSet, ClosedSet, Complex1D, as_fraction, cell_id
from .errors import (
    GlueConflictError,
    HypothesisViolation,
    InvalidParameterError,
)
from .plfun import PLFunction, closure_of_pred, refine_at_zeros
from .poly import FactoredPoly, SignProfile, sign_profile


@dataclass(frozen=True)
class PQRCover:
    """Closed cover by comparison sign of u and v, with the relocated pair."""

    P: ClosedSet
    Q: ClosedSet
    R: ClosedSet
    u: PLFunction
    v: PLFunction

    def __post_init__(self):
        dom = self.P.domain
        for s in (self.Q, self.R):
            if s.domain != dom:
                raise InvalidParameterError("cover pieces live on different complexes")
        if self.u.domain != dom or self.v.domain != dom:
            raise InvalidParameterError("u, v must live on the cover's complex")
        if not (self.P | self.Q | self.R).is_whole():
            raise InvalidParameterError("P, Q, R do not cover the complex")
        overlap = (self.P & self.R).first_cell_outside(self.Q)
        if overlap is not None:
            raise InvalidParameterError(
                f"P and R meet outside Q at {cell_id(overlap)}"
            )
        for x in self.Q.vertices:
            if self.u.values[x] != self.v.values[x]:
                raise InvalidParameterError(f"u != v on Q at v{x}")

    @property
    def domain(self) -> Complex1D:
        return self.P.domain


def split_pqr(u: PLFunction, v: PLFunction) -> PQRCover:
    """P = cl{u < v}, Q = {u = v}, R = cl{u > v} on the refinement at u = v."""
    if u.domain != v.domain:
        raise InvalidParameterError("u and v must share a complex")
    _, _, sub = refine_at_zeros(u.domain, [v - u])
    u2, v2 = u.relocate(sub), v.relocate(sub)
    d = v2 - u2
    return PQRCover(
        P=closure_of_pred(d, ">"),
        Q=closure_of_pred(d, "="),
        R=closure_of_pred(d, "<"),
        u=u2,
        v=v2,
    )


# ---------------------------------------------------------------------------
# Gluing
# ---------------------------------------------------------------------------

Piece = tuple[ClosedSet, "PLFunction | Mapping[int, object]"]


def glue(pieces: Sequence[Piece]) -> PLFunction:
    """Combine functions given on closed sets into one PL function.

    A piece's function may be a PLFunction on the full complex (only its
    restriction matters) or a plain vertex-to-value mapping covering the
    piece.  The pieces must cover the complex, and any two pieces must agree
    exactly wherever they overlap; vertex agreement settles shared edges too,
    by linearity.
    """
    if not pieces:
        raise InvalidParameterError("nothing to glue")
    dom = pieces[0][0].domain
    values: list = [None] * dom.n_vertices
    owner: list = [None] * dom.n_vertices
    covered_edges: set[int] = set()
    for idx, (region, fun) in enumerate(pieces):
        if region.domain != dom:
            raise InvalidParameterError("pieces live on different complexes")
        for x in sorted(region.vertices):
            if isinstance(fun, PLFunction):
                if fun.domain != dom:
                    raise InvalidParameterError(
                        f"piece {idx}: function lives on a different complex"
                    )
                val = fun.values[x]
            else:
                try:
                    val = as_fraction(fun[x])
                except KeyError:
                    raise InvalidParameterError(
                        f"piece {idx}: mapping has no value for v{x}"
                    ) from None
            if values[x] is None:
                values[x] = val
                owner[x] = idx
            elif values[x] != val:
                raise GlueConflictError(
                    cell_id(("v", x)),
                    message=(
                        f"pieces {owner[x]} and {idx} disagree at v{x}: "
                        f"{values[x]} vs {val}"
                    ),
                )
        covered_edges |= region.edges
    for x, val in enumerate(values):
        if val is None:
            raise InvalidParameterError(f"pieces do not cover v{x}")
    for e in range(dom.n_edges):
        if e not in covered_edges:
            raise InvalidParameterError(f"pieces do not cover e{e}")
    return PLFunction(dom, tuple(values))


# ---------------------------------------------------------------------------
# Degree reductions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReducedProblem:
    """A lower-degree instance on a closed region, oriented p(u) <= 0 <= p(v).

    ``swapped`` records that ``u`` and ``v`` are the caller's pair in reverse
    order (the reversed-region normalization).
    """

    poly: FactoredPoly
    region: ClosedSet
    u: PLFunction
    v: PLFunction
    swapped: bool = False


def _certify_bracket(p: FactoredPoly, u: PLFunction, v: PLFunction) -> None:
    pu = sign_profile(p, u)
    cell = pu.first_positive()
    if cell is not None:
        raise HypothesisViolation("p(u) <= 0", witness=cell_id(cell))
    pv = sign_profile(p, v)
    cell = pv.first_negative()
    if cell is not None:
        raise HypothesisViolation("p(v) >= 0", witness=cell_id(cell))


def _check_profile_on(
    p: FactoredPoly, cand: PLFunction, region: ClosedSet, want: str, clause: str
) -> None:
    """Verify sign of p(cand) on all cells of ``region`` (nonpos / nonneg)."""
    prof = sign_profile(p, cand)
    located = prof.sub.relocate_set(region)
    for cell in located.cells():
        s = prof.sign_of(cell)
        if (want == "nonpos" and s > 0) or (want == "nonneg" and s < 0):
            raise HypothesisViolation(clause, witness=cell_id(cell))


def _check_le_on(
    f: PLFunction, g: PLFunction, region: CellSet, clause: str
) -> None:
    hit = f.first_violation_le(g, region)
    if hit is not None:
        raise HypothesisViolation(clause, witness=hit)


def _require_sorted(p: FactoredPoly) -> None:
    if not p.is_sorted:
        raise InvalidParameterError("reductions need a sorted root list; sort first")


def _require_cover_domain(p: FactoredPoly, cover: PQRCover) -> None:
    if cover.domain != p.domain:
        raise InvalidParameterError(
            "cover and polynomial live on different complexes; align and re-split"
        )


def reduce_even(
    p: FactoredPoly, u: PLFunction, v: PLFunction, cover: PQRCover
) -> tuple[ReducedProblem, ReducedProblem]:
    """Even degree: drop the lowest root on P and the highest on R.

    Derived facts re-checked exactly: v >= f_2 on P (so q(v) >= 0 there) and
    v <= f_{n-1} on R (so r(v) <= 0 there); plus the full sign brackets of
    the reduced polynomials on their regions.  The R-side problem is returned
    with u and v swapped, restoring the standard orientation.
    """
    _require_sorted(p)
    n = p.degree
    if n < 2 or n % 2:
        raise InvalidParameterError(f"even reduction needs even degree, got {n}")
    _require_cover_domain(p, cover)
    _certify_bracket(p, u, v)

    P, R = cover.P, cover.R
    _check_le_on(p.roots[1], v, P, "v >= f_2 on P")
    q = FactoredPoly(p.roots[1:], is_sorted=True)
    _check_profile_on(q, u, P, "nonpos", "q(u) <= 0 on P")
    _check_profile_on(q, v, P, "nonneg", "q(v) >= 0 on P")

    _check_le_on(v, p.roots[n - 2], R, "v <= f_{n-1} on R")
    r = FactoredPoly(p.roots[: n - 1], is_sorted=True)
    _check_profile_on(r, u, R, "nonneg", "r(u) >= 0 on R")
    _check_profile_on(r, v, R, "nonpos", "r(v) <= 0 on R")

    return (
        ReducedProblem(q, P, u, v, swapped=False),
        ReducedProblem(r, R, v, u, swapped=True),
    )


def reduce_to_le(
    p: FactoredPoly, u: PLFunction, v: PLFunction, cover: PQRCover
) -> ReducedProblem:
    """Odd degree n >= 3, on R only: drop both extreme roots.

    On R the order of u and v is reversed, which forces v <= f_{n-1} and
    u >= f_2 there (both re-checked); the middle polynomial then brackets the
    pair the other way around, so the returned problem swaps u and v.
    """
    _require_sorted(p)
    n = p.degree
    if n < 3 or n % 2 == 0:
        raise InvalidParameterError(f"odd reduction needs odd degree >= 3, got {n}")
    _require_cover_domain(p, cover)
    _certify_bracket(p, u, v)

    R = cover.R
    _check_le_on(v, p.roots[n - 2], R, "v <= f_{n-1} on R")
    _check_le_on(p.roots[1], u, R, "u >= f_2 on R")
    q = FactoredPoly(p.roots[1 : n - 1], is_sorted=True)
    _check_profile_on(q, u, R, "nonneg", "q(u) >= 0 on R")
    _check_profile_on(q, v, R, "nonpos", "q(v) <= 0 on R")
    return ReducedProblem(q, R, v, u, swapped=True)
