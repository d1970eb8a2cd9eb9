"""Monic quadratic solving: exact when factored, certified-approximate otherwise.

The exact path takes roots ``f1 <= f2`` and a bracket ``p(u) <= 0 <= p(v)``
and glues ``f2`` on the closure of ``{u < v}``, ``u`` on ``{u = v}`` and
``f1`` on the closure of ``{u > v}``.  Each inequality that makes the glue
well-defined is re-checked exactly, as are the postconditions ``p(w) = 0``
and ``u ∧ v <= w <= u ∨ v``.

The approximate path factors ``t^2 + 2ft + g`` by completing the square.
The discriminant ``f^2 - g`` is quadratic on each edge with nonnegative
leading coefficient, so its exact minimum is at an endpoint or a single
interior point — both checked exactly, and a dip below zero is reported with
the offending edge.  Its square root is approximated by a PL function whose
vertex values are rational square-root brackets; edges are split dyadically
until, on every edge, the bracket around the whole range of the root is
narrower than the requested tolerance.  The returned error bound is certified:
PL interpolation and the true root both live inside the same per-edge bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .domain import Complex1D, as_fraction, cell_id, subdivide
from .errors import (
    HypothesisViolation,
    InvalidParameterError,
    NoRealRootsError,
    PLSelectError,
)
from .plfun import PLFunction, align, pl_max, pl_min
from .poly import FactoredPoly, sign_profile
from .regions import glue, split_pqr

_MAX_SPLIT_ROUNDS = 200


@dataclass(frozen=True)
class MonicQuadratic:
    """t^2 + 2 f t + g with PL coefficients on one complex."""

    f: PLFunction
    g: PLFunction

    def __post_init__(self):
        if self.f.domain != self.g.domain:
            raise InvalidParameterError("coefficients must share one complex")

    @property
    def domain(self) -> Complex1D:
        return self.f.domain


# ---------------------------------------------------------------------------
# Exact path: completely factored input
# ---------------------------------------------------------------------------


def solve_factored_quadratic(
    f1: PLFunction, f2: PLFunction, u: PLFunction, v: PLFunction
) -> PLFunction:
    """Exact root selection for (t - f1)(t - f2) with p(u) <= 0 <= p(v)."""
    dom, (rf1, rf2, ru, rv) = align([f1, f2, u, v])
    hit = rf1.first_violation_le(rf2)
    if hit is not None:
        raise HypothesisViolation("f_1 <= f_2", witness=hit)
    p = FactoredPoly((rf1, rf2), is_sorted=True)
    pu = sign_profile(p, ru)
    cell = pu.first_positive()
    if cell is not None:
        raise HypothesisViolation("p(u) <= 0", witness=cell_id(cell))
    pv = sign_profile(p, rv)
    cell = pv.first_negative()
    if cell is not None:
        raise HypothesisViolation("p(v) >= 0", witness=cell_id(cell))

    cover = split_pqr(ru, rv)
    if cover.domain != dom:
        raise PLSelectError("internal error: split refined an aligned domain")
    # the position facts that make the glue well defined, re-checked
    for fact, (a, b, region) in {
        "u <= f_2 on P": (ru, rf2, cover.P),
        "f_2 <= v on P": (rf2, rv, cover.P),
        "v <= f_1 on R": (rv, rf1, cover.R),
        "f_1 <= u on R": (rf1, ru, cover.R),
    }.items():
        hit = a.first_violation_le(b, region)
        if hit is not None:
            raise HypothesisViolation(fact, witness=hit)

    w = glue([(cover.P, rf2), (cover.Q, ru), (cover.R, rf1)])
    if not sign_profile(p, w).is_zero():
        raise PLSelectError("internal error: glued w is not a root")
    lo, hi = pl_min(ru, rv), pl_max(ru, rv)
    if lo.first_violation_le(w) is not None or w.first_violation_le(hi) is not None:
        raise PLSelectError("internal error: glued w escapes the bounds")
    return w


# ---------------------------------------------------------------------------
# Approximate path: completing the square
# ---------------------------------------------------------------------------


def sqrt_brackets(x, width) -> tuple[Fraction, Fraction]:
    """Rational lo <= sqrt(x) <= hi with hi - lo <= width; exact when possible."""
    x = as_fraction(x)
    width = as_fraction(width)
    if x < 0:
        raise InvalidParameterError("sqrt_brackets needs a nonnegative argument")
    if width <= 0:
        raise InvalidParameterError("bracket width must be positive")
    rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        root = Fraction(rn, rd)
        return root, root
    n = 1
    while Fraction(2, n) > width:
        n *= 2
    s = math.isqrt((x.numerator * n * n) // x.denominator)
    return Fraction(s, n), Fraction(s + 2, n)


def _disc_at_vertices(q: MonicQuadratic) -> list[Fraction]:
    return [fv * fv - gv for fv, gv in zip(q.f.values, q.g.values)]


def _edge_disc_extrema(
    q: MonicQuadratic, e: int, disc: list[Fraction]
) -> tuple[Fraction, Fraction]:
    """Exact (min, max) of the discriminant over the closed edge ``e``."""
    a, b = q.domain.edges[e]
    fa, fb = q.f.values[a], q.f.values[b]
    ga, gb = q.g.values[a], q.g.values[b]
    da, db = disc[a], disc[b]
    lo, hi = min(da, db), max(da, db)
    # disc(t) = (fa + t*df)^2 - (ga + t*dg) on t in [0,1]; convex since df^2 >= 0
    df, dg = fb - fa, gb - ga
    A = df * df
    if A > 0:
        B = 2 * fa * df - dg
        t_star = -B / (2 * A)
        if 0 < t_star < 1:
            lo = min(lo, da + B * t_star + A * t_star * t_star)
    return lo, hi


@dataclass(frozen=True)
class SquareRootFactorization:
    """Roots -f ± h with h a certified PL approximation of sqrt(f^2 - g).

    ``abs(h(x) - sqrt(disc(x))) <= error_bound`` everywhere, and ``sqrt_upper``
    bounds sqrt(disc) from above, so the residual of the implied square
    satisfies ``abs(h^2 - disc) <= error_bound * (2*sqrt_upper + error_bound)``.
    """

    f1: PLFunction
    f2: PLFunction
    h: PLFunction
    error_bound: Fraction
    sqrt_upper: Fraction

    @property
    def domain(self) -> Complex1D:
        return self.h.domain

    def implied_square_tolerance(self) -> Fraction:
        return self.error_bound * (2 * self.sqrt_upper + self.error_bound)


def complete_square(q: MonicQuadratic, tolerance) -> SquareRootFactorization:
    """Factor t^2 + 2ft + g as (t - f1)(t - f2) up to a certified error.

    Requires the discriminant f^2 - g to be nonnegative on the whole complex
    (endpoints and interior minima are both checked exactly); otherwise there
    is no real factorization and a witness cell is reported.
    """
    tolerance = as_fraction(tolerance)
    if tolerance <= 0:
        raise InvalidParameterError("tolerance must be a positive rational")

    cur = q
    disc = _disc_at_vertices(cur)
    for x, d in enumerate(disc):
        if d < 0:
            raise NoRealRootsError(f"v{x}", f"discriminant {d} < 0 at v{x}")

    vertex_width = tolerance / 8
    target = Fraction(3, 4) * tolerance
    for _ in range(_MAX_SPLIT_ROUNDS):
        pending: dict[int, list[Fraction]] = {}
        worst = Fraction(0)
        sqrt_upper = Fraction(0)
        for e in range(cur.domain.n_edges):
            m, M = _edge_disc_extrema(cur, e, disc)
            if m < 0:
                raise NoRealRootsError(
                    f"e{e}", f"discriminant dips to {m} inside e{e}"
                )
            lo, _ = sqrt_brackets(m, vertex_width)
            _, hi = sqrt_brackets(M, vertex_width)
            sqrt_upper = max(sqrt_upper, hi)
            gap = hi - lo
            worst = max(worst, gap)
            if gap > target:
                pending[e] = [Fraction(1, 2)]
        if not pending:
            break
        sub = subdivide(cur.domain, pending)
        cur = MonicQuadratic(cur.f.relocate(sub), cur.g.relocate(sub))
        disc = _disc_at_vertices(cur)
    else:
        raise PLSelectError(
            f"square-root refinement did not converge in {_MAX_SPLIT_ROUNDS} rounds"
        )

    h_vals = []
    for d in disc:
        lo, _ = sqrt_brackets(d, vertex_width)
        h_vals.append(lo)
    h = PLFunction(cur.domain, tuple(h_vals))
    error = max(worst, vertex_width)
    if cur.domain.n_edges == 0:
        sqrt_upper = max(
            (sqrt_brackets(d, vertex_width)[1] for d in disc), default=Fraction(0)
        )
    f1 = (-cur.f) - h
    f2 = (-cur.f) + h
    return SquareRootFactorization(f1, f2, h, error, sqrt_upper)
