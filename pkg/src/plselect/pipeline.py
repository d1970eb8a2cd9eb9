"""End-to-end solver with a replayable certificate.

``solve_pipeline`` runs the whole construction on one parsed problem: align
and sort the roots, certify the sign brackets, split the domain by the order
of the bounds, take the forced strip where they agree, reduce even degrees,
reorient the reversed side, work the final case from crochet patterns
(supplied ones when they fit, searched ones otherwise), and glue the pieces.
Every reduction step, every inequality the construction relies on, and the
origin of each piece of the answer are recorded in order, so serializing the
result twice yields byte-identical certificates.

When the constructive route dead-ends (pattern search exhausted, or a cap
hit), the pipeline falls back to the exhaustive branch-graph search on the
whole aligned instance, which either finds a selection or certifies that
none exists.  A failed sign bracket on the input is reported as a status,
not an exception; hypothesis violations raised deeper (for example by
supplied patterns that fail their stage constraints) propagate with the
piece path prefixed to the clause.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from typing import Mapping, Sequence

from .crochet import (
    PATTERN_SEARCH_CAP,
    CrochetPattern,
    assemble_final,
    build_scaffold,
    search_pattern,
)
from .domain import ClosedSet, Complex1D, cell_id, extract
from .errors import HypothesisViolation, PLSelectError, SizeCapError
from .plfun import PLFunction, pl_max, pl_min
from .poly import (
    LATTICE_SORT_CAP,
    FactoredPoly,
    align_instance,
    sign_profile,
    sort_roots_lattice,
    sort_roots_pointwise,
)
from .problem import ProblemFile
from .regions import _certify_bracket, glue, reduce_even, reduce_to_le, split_pqr
from .selection import CYCLIC_CELL_CAP, Obstruction, find_selection

SOLVED = "solved"
NO_SELECTION = "no_selection"
HYPOTHESIS_FAILED = "hypothesis_failed"


@dataclass(frozen=True)
class PipelineResult:
    """Outcome plus the full replayable report.

    ``poly``, ``u`` and ``v`` live on the aligned (and possibly refined)
    complex ``domain``; so does ``w`` when ``status`` is ``"solved"``.
    ``steps`` narrate the reductions in execution order, ``checks`` list
    every verified inequality with the piece it was verified on, and
    ``provenance`` says where each piece of ``w`` came from.
    """

    status: str
    domain: Complex1D
    poly: FactoredPoly
    u: PLFunction
    v: PLFunction
    w: PLFunction | None
    obstruction: Obstruction | None
    failure: tuple[str, str | None] | None
    steps: tuple[Mapping, ...]
    checks: tuple[Mapping, ...]
    provenance: tuple[Mapping, ...]

    @property
    def found(self) -> bool:
        return self.w is not None

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "domain": self.domain.to_json(),
            "degree": self.poly.degree,
            "roots": [[str(x) for x in f.values] for f in self.poly.roots],
            "u": [str(x) for x in self.u.values],
            "v": [str(x) for x in self.v.values],
            "w": None if self.w is None else [str(x) for x in self.w.values],
            "obstruction": None if self.obstruction is None else self.obstruction.to_json(),
            "failure": (
                None
                if self.failure is None
                else {"clause": self.failure[0], "witness": self.failure[1]}
            ),
            "steps": [dict(s) for s in self.steps],
            "checks": [dict(c) for c in self.checks],
            "provenance": [dict(p) for p in self.provenance],
        }


class _DeadEnd(Exception):
    """Constructive route gave up; fall back to the exhaustive search."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@contextmanager
def _stage(path: str):
    """Prefix the piece path onto hypothesis violations raised inside."""
    try:
        yield
    except HypothesisViolation as exc:
        if getattr(exc, "_staged", False):
            raise
        staged = HypothesisViolation(f"{path}: {exc.clause}", exc.witness)
        staged._staged = True
        raise staged from exc


class _Recorder:
    def __init__(self):
        self.steps: list[dict] = []
        self.checks: list[dict] = []
        self.pieces: list[dict] = []

    def step(self, kind: str, **detail):
        self.steps.append({"step": kind, **detail})

    def check(self, where: str, clause: str):
        self.checks.append({"where": where, "clause": clause, "verdict": "pass"})

    def piece(self, path: str, source: str, cells: int):
        self.pieces.append({"piece": path, "source": source, "cells": cells})


def _restricted(f: PLFunction, view) -> PLFunction:
    return PLFunction(view.complex, tuple(view.restrict_values(f.values)))


class _Solver:
    """Recursive constructive solver over one aligned, sorted instance."""

    def __init__(self, rec: _Recorder, patterns: Sequence[CrochetPattern], cell_cap: int | None):
        self.rec = rec
        self.patterns = tuple(patterns)
        self.search_cap = cell_cap if cell_cap is not None else PATTERN_SEARCH_CAP

    # -- dispatch ------------------------------------------------------

    def solve(self, p: FactoredPoly, u: PLFunction, v: PLFunction, path: str) -> PLFunction:
        if p.degree == 1:
            return self._single_root(p, u, v, path)
        with _stage(path):
            cover = split_pqr(u, v)
        if cover.P.domain != p.domain:
            raise PLSelectError("internal error: split refined an aligned domain")
        self.rec.step(
            "split",
            path=path,
            P=len(cover.P.cell_ids()),
            Q=len(cover.Q.cell_ids()),
            R=len(cover.R.cell_ids()),
        )
        pieces: list[tuple[ClosedSet, object]] = []
        if not cover.Q.is_empty():
            pieces.append((cover.Q, u))
            self._check_forced_strip(p, cover.Q, u, path)
            self.rec.piece(f"{path}.Q", "forced: u = v", len(cover.Q.cell_ids()))
        if p.degree % 2 == 0:
            with _stage(path):
                on_p, on_r = reduce_even(p, u, v, cover)
            self.rec.step("reduce-even", path=path, degree=p.degree)
            for clause in (
                "p(u) <= 0",
                "p(v) >= 0",
                "v >= f_2 on P",
                "q(u) <= 0 on P",
                "q(v) >= 0 on P",
                "v <= f_{n-1} on R",
                "r(u) >= 0 on R",
                "r(v) <= 0 on R",
            ):
                self.rec.check(path, clause)
            for reduced, tag in ((on_p, "P"), (on_r, "R")):
                if reduced.region.is_empty():
                    continue
                if reduced.swapped:
                    self.rec.step("swap-orientation", path=f"{path}.{tag}")
                pieces.append((reduced.region, self._on_region(reduced, f"{path}.{tag}")))
        else:
            if not cover.P.is_empty():
                pieces.append((cover.P, self._final_case(p, u, v, cover.P, f"{path}.P")))
            if not cover.R.is_empty():
                with _stage(path):
                    reduced = reduce_to_le(p, u, v, cover)
                self.rec.step("reduce-to-le", path=path, degree=p.degree)
                for clause in (
                    "p(u) <= 0",
                    "p(v) >= 0",
                    "v <= f_{n-1} on R",
                    "u >= f_2 on R",
                    "q(u) >= 0 on R",
                    "q(v) <= 0 on R",
                ):
                    self.rec.check(path, clause)
                self.rec.step("swap-orientation", path=f"{path}.R")
                pieces.append((reduced.region, self._on_region(reduced, f"{path}.R")))
        with _stage(path):
            w = glue(pieces)
        self.rec.step("glue", path=path, pieces=len(pieces))
        return w

    # -- pieces ---------------------------------------------------------

    def _single_root(self, p, u, v, path: str) -> PLFunction:
        f = p.roots[0]
        lo, hi = pl_min(u, v), pl_max(u, v)
        bad = lo.first_violation_le(f)
        if bad is None:
            bad = f.first_violation_le(hi)
        if bad is not None:
            raise PLSelectError(
                f"internal error: single root escapes the bracket at {bad} ({path})"
            )
        self.rec.check(path, "min(u, v) <= f_1")
        self.rec.check(path, "f_1 <= max(u, v)")
        self.rec.piece(path, "single root", f.domain.n_cells)
        return f

    def _check_forced_strip(self, p, strip, u, path: str) -> None:
        prof = sign_profile(p, u)
        located = prof.sub.relocate_set(strip)
        for cell in located.cells():
            if prof.sign_of(cell) != 0:
                raise PLSelectError(
                    f"internal error: p(u) = 0 fails on the forced strip at "
                    f"{cell_id(cell)} ({path})"
                )
        self.rec.check(f"{path}.Q", "p(u) = 0 on Q")

    def _on_region(self, reduced, path: str):
        """Solve a reduced problem on its region; value suitable for glue."""
        region = reduced.region
        if region.is_whole():
            return self.solve(reduced.poly, reduced.u, reduced.v, path)
        view = extract(region)
        sub_poly = FactoredPoly(
            tuple(_restricted(f, view) for f in reduced.poly.roots),
            is_sorted=reduced.poly.is_sorted,
        )
        self.rec.step(
            "restrict", path=path, cells=view.complex.n_cells, of=region.domain.n_cells
        )
        w = self.solve(sub_poly, _restricted(reduced.u, view), _restricted(reduced.v, view), path)
        return view.lift_values(w.values)

    # -- final case ------------------------------------------------------

    def _final_case(self, p, u, v, region, path: str):
        if region.is_whole():
            ps, us, vs, view = p, u, v, None
        else:
            view = extract(region)
            ps = FactoredPoly(
                tuple(_restricted(f, view) for f in p.roots), is_sorted=p.is_sorted
            )
            us, vs = _restricted(u, view), _restricted(v, view)
            self.rec.step(
                "restrict", path=path, cells=view.complex.n_cells, of=region.domain.n_cells
            )
        k = (ps.degree - 1) // 2
        with _stage(path):
            scaffolds = build_scaffold(ps, us, vs)
        self.rec.step("final-case", path=path, stages=k, cells=ps.domain.n_cells)
        for clause in ("p(u) <= 0", "p(v) >= 0", "X = cl(u < v)"):
            self.rec.check(path, clause)

        patterns, source = self._pick_patterns(ps, scaffolds, k, path)
        with _stage(path):
            w = assemble_final(ps, us, vs, scaffolds, patterns)
        self.rec.step("assemble", path=path, patterns=source)
        for i in range(1, k + 1):
            self.rec.check(path, f"stage {i}: crochet pattern admissible")
            self.rec.check(path, f"stage {i} fact (1): u <= f_{2*i-1} on X | Y")
            self.rec.check(path, f"stage {i} fact (2): v >= f_{2*i+1} on Y | Z")
            self.rec.check(path, f"stage {i} fact (3): u = f_{2*i-1} = f_{2*i} on X & Y")
            self.rec.check(path, f"stage {i} fact (4): v = f_{2*i+1} = f_{2*i} on Y & Z")
            self.rec.check(
                path,
                f"stage {i} fact (5): u <= f_{2*i-1} <= f_{2*i} <= f_{2*i+1} <= v on Y",
            )
        self.rec.check(path, "w is well-defined on overlaps")
        self.rec.check(path, "u <= w <= v")
        self.rec.check(path, "p(w) = 0")
        self.rec.piece(
            path, f"final case ({source} patterns, {k} stages)", ps.domain.n_cells
        )
        if view is None:
            return w
        return view.lift_values(w.values)

    def _pick_patterns(self, ps, scaffolds, k: int, path: str):
        if self.patterns:
            if len(self.patterns) == k and all(
                pat.domain == ps.domain for pat in self.patterns
            ):
                return list(self.patterns), "supplied"
            self.rec.step(
                "skip-supplied-patterns",
                path=path,
                reason="pattern count or domain does not match this final case",
            )
        found: list[CrochetPattern] = []
        visited: list[int] = []
        for s in scaffolds:
            try:
                outcome = search_pattern(
                    s.A, s.B, s.C, s.D, ps.domain, cell_cap=self.search_cap
                )
            except SizeCapError as exc:
                raise _DeadEnd(f"{path}: pattern search skipped: {exc}") from None
            if not outcome.found:
                raise _DeadEnd(
                    f"{path}: pattern search exhausted at stage {s.index} "
                    f"({outcome.visited} labelings visited)"
                )
            found.append(outcome.pattern)
            visited.append(outcome.visited)
        self.rec.step("pattern-search", path=path, visited=visited)
        return found, "searched"


def _verify_selection(rec: _Recorder, p, u, v, w) -> None:
    lo, hi = pl_min(u, v), pl_max(u, v)
    bad = lo.first_violation_le(w)
    if bad is None:
        bad = w.first_violation_le(hi)
    if bad is not None:
        raise PLSelectError(f"internal error: selection escapes the bounds at {bad}")
    rec.check("w", "min(u, v) <= w")
    rec.check("w", "w <= max(u, v)")
    prof = sign_profile(p, w)
    cell = prof.first_cell_where(lambda s: s != 0)
    if cell is not None:
        raise PLSelectError(
            f"internal error: p(w) = 0 fails at {cell_id(cell)}"
        )
    rec.check("w", "p(w) = 0")


def solve_pipeline(problem: ProblemFile, *, cell_cap: int | None = None) -> PipelineResult:
    """Solve a parsed problem and narrate every step of the construction."""
    cap = cell_cap if cell_cap is not None else problem.options.get("cell_cap")
    rec = _Recorder()

    p0 = problem.poly
    p, u, v = align_instance(p0, problem.u, problem.v)
    rec.step(
        "align", cells_before=p0.domain.n_cells, cells_after=p.domain.n_cells
    )
    if p.degree <= LATTICE_SORT_CAP:
        ps, method = sort_roots_lattice(p), "lattice"
    else:
        ps, method = sort_roots_pointwise(p), "pointwise"
    if ps.domain != p.domain:
        raise PLSelectError("internal error: sorting refined an aligned domain")
    rec.step("sort", method=method, degree=ps.degree)

    def result(status, w=None, obstruction=None, failure=None) -> PipelineResult:
        return PipelineResult(
            status=status,
            domain=ps.domain,
            poly=ps,
            u=u,
            v=v,
            w=w,
            obstruction=obstruction,
            failure=failure,
            steps=tuple(rec.steps),
            checks=tuple(rec.checks),
            provenance=tuple(rec.pieces),
        )

    try:
        _certify_bracket(ps, u, v)
    except HypothesisViolation as exc:
        rec.step("reject", clause=exc.clause, witness=exc.witness)
        return result(HYPOTHESIS_FAILED, failure=(exc.clause, exc.witness))
    rec.check("w", "p(u) <= 0")
    rec.check("w", "p(v) >= 0")

    solver = _Solver(rec, problem.patterns, cap)
    try:
        w = solver.solve(ps, u, v, "w")
    except _DeadEnd as stop:
        rec.step("fallback", reason=stop.reason)
        res = find_selection(
            ps, u, v, check_brackets=False,
            cell_cap=cap if cap is not None else CYCLIC_CELL_CAP,
        )
        if not res.found:
            rec.step("certify-no-selection", cut=res.obstruction.cut_vertex)
            return result(NO_SELECTION, obstruction=res.obstruction)
        w = res.w
        rec.piece("w", "exhaustive branch-graph search (fallback)", ps.domain.n_cells)

    _verify_selection(rec, ps, u, v, w)
    return result(SOLVED, w=w)
