"""Command-line front end.

Every subcommand reads a problem file (except ``crooked-gen``), prints a
JSON document, and exits 0 when a solution or passing check was produced,
2 when a certified negative answer was produced (an obstruction, a failed
check), and 1 on errors or hypothesis violations.
"""

from __future__ import annotations

import argparse
import json
import sys

from .crochet import build_scaffold, check_pattern
from .crooked import generate_crooked_chain, minimal_crooked_pattern
from .domain import as_fraction
from .errors import HypothesisViolation, NoRealRootsError, PLSelectError, ProblemFormatError
from .export import FORMATS, render, render_json, to_canonical_json
from .pipeline import HYPOTHESIS_FAILED, NO_SELECTION, solve_pipeline
from .poly import LATTICE_SORT_CAP, align_instance, sort_roots_lattice, sort_roots_pointwise
from .problem import load_problem
from .quadratic import MonicQuadratic, complete_square, solve_factored_quadratic
from .selection import f_space_probe, find_selection, zigzag_witness


def _values(f) -> list[str]:
    return [str(x) for x in f.values]


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit_json(obj, out: str | None) -> None:
    _emit(to_canonical_json(obj), out)


def _tolerance(text: str):
    tol = as_fraction(text)
    if tol <= 0:
        raise PLSelectError(f"tolerance must be positive, got {tol}")
    return tol


def _sorted_instance(pf):
    p, u, v = align_instance(pf.poly, pf.u, pf.v)
    if p.degree <= LATTICE_SORT_CAP:
        return sort_roots_lattice(p), u, v
    return sort_roots_pointwise(p), u, v


# -- subcommands -------------------------------------------------------


def _cmd_sort(args) -> int:
    pf = load_problem(args.problem)
    ps, _, _ = _sorted_instance(pf)
    _emit_json(
        {
            "domain": ps.domain.to_json(),
            "roots": [_values(f) for f in ps.roots],
        },
        args.out,
    )
    return 0


def _cmd_zigzag(args) -> int:
    pf = load_problem(args.problem)
    f1, f2, f3, _ = zigzag_witness(pf.function(args.function))
    _emit_json(
        {
            "domain": f1.domain.to_json(),
            "f1": _values(f1),
            "f2": _values(f2),
            "f3": _values(f3),
        },
        args.out,
    )
    return 0


def _cmd_quad(args) -> int:
    pf = load_problem(args.problem)
    if args.complete_square:
        name_f, name_g = args.complete_square
        q = MonicQuadratic(pf.function(name_f), pf.function(name_g))
        try:
            sq = complete_square(q, _tolerance(args.tolerance))
        except NoRealRootsError as exc:
            _emit_json(
                {"no_real_factorization": {"witness": exc.witness, "message": str(exc)}},
                args.out,
            )
            return 2
        _emit_json(
            {
                "domain": sq.domain.to_json(),
                "f1": _values(sq.f1),
                "f2": _values(sq.f2),
                "sqrt_bound": str(sq.error_bound),
                "implied_square_tolerance": str(sq.implied_square_tolerance()),
            },
            args.out,
        )
        return 0
    if len(pf.root_names) != 2:
        raise PLSelectError(
            f"quad needs a degree-2 problem, got degree {len(pf.root_names)} "
            "(or pass --complete-square F G)"
        )
    roots = [pf.functions[n] for n in pf.root_names]
    w = solve_factored_quadratic(roots[0], roots[1], pf.u, pf.v)
    _emit_json({"domain": w.domain.to_json(), "w": _values(w)}, args.out)
    return 0


def _cmd_select(args) -> int:
    pf = load_problem(args.problem)
    p, u, v = align_instance(pf.poly, pf.u, pf.v)
    kwargs = {} if args.cell_cap is None else {"cell_cap": args.cell_cap}
    res = find_selection(p, u, v, **kwargs)
    if res.found:
        _emit_json({"domain": p.domain.to_json(), "w": _values(res.w)}, args.out)
        return 0
    _emit_json(
        {"domain": p.domain.to_json(), "obstruction": res.obstruction.to_json()},
        args.out,
    )
    return 2


def _status_exit(status: str) -> int:
    if status == NO_SELECTION:
        return 2
    if status == HYPOTHESIS_FAILED:
        return 1
    return 0


def _cmd_solve(args) -> int:
    pf = load_problem(args.problem)
    result = solve_pipeline(pf, cell_cap=args.cell_cap)
    _emit(render(result, args.format, args.samples), args.out)
    return _status_exit(result.status)


def _cmd_crochet_check(args) -> int:
    pf = load_problem(args.problem)
    ps, u, v = _sorted_instance(pf)
    k = (ps.degree - 1) // 2
    if ps.degree % 2 == 0 or k < 1:
        raise PLSelectError(f"crochet-check needs odd degree >= 3, got {ps.degree}")
    if len(pf.patterns) != k:
        raise PLSelectError(
            f"degree {ps.degree} needs {k} patterns, problem file has {len(pf.patterns)}"
        )
    if any(pat.domain != ps.domain for pat in pf.patterns):
        raise PLSelectError(
            "patterns live on the raw domain but the instance refined under "
            "alignment; supply patterns on the aligned complex"
        )
    scaffolds = build_scaffold(ps, u, v)
    stages = []
    all_ok = True
    for s, pat in zip(scaffolds, pf.patterns):
        verdict = check_pattern(pat, s.A, s.B, s.C, s.D)
        all_ok = all_ok and verdict.ok
        stages.append(
            {
                "stage": s.index,
                "ok": verdict.ok,
                "clause": verdict.clause,
                "witness": verdict.witness,
            }
        )
    _emit_json({"domain": ps.domain.to_json(), "stages": stages}, args.out)
    return 0 if all_ok else 2


def _cmd_crooked_gen(args) -> int:
    if args.minimal:
        pattern = minimal_crooked_pattern(args.links)
        dom = None
    else:
        pattern, dom = generate_crooked_chain(args.links, args.level)
    out = {
        "links": pattern.links,
        "entries": list(pattern.entries),
        "length": len(pattern.entries),
    }
    if dom is not None:
        out["domain"] = dom.to_json()
    _emit_json(out, args.out)
    return 0


def _cmd_fspace_probe(args) -> int:
    pf = load_problem(args.problem)
    res = f_space_probe(pf.function(args.function))
    if res.found:
        _emit_json(
            {
                "domain": res.f.domain.to_json(),
                "f": _values(res.f),
                "w": _values(res.w),
            },
            args.out,
        )
        return 0
    _emit_json(
        {
            "domain": res.f.domain.to_json(),
            "f": _values(res.f),
            "witness": res.witness,
        },
        args.out,
    )
    return 2


def _cmd_plot(args) -> int:
    pf = load_problem(args.problem)
    result = solve_pipeline(pf, cell_cap=args.cell_cap)
    _emit(render(result, "svg"), args.out)
    return _status_exit(result.status)


# -- parser ------------------------------------------------------------


def _add_common(sub, problem: bool = True) -> None:
    if problem:
        sub.add_argument("problem", help="path to a problem JSON file")
    sub.add_argument("--out", default=None, help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plselect",
        description="Exact continuous root selection for factored PL polynomials.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sort", help="sorted root list of the instance")
    _add_common(s)
    s.set_defaults(func=_cmd_sort)

    s = sub.add_parser("zigzag", help="three-root witness built from one function")
    _add_common(s)
    s.add_argument("--function", default="f", help="function name (default: f)")
    s.set_defaults(func=_cmd_zigzag)

    s = sub.add_parser("quad", help="solve a factored quadratic exactly")
    _add_common(s)
    s.add_argument(
        "--complete-square",
        nargs=2,
        metavar=("F", "G"),
        default=None,
        help="factor t^2 + 2Ft + G approximately instead",
    )
    s.add_argument("--tolerance", default="1/1000", help="rational bound (default 1/1000)")
    s.set_defaults(func=_cmd_quad)

    s = sub.add_parser("select", help="exhaustive branch-graph selection search")
    _add_common(s)
    s.add_argument("--cell-cap", type=int, default=None, help="override the cell cap")
    s.set_defaults(func=_cmd_select)

    s = sub.add_parser("solve", help="full pipeline with a replayable certificate")
    _add_common(s)
    s.add_argument("--format", choices=FORMATS, default="json")
    s.add_argument("--cell-cap", type=int, default=None, help="override the cell cap")
    s.add_argument("--samples", type=int, default=0, help="csv: interior samples per edge")
    s.set_defaults(func=_cmd_solve)

    s = sub.add_parser("crochet-check", help="verify supplied patterns stage by stage")
    _add_common(s)
    s.set_defaults(func=_cmd_crochet_check)

    s = sub.add_parser("crooked-gen", help="generate a crooked chain pattern")
    _add_common(s, problem=False)
    s.add_argument("--links", type=int, required=True, help="number of chain links")
    s.add_argument("--level", type=int, default=1, help="recursion level (default 1)")
    s.add_argument(
        "--minimal", action="store_true", help="shortest crooked pattern instead"
    )
    s.set_defaults(func=_cmd_crooked_gen)

    s = sub.add_parser("fspace-probe", help="odd-function criterion for one function")
    _add_common(s)
    s.add_argument("--function", default="f", help="function name (default: f)")
    s.set_defaults(func=_cmd_fspace_probe)

    s = sub.add_parser("plot", help="SVG sketch of the solved (or obstructed) instance")
    _add_common(s)
    s.add_argument("--cell-cap", type=int, default=None, help="override the cell cap")
    s.set_defaults(func=_cmd_plot)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ProblemFormatError as exc:
        err = {"error": "ProblemFormatError", "location": exc.location, "message": str(exc)}
    except HypothesisViolation as exc:
        err = {
            "error": "HypothesisViolation",
            "clause": exc.clause,
            "witness": exc.witness,
            "message": str(exc),
        }
    except PLSelectError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
    except OSError as exc:
        err = {"error": "OSError", "message": str(exc)}
    sys.stderr.write(json.dumps(err, indent=2, sort_keys=True) + "\n")
    return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
