"""Problem files: one JSON document holding a complete solver instance.

The format reuses the library's own serialization: the complex as written by
``Complex1D.to_json``, each PL function as its vertex value list under a
name, the polynomial as a list of root-function names, and the bounds as a
pair of names.  Optional entries supply crochet patterns for the final case
and a small options table.  All numbers are exact (ints or ``"p/q"``
strings); every validation failure reports a JSON-path-like location.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from .crochet import CrochetPattern, pattern_from_json
from .domain import Complex1D, as_fraction, complex_from_json
from .errors import InvalidParameterError, PLSelectError, ProblemFormatError
from .plfun import PLFunction
from .poly import FactoredPoly

_TOP_KEYS = {"domain", "functions", "poly", "bounds", "patterns", "options"}
_OPTION_KEYS = {"cell_cap", "tolerance"}


@dataclass(frozen=True)
class ProblemFile:
    """A parsed instance: domain, named functions, factored poly, bounds."""

    domain: Complex1D
    functions: Mapping[str, PLFunction]
    root_names: tuple[str, ...]
    u_name: str
    v_name: str
    patterns: tuple[CrochetPattern, ...] = ()
    options: Mapping[str, object] = field(default_factory=dict)

    @property
    def poly(self) -> FactoredPoly:
        return FactoredPoly(tuple(self.functions[n] for n in self.root_names))

    @property
    def u(self) -> PLFunction:
        return self.functions[self.u_name]

    @property
    def v(self) -> PLFunction:
        return self.functions[self.v_name]

    def function(self, name: str) -> PLFunction:
        if name not in self.functions:
            known = ", ".join(sorted(self.functions))
            raise InvalidParameterError(f"no function named {name!r} (have: {known})")
        return self.functions[name]


def parse_problem(text: str) -> ProblemFile:
    """Parse a problem file from its JSON text."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(
            "$", f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})"
        ) from exc
    return problem_from_json(obj)


def load_problem(path) -> ProblemFile:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_problem(fh.read())


def _require_object(obj, location: str) -> dict:
    if not isinstance(obj, dict):
        raise ProblemFormatError(location, f"expected an object, got {type(obj).__name__}")
    return obj


def _parse_functions(dom: Complex1D, obj) -> dict[str, PLFunction]:
    table = _require_object(obj, "functions")
    if not table:
        raise ProblemFormatError("functions", "at least one function is required")
    out: dict[str, PLFunction] = {}
    for name in table:
        if not isinstance(name, str) or not name:
            raise ProblemFormatError("functions", f"bad function name {name!r}")
        entry = _require_object(table[name], f"functions.{name}")
        if set(entry) != {"values"}:
            raise ProblemFormatError(
                f"functions.{name}", 'expected exactly one key, "values"'
            )
        values = entry["values"]
        if not isinstance(values, list) or len(values) != dom.n_vertices:
            got = len(values) if isinstance(values, list) else type(values).__name__
            raise ProblemFormatError(
                f"functions.{name}.values",
                f"expected {dom.n_vertices} vertex values, got {got}",
            )
        parsed = []
        for i, raw in enumerate(values):
            try:
                parsed.append(as_fraction(raw))
            except PLSelectError as exc:
                raise ProblemFormatError(
                    f"functions.{name}.values[{i}]", str(exc)
                ) from exc
        out[name] = PLFunction(dom, tuple(parsed))
    return out


def _parse_name(obj, key: str, location: str, functions) -> str:
    if key not in obj:
        raise ProblemFormatError(location, "missing")
    name = obj[key]
    if name not in functions:
        raise ProblemFormatError(location, f"unknown function {name!r}")
    return name


def _parse_options(obj) -> dict[str, object]:
    table = _require_object(obj, "options")
    out: dict[str, object] = {}
    for key in table:
        if key not in _OPTION_KEYS:
            known = ", ".join(sorted(_OPTION_KEYS))
            raise ProblemFormatError(f"options.{key}", f"unknown option (have: {known})")
    if "cell_cap" in table:
        cap = table["cell_cap"]
        if not isinstance(cap, int) or isinstance(cap, bool) or cap < 1:
            raise ProblemFormatError("options.cell_cap", f"expected a positive int, got {cap!r}")
        out["cell_cap"] = cap
    if "tolerance" in table:
        try:
            tol = as_fraction(table["tolerance"])
        except PLSelectError as exc:
            raise ProblemFormatError("options.tolerance", str(exc)) from exc
        if tol <= 0:
            raise ProblemFormatError("options.tolerance", f"must be positive, got {tol}")
        out["tolerance"] = tol
    return out


def problem_from_json(obj) -> ProblemFile:
    top = _require_object(obj, "$")
    for key in top:
        if key not in _TOP_KEYS:
            known = ", ".join(sorted(_TOP_KEYS))
            raise ProblemFormatError(key, f"unknown key (have: {known})")
    for key in ("domain", "functions", "poly", "bounds"):
        if key not in top:
            raise ProblemFormatError(key, "missing")

    dom = complex_from_json(top["domain"])
    functions = _parse_functions(dom, top["functions"])

    poly = _require_object(top["poly"], "poly")
    roots = poly.get("roots")
    if not isinstance(roots, list) or not roots:
        raise ProblemFormatError("poly.roots", "expected a nonempty list of function names")
    for i, name in enumerate(roots):
        if name not in functions:
            raise ProblemFormatError(f"poly.roots[{i}]", f"unknown function {name!r}")

    bounds = _require_object(top["bounds"], "bounds")
    u_name = _parse_name(bounds, "u", "bounds.u", functions)
    v_name = _parse_name(bounds, "v", "bounds.v", functions)

    patterns: list[CrochetPattern] = []
    if "patterns" in top:
        raw = top["patterns"]
        if not isinstance(raw, list):
            raise ProblemFormatError("patterns", "expected a list of pattern objects")
        for j, item in enumerate(raw):
            try:
                patterns.append(pattern_from_json(dom, item))
            except PLSelectError as exc:
                raise ProblemFormatError(f"patterns[{j}]", str(exc)) from exc

    options = _parse_options(top["options"]) if "options" in top else {}

    return ProblemFile(
        domain=dom,
        functions=functions,
        root_names=tuple(roots),
        u_name=u_name,
        v_name=v_name,
        patterns=tuple(patterns),
        options=options,
    )


def problem_to_json(pf: ProblemFile) -> dict:
    """Re-serialize a problem (canonical form of what ``parse_problem`` read)."""
    out: dict = {
        "domain": pf.domain.to_json(),
        "functions": {
            name: {"values": [str(x) for x in f.values]}
            for name, f in sorted(pf.functions.items())
        },
        "poly": {"roots": list(pf.root_names)},
        "bounds": {"u": pf.u_name, "v": pf.v_name},
    }
    if pf.patterns:
        out["patterns"] = [pat.to_json() for pat in pf.patterns]
    if pf.options:
        out["options"] = {
            k: (v if isinstance(v, int) else str(v)) for k, v in sorted(pf.options.items())
        }
    return out
