import json
from fractions import Fraction as F
from pathlib import Path

import pytest

from plselect.errors import ProblemFormatError
from plselect.problem import load_problem, parse_problem, problem_from_json, problem_to_json

FIXTURES = Path(__file__).parent / "fixtures"


def minimal(**over):
    obj = {
        "domain": {"kind": "interval", "breakpoints": ["0", "1"]},
        "functions": {
            "f1": {"values": ["0", "0"]},
            "lo": {"values": ["-1", "-1"]},
            "hi": {"values": ["1", "1"]},
        },
        "poly": {"roots": ["f1"]},
        "bounds": {"u": "lo", "v": "hi"},
    }
    obj.update(over)
    return obj


def test_load_fixture_round_trip():
    pf = load_problem(FIXTURES / "cubic_obstruction.json")
    assert pf.domain.kind == "interval"
    assert pf.domain.coords == (0, F(1, 4), F(3, 4), 1)
    assert pf.root_names == ("f1", "f2", "f3")
    assert pf.u.values == (0, 0, 0, 0)
    assert pf.v.values == (1, 1, 1, 1)
    assert pf.poly.degree == 3
    assert pf.function("f").values == (0, F(1, 4), F(3, 4), 1)
    # re-serialized form parses back to the same content
    again = problem_from_json(problem_to_json(pf))
    assert again.domain == pf.domain
    assert again.functions == pf.functions
    assert again.root_names == pf.root_names


def test_values_are_exact_rationals():
    obj = minimal()
    obj["functions"]["f1"]["values"] = ["1/3", "2/3"]
    pf = problem_from_json(obj)
    assert pf.functions["f1"].values == (F(1, 3), F(2, 3))


def test_patterns_and_options_parse():
    pf = load_problem(FIXTURES / "constant_final.json")
    assert len(pf.patterns) == 1
    assert pf.patterns[0].x0.cell_ids() == ["v0", "v1", "e0"]
    pf2 = load_problem(FIXTURES / "crooked_walk.json")
    assert pf2.options == {"cell_cap": 23}


@pytest.mark.parametrize(
    "breakage,location",
    [
        (lambda o: o.pop("domain"), "domain"),
        (lambda o: o.pop("functions"), "functions"),
        (lambda o: o.pop("poly"), "poly"),
        (lambda o: o.pop("bounds"), "bounds"),
        (lambda o: o.update(extra=1), "extra"),
        (lambda o: o["functions"].update(bad={"values": ["0"]}), "functions.bad.values"),
        (
            lambda o: o["functions"].update(bad={"values": ["0", 0.5]}),
            "functions.bad.values[1]",
        ),
        (
            lambda o: o["functions"].update(bad={"values": ["0", "x"]}),
            "functions.bad.values[1]",
        ),
        (lambda o: o["functions"].update(bad={"vals": []}), "functions.bad"),
        (lambda o: o["poly"].update(roots=[]), "poly.roots"),
        (lambda o: o["poly"].update(roots=["nope"]), "poly.roots[0]"),
        (lambda o: o["bounds"].pop("u"), "bounds.u"),
        (lambda o: o["bounds"].update(v="nope"), "bounds.v"),
        (lambda o: o.update(patterns=[{"X0": []}]), "patterns[0]"),
        (lambda o: o.update(options={"weird": 1}), "options.weird"),
        (lambda o: o.update(options={"cell_cap": 0}), "options.cell_cap"),
        (lambda o: o.update(options={"cell_cap": True}), "options.cell_cap"),
        (lambda o: o.update(options={"tolerance": "0"}), "options.tolerance"),
    ],
)
def test_error_locations(breakage, location):
    obj = minimal()
    breakage(obj)
    with pytest.raises(ProblemFormatError) as info:
        problem_from_json(obj)
    assert info.value.location == location


def test_invalid_json_reports_position():
    with pytest.raises(ProblemFormatError) as info:
        parse_problem("{not json")
    assert info.value.location == "$"
    assert "line 1" in str(info.value)


def test_top_level_must_be_object():
    with pytest.raises(ProblemFormatError) as info:
        parse_problem(json.dumps([1, 2]))
    assert info.value.location == "$"
