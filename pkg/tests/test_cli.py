import json
from pathlib import Path

import pytest

from plselect.cli import main
from plselect.crooked import is_crooked

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out else None, err


def write_problem(tmp_path, obj, name="problem.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return path


def test_solve_solved_exit_zero(capsys):
    code, cert, _ = run_json(capsys, "solve", FIXTURES / "quadratic.json")
    assert code == 0
    assert cert["status"] == "solved"
    assert cert["w"] == ["0", "1"]


def test_solve_obstruction_exit_two(capsys):
    code, cert, _ = run_json(capsys, "solve", FIXTURES / "cubic_obstruction.json")
    assert code == 2
    assert cert["status"] == "no_selection"
    assert cert["obstruction"]["cut_vertex"] == "v3"


def test_solve_hypothesis_failure_exit_one(capsys, tmp_path):
    path = write_problem(
        tmp_path,
        {
            "domain": {"kind": "interval", "breakpoints": ["0", "1"]},
            "functions": {
                "f1": {"values": ["0", "0"]},
                "lo": {"values": ["3", "3"]},
                "hi": {"values": ["1", "1"]},
            },
            "poly": {"roots": ["f1"]},
            "bounds": {"u": "lo", "v": "hi"},
        },
    )
    code, cert, _ = run_json(capsys, "solve", path)
    assert code == 1
    assert cert["status"] == "hypothesis_failed"
    assert cert["failure"] == {"clause": "p(u) <= 0", "witness": "v0"}


def test_solve_out_file_is_canonical(capsys, tmp_path):
    out = tmp_path / "cert.json"
    code, stdout, _ = run(capsys, "solve", FIXTURES / "even_swap.json", "--out", out)
    assert code == 0 and stdout == ""
    text = out.read_text()
    assert text == json.dumps(json.loads(text), indent=2, sort_keys=True) + "\n"


def test_solve_csv_and_svg_formats(capsys, tmp_path):
    code, out, _ = run(
        capsys, "solve", FIXTURES / "quadratic.json", "--format", "csv", "--samples", "2"
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "cell,x,u,v,w"
    assert len(lines) == 1 + 2 + 2  # header, two vertices, two edge samples
    svg = tmp_path / "plot.svg"
    code, _, _ = run(capsys, "solve", FIXTURES / "quadratic.json", "--format", "svg", "--out", svg)
    assert code == 0 and svg.read_text().startswith("<svg")


def test_plot_renders_obstruction(capsys):
    code, out, _ = run(capsys, "plot", FIXTURES / "cubic_obstruction.json")
    assert code == 2  # certified negative, plot still rendered
    assert "no selection: cut v3" in out


def test_sort_lists_sorted_roots(capsys):
    code, obj, _ = run_json(capsys, "sort", FIXTURES / "even_swap.json")
    assert code == 0
    assert obj["roots"] == [["0", "0"], ["1", "1"], ["2", "2"], ["3", "3"]]


def test_zigzag_frozen_values(capsys):
    code, obj, _ = run_json(
        capsys, "zigzag", FIXTURES / "cubic_obstruction.json", "--function", "f"
    )
    assert code == 0
    assert obj["f1"] == ["-1/4", "0", "0", "1/4"]
    assert obj["f2"] == ["-1/8", "0", "1", "9/8"]
    assert obj["f3"] == ["3/4", "1", "1", "5/4"]


def test_quad_exact(capsys):
    code, obj, _ = run_json(capsys, "quad", FIXTURES / "quadratic.json")
    assert code == 0
    assert obj["w"] == ["0", "1"]


def test_quad_complete_square_and_no_real_roots(capsys, tmp_path):
    base = {
        "domain": {"kind": "interval", "breakpoints": ["0", "1"]},
        "functions": {
            "f": {"values": ["0", "0"]},
            "g": {"values": ["-1", "-1"]},
            "z": {"values": ["0", "0"]},
        },
        "poly": {"roots": ["z"]},
        "bounds": {"u": "z", "v": "z"},
    }
    path = write_problem(tmp_path, base)
    code, obj, _ = run_json(capsys, "quad", path, "--complete-square", "f", "g")
    assert code == 0
    assert obj["f1"] == ["-1", "-1"] and obj["f2"] == ["1", "1"]  # t^2 - 1
    base["functions"]["g"]["values"] = ["1", "1"]  # t^2 + 1: no real roots
    path2 = write_problem(tmp_path, base, "neg.json")
    code, obj, _ = run_json(capsys, "quad", path2, "--complete-square", "f", "g")
    assert code == 2
    assert obj["no_real_factorization"]["witness"] == "v0"


def test_select_reports_obstruction(capsys):
    code, obj, _ = run_json(capsys, "select", FIXTURES / "cubic_obstruction.json")
    assert code == 2
    assert obj["obstruction"]["cut_vertex"] == "v3"


def test_crochet_check_passes_and_fails(capsys, tmp_path):
    code, obj, _ = run_json(capsys, "crochet-check", FIXTURES / "constant_final.json")
    assert code == 0
    assert obj["stages"] == [{"stage": 1, "ok": True, "clause": None, "witness": None}]
    bad = json.loads((FIXTURES / "constant_final.json").read_text())
    bad["patterns"] = [{"X0": ["v0"], "X1": [], "X2": []}]
    path = write_problem(tmp_path, bad)
    code, obj, _ = run_json(capsys, "crochet-check", path)
    assert code == 2
    assert obj["stages"][0]["ok"] is False
    assert obj["stages"][0]["clause"] == "X0 | X1 | X2 covers X"


def test_crooked_gen_is_crooked(capsys):
    code, obj, _ = run_json(capsys, "crooked-gen", "--links", "3", "--level", "1")
    assert code == 0
    assert is_crooked(obj["entries"], obj["links"])
    assert obj["length"] == len(obj["entries"])
    code, obj, _ = run_json(capsys, "crooked-gen", "--links", "4", "--minimal")
    assert code == 0
    assert is_crooked(obj["entries"], 4)


def test_fspace_probe_both_outcomes(capsys, tmp_path):
    code, obj, _ = run_json(capsys, "fspace-probe", FIXTURES / "cubic_obstruction.json")
    assert code == 0  # f = x maps into [0, 1]; nonnegative, so a factor exists
    assert obj["w"] == ["1", "1", "1", "1"]
    path = write_problem(
        tmp_path,
        {
            "domain": {"kind": "interval", "breakpoints": ["0", "1"]},
            "functions": {
                "f": {"values": ["-1/2", "1/2"]},
                "z": {"values": ["0", "0"]},
            },
            "poly": {"roots": ["z"]},
            "bounds": {"u": "z", "v": "z"},
        },
    )
    code, obj, _ = run_json(capsys, "fspace-probe", path)
    assert code == 2
    assert obj["witness"] == "v1"
    assert obj["f"] == ["-1/2", "0", "1/2"]  # refined at the sign change


def test_errors_go_to_stderr_as_json(capsys, tmp_path):
    code, out, err = run(capsys, "solve", tmp_path / "missing.json")
    assert code == 1 and out == ""
    assert json.loads(err)["error"] == "OSError"
    bad = write_problem(tmp_path, {"domain": None})
    code, out, err = run(capsys, "solve", bad)
    assert code == 1
    assert json.loads(err)["error"] == "ProblemFormatError"
    code, out, err = run(capsys, "zigzag", FIXTURES / "quadratic.json", "--function", "nope")
    assert code == 1
    assert json.loads(err)["error"] == "InvalidParameterError"


def test_cell_cap_flag_reaches_search(capsys):
    code, obj, _ = run_json(
        capsys, "solve", FIXTURES / "crooked_walk.json", "--cell-cap", "15"
    )
    assert code == 0
    assert any(s["step"] == "fallback" for s in obj["steps"])
