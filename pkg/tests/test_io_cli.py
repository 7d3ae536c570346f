import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from curve_arrange.io_cli import dyadic_str, emit_json, emit_svg, parse_config, run_cli

CP = ["--f", "y - x^2", "--g", "x^2 + y^2 - 1", "--roi", "-2,-2,2,2"]


def cli(tmp_path, *args):
    return run_cli(list(args) + ["-o", str(tmp_path / "out")])


# -- number formatting

@pytest.mark.parametrize("q,s", [(Fraction(0), "0"), (Fraction(-3, 8), "-0.375"),
                                 (Fraction(5), "5"), (Fraction(1, 1024), "0.0009765625")])
def test_dyadic_str(q, s):
    assert dyadic_str(q) == s


def test_dyadic_str_rejects_thirds():
    with pytest.raises(ValueError):
        dyadic_str(Fraction(1, 3))


@given(st.integers(-10**12, 10**12), st.integers(0, 80))
def test_dyadic_str_round_trips(n, k):
    from decimal import Decimal
    q = Fraction(n, 2 ** k)
    assert Fraction(Decimal(dyadic_str(q))) == q


# -- argument handling

def test_negative_values_parse():
    cfg = parse_config(["--f", "-x + y", "--g", "-y", "--roi", "-2,-2,2,2", "--eps", "0.05"])
    assert cfg.f == "-x + y" and cfg.g == "-y" and cfg.eps == 0.05
    assert [v.to_fraction() for v in cfg.roi] == [-2, -2, 2, 2]


def test_eps_inf_default():
    cfg = parse_config(CP)
    assert cfg.eps == float("inf") and cfg.formats == ("json",)


@pytest.mark.parametrize("extra", [["--roi", "0,0,1"], ["--roi", "0,0,0.1,0.1"],
                                   ["--eps", "-1"], ["--out", "png"], ["--max-depth", "0"]])
def test_usage_errors_exit_1(tmp_path, capsys, extra):
    args = CP[:4] + (extra if extra[0] == "--roi" else ["--roi", "-2,-2,2,2"] + extra)
    assert cli(tmp_path, *args) == 1
    assert "error" in capsys.readouterr().err


def test_missing_flag_exits_1(tmp_path):
    assert cli(tmp_path, "--f", "x") == 1


def test_aspect_ratio_exit_1(tmp_path, capsys):
    assert cli(tmp_path, "--f", "x", "--g", "y", "--roi", "0,0,10,1") == 1
    assert "aspect" in capsys.readouterr().err


def test_syntax_error_exit_1(tmp_path, capsys):
    assert cli(tmp_path, "--f", "sin(x*y", "--g", "y", "--roi", "-1,-1,1,1") == 1
    assert "column 8" in capsys.readouterr().err


def test_singular_input_exit_2(tmp_path, capsys):
    code = cli(tmp_path, "--f", "x^2 + y^2", "--g", "x - y - 1/3", "--roi", "-1,-1,1,1",
               "--max-depth", "16")
    assert code == 2
    diag = json.loads(capsys.readouterr().err)
    assert diag["error"] == "ResolutionLimit"
    assert len(diag["box"]) == 4 and all(isinstance(v, str) for v in diag["box"])
    assert not os.path.exists(tmp_path / "out.json")


def test_boundary_root_exit_2(tmp_path, capsys):
    assert cli(tmp_path, "--f", "x", "--g", "y", "--roi", "0,0,1,1") == 2
    assert json.loads(capsys.readouterr().err)["error"] == "BoundaryRoot"


# -- outputs

def test_empty_document(tmp_path):
    assert cli(tmp_path, "--f", "1", "--g", "1", "--roi", "-1,-1,1,1") == 0
    text = (tmp_path / "out.json").read_text()
    assert text == '{"vertices":[],"edges":[],"roots":[]}\n'


def test_circle_parabola_documents(tmp_path):
    assert cli(tmp_path, *CP, "--eps", "0.05", "--out", "json,svg,roots", "--boxes") == 0
    doc = json.loads((tmp_path / "out.json").read_text())
    assert len(doc["roots"]) == 2
    assert sum(v["kind"] == "root-vertex" for v in doc["vertices"]) == 2
    assert [v["id"] for v in doc["vertices"]] == list(range(len(doc["vertices"])))
    n = len(doc["vertices"])
    assert all(0 <= e["u"] < n and 0 <= e["v"] < n and e["label"] in "ST" for e in doc["edges"])
    assert doc["boxes"] and {b["class"] for b in doc["boxes"]} <= {"excluded", "f", "g", "fg"}
    roots = json.loads((tmp_path / "out.roots.json").read_text())
    assert len(roots["roots"]) == 2 and all(r["certified"] for r in roots["roots"])
    svg = (tmp_path / "out.svg").read_text()
    assert svg.count("<line") == len(doc["edges"])
    assert svg.count('r="') == n
    assert svg.count('fill="black"') == 2


def test_json_coordinates_are_exact(tmp_path):
    assert cli(tmp_path, *CP) == 0
    doc = json.loads((tmp_path / "out.json").read_text())
    for v in doc["vertices"]:
        for c in (v["x"], v["y"]):
            q = Fraction(c)
            assert q.denominator & (q.denominator - 1) == 0


def test_byte_identical_runs(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir()
    b.mkdir()
    assert run_cli(CP + ["--eps", "0.05", "-o", str(a / "r")]) == 0
    assert run_cli(CP + ["--eps", "0.05", "-o", str(b / "r")]) == 0
    assert (a / "r.json").read_bytes() == (b / "r.json").read_bytes()


def test_svg_of_empty_document_has_frame_only():
    svg = emit_svg({"vertices": [], "edges": [], "roots": []}, ("-1", "-1", "1", "1"))
    assert svg.count("<rect") == 1 and "<line" not in svg and "<circle" not in svg


def test_emit_json_is_compact():
    assert emit_json({"a": [1, 2]}) == '{"a":[1,2]}\n'


def test_module_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "curve_arrange", "--f", "1", "--g", "1",
                        "--roi", "-1,-1,1,1", "-o", str(tmp_path / "m")],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert (tmp_path / "m.json").exists()
