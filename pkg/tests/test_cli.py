import io
import json
import subprocess
import sys

import pytest

from svw.cli import load_diagram, run
from svw.diagrams import DiagramError, diagram_from_json, identity

GOLDEN = json.dumps({
    "a": 6, "b": 8,
    "pairs": [[1, 3], [2, 11], [4, 14], [5, 13], [6, 12], [8, 10], [7, 9]],
    "dots": [[[1, 3], 2], [[2, 11], 1], [[4, 14], 2], [[6, 12], 1], [[7, 9], 2]],
})


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_count():
    assert call("count", "--a", "3", "--b", "3", "--k", "2") == (0, "90\n", "")


def test_basis_json_round_trip():
    code, out, _ = call("basis", "--a", "2", "--b", "2", "--k", "1", "--json")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 6
    again = [diagram_from_json(json.loads(l)).to_json() for l in lines]
    assert again == lines


def test_nf_example():
    code, out, _ = call("nf", "--source", "1", "--hbar", "1", "b1 s2 y2 s2 b1*")
    obj = json.loads(out)
    assert code == 0
    assert obj["hbar"] == 1
    assert obj["terms"] == [{"coeff": "2", "diagram": {"a": 1, "b": 1, "pairs": [[1, 2]], "dots": []}}]


def test_nf_symbolic_coefficients_are_strings():
    _, out, _ = call("nf", "--source", "2", "y2 s1")
    obj = json.loads(out)
    assert obj["hbar"] == "symbolic"
    assert sorted(t["coeff"] for t in obj["terms"]) == ["1", "h", "h"]


def test_keyvec_golden():
    code, out, _ = call("keyvec", "--diagram", GOLDEN, "--n", "15", "--pairing")
    obj = json.loads(out)
    assert code == 0
    assert obj["v"] == "v1(x)v4(x)v3'(x)v6(x)v9(x)v10"
    assert obj["w"] == "v15(x)v12(x)v13'(x)v12'(x)v5(x)v11(x)v9(x)v8"
    assert "A-13,14 A-14,15" in obj["pairing"]


def test_verify_loops_exit_zero():
    code, out, _ = call("verify", "loops", "--kmax", "3", "--lmax", "3")
    assert code == 0 and json.loads(out)["ok"] is True


def test_verify_failure_exit_one():
    code, out, _ = call("verify", "relations", "--n", "2", "--m", "0", "--a-max", "2", "--corrupt-sigma")
    assert code == 1 and json.loads(out)["ok"] is False


def test_verify_independence_cases():
    code, out, _ = call("verify", "independence", "--cases", "1,1,1;2,2,1")
    assert code == 0 and json.loads(out)["suite"] == "independence"


@pytest.mark.parametrize(
    "argv",
    [
        ("bogus",),
        ("count", "--a", "x", "--b", "1", "--k", "0"),
        ("nf", "--source", "2", "s3"),
        ("nf", "--source", "1", "--hbar", "banana", "y1"),
        ("render", "--diagram", '{"a":2,"b":2,"pairs":[[1,2],[1,3]]}'),
        ("render", "--format", "png", "--diagram", '{"a":1,"b":1,"pairs":[[1,2]]}'),
        ("keyvec", "--diagram", GOLDEN, "--n", "3"),
        ("verify", "independence", "--cases", "1,1"),
        ("centre", "--a", "1"),
    ],
)
def test_usage_errors_exit_two(argv):
    code, _, err = call(*argv)
    assert code == 2


def test_bad_matching_message():
    code, _, err = call("render", "--diagram", '{"a":2,"b":2,"pairs":[[1,2],[1,3]]}')
    assert "not a perfect matching" in err


def test_load_diagram():
    assert load_diagram('{"a":2,"b":2,"pairs":[[1,3],[2,4]]}') == identity(2)
    with pytest.raises(DiagramError, match="not a perfect matching"):
        load_diagram('{"a":2,"b":2,"pairs":[[1,3],[1,4]]}')
    assert load_diagram(GOLDEN).total_dots == 8


def test_render_formats(tmp_path):
    code, out, _ = call("render", "--format", "ascii", "--diagram", '{"a":2,"b":2,"pairs":[[1,4],[2,3]]}')
    assert code == 0 and "X" in out
    code, out, _ = call("render", "--format", "tikz", "--diagram", GOLDEN)
    assert code == 0 and out.rstrip().endswith(r"\end{document}")
    png = tmp_path / "g.png"
    code, _, _ = call("render", "--format", "png", "--diagram", GOLDEN, "--out", str(png))
    assert code == 0 and png.stat().st_size > 0


def test_centre_report():
    code, out, _ = call("centre", "--a", "2", "--D", "4", "--t", "1")
    obj = json.loads(out)
    assert code == 0
    assert (obj["dimension"], obj["predicted"], obj["degreeCap"], obj["hbar"]) == (5, 5, 4, 1)


def test_deterministic_output():
    a = call("basis", "--a", "3", "--b", "1", "--k", "2", "--json")
    b = call("basis", "--a", "3", "--b", "1", "--k", "2", "--json")
    assert a == b


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "svw", "count", "--a", "2", "--b", "2", "--k", "0"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout == "3\n"
