import json
import re

import pytest
import sympy

from cmlegendre import cli
from cmlegendre.errors import AmbiguousMatch
from cmlegendre.mpcore import CBall
from cmlegendre.pipeline import load_golden, rel_close, s3_orbit, sympy_ball


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def ball(d):
    return CBall.from_strings(d["re"], d["im"], d["rad"])


def test_enumerate(capsys):
    code, rep = run(capsys, "enumerate", "--d", "2")
    assert code == 0 and len(rep["results"]) == 3
    entry = rep["results"][0]
    assert set(entry) >= {"D", "a", "u", "b", "tau", "form", "order", "systems"}
    assert set(entry["tau"]) == {"re", "im", "rad"}


@pytest.mark.parametrize("argv", [
    ["enumerate", "--d", "1"],
    ["enumerate", "--d", "4"],
    ["jtau", "--complex", "0,-1"],
    ["jtau"],
    ["isogeny", "--lambda", "0", "--k", "2"],
    ["isogeny", "--lambda", "-1", "--k", "5"],
    ["solve", "--d", "4", "--system", "4"],
    ["solve", "--d", "3", "--system", "5"],
    ["bogus"],
])
def test_usage_errors(capsys, argv):
    assert cli.main(argv) == 2


def test_jtau_rep(capsys):
    code, rep = run(capsys, "jtau", "--tau", "0,0,1,2", "--qterms", "4")
    r = rep["results"]
    assert code == 0
    assert r["series"]["re"].startswith("7999.997704")
    assert r["recognized"]["min_poly"] == ["-8000", "1"]


def test_jtau_complex(capsys):
    code, rep = run(capsys, "jtau", "--complex", "0,3")
    cand = rep["results"]["recognized"]
    want = sympy.sympify("64*(387+224*sqrt(3))**3*(97-56*sqrt(3))")
    assert code == 0 and cand["degree"] == 2
    assert sympy.simplify(sympy.sympify(cand["value"]) - want) == 0


def test_isogeny_degree3(capsys):
    code, rep = run(capsys, "isogeny", "--lambda", "-1", "--k", "3", "--tau", "i")
    targets = {c["target"] for c in rep["results"]["candidates"] if c["certified"]}
    assert code == 0 and targets == {"3tau", "(tau+2)/(1-tau)"}


def test_isogeny_degree2(capsys):
    code, rep = run(capsys, "isogeny", "--lambda", "3+2√2", "--k", "2", "--tau", "sqrt2i")
    row = [c for c in rep["results"]["candidates"] if c["target"] == "2tau"][0]
    gold = load_golden("ex2tau")["transports"][0]["j_value"]
    assert code == 0 and rel_close(ball(row["j"]), CBall.from_strings(gold["re"], gold["im"], "1e-60"), 40)
    lp = ball(row["lambda"])
    want = sympy_ball("(sqrt(2*sqrt(2)-2)+sqrt(2*sqrt(2)+2)/2+2)/4", 256)
    assert any(rel_close(z, want, 40) for z in s3_orbit(lp))


def test_isogeny_ambiguous_exit(capsys, monkeypatch):
    def boom(*a, **k):
        raise AmbiguousMatch("two periods")
    monkeypatch.setattr(cli, "isogeny_step", boom)
    assert cli.main(["isogeny", "--lambda", "-1", "--k", "2", "--tau", "i"]) == 4


def test_no_solutions_exit(capsys):
    assert cli.main(["solve", "--d", "3", "--system", "1", "--starts", "1"]) == 3


def test_round_trip_and_text_rendering(capsys):
    code, rep = run(capsys, "jtau", "--tau", "1,1,1,2")
    text = json.dumps(rep, indent=1, sort_keys=True)
    assert cli.serialize(cli.parse(text)) == text
    cli.main(["jtau", "--tau", "1,1,1,2", "--format", "text"])
    lines = capsys.readouterr().out
    nums = lambda s: sorted(re.findall(r"-?\d+\.\d+(?:e[-+]?\d+)?", s))
    assert nums(json.dumps(rep)) == nums(lines)


def test_deterministic_bytes(capsys):
    outs = []
    for _ in range(2):
        cli.main(["solve", "--d", "2", "--starts", "900", "--seed", "7"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["results"]["coverage"]["ok"]


def test_tampered_golden(capsys, tmp_path):
    golden = load_golden("table1")
    rows = [golden["rows"][0], dict(golden["rows"][2])]
    rows[1]["j_value"] = {"re": "-3376", "im": "0"}
    path = tmp_path / "table.json"
    path.write_text(json.dumps({"rows": rows}))
    assert cli.main(["table", "--golden", str(path)]) == 5
    assert "row 2" in capsys.readouterr().err
