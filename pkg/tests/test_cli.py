import io
import json
import subprocess
import sys

import jsonschema
import pytest
from hypothesis import given, strategies as st

from speccalc.cli import format_session, main, output_schema, parse, run
from speccalc.errors import InputError

EXAMPLE = """\
ring q=32003 vars x,y
ideal I = x^2, x*y
ideal J = x*y
prime m = {x,y}
set Phi = {}, {x}, {y}
module F = free (0,0)
module M = quotient I
module ES = injective {} shift (0,0)
module Ex = injective {x} shift (-1,0)
module Ey = injective {y} shift (0,-1)
complex X = [ES -> Ex + Ey] maps (ES->Ex: 1, ES->Ey: 1)
run dim J
run coherent Phi
run bass F m
run depth M {x,y}
run betti M
run ass M
run supp M
run witness
run check-main Phi X
run check-dim
run check-dim J
"""


def execute(text, as_json=False, **kw):
    out, err = io.StringIO(), io.StringIO()
    code = run(parse(text), as_json, out=out, err=err, **kw)
    return code, out.getvalue().splitlines(), err.getvalue().splitlines()


def test_dim_example():
    code, out, _ = execute("ring q=32003 vars x,y\nideal I = x*y\nrun dim I\n")
    assert (code, out) == (0, ["dim = 1"])


def test_coherent_example():
    code, out, _ = execute("ring q=32003 vars x,y\nset Phi = {}, {x}, {y}\nrun coherent Phi\n")
    assert out == ["NOT COHERENT (witness: M=S, p={x,y}, d=2)"]


def test_bass_example():
    code, out, _ = execute("ring q=32003 vars x,y\nmodule F = free (0,0)\nrun bass F {x,y}\n")
    assert out == ["mu = [0,0,1]"]


def test_check_dim_on_the_line():
    code, out, _ = execute("ring q=32003 vars x\nrun check-dim\n")
    assert out == ["all 4 subsets coherent; dim theorem verified"]


def test_empty_session():
    assert execute("") == (0, [], [])
    assert execute("ring q=32003 vars x,y\n") == (0, [], [])


def test_full_example_session():
    code, out, err = execute(EXAMPLE)
    assert code == 0 and err == []
    assert out == [
        "dim = 1",
        "NOT COHERENT (witness: M=S, p={x,y}, d=2)",
        "mu = [0,0,1]",
        "depth = 0",
        "betti = [1,2,1]",
        "Ass(M) = {x}, {x,y}",
        "Supp(M) = {x}, {x,y}",
        "witness: M=S, p={x,y}, d=2",
        "Supp X = {}, {x}, {y}; Supp H*X = {}, {x}, {y}, {x,y}; relation = violation",
        "dim = 2; Phi = {}, {x}, {y} NOT COHERENT (witness: M=S, p={x,y}, d=2); dim theorem verified",
        "all 8 subsets coherent; dim theorem verified",
    ]


def test_malformed_middle_command():
    text = "ring q=32003 vars x,y\nideal I = x*y\nrun dim I\nrun bass I\nrun dim I\n"
    code, out, err = execute(text)
    assert code == 1
    assert out == ["dim = 1", "dim = 1"]
    assert len(err) == 1 and err[0].startswith("error in command 2:")


def test_unknown_name_is_reported_per_command():
    code, out, err = execute("ring q=32003 vars x,y\nrun dim K\n")
    assert code == 1 and out == [] and "command 1" in err[0]


def test_declaration_errors_carry_line_numbers():
    with pytest.raises(InputError, match="line 2"):
        parse("ring q=32003 vars x,y\nideal I = x*z\n")
    with pytest.raises(InputError, match="line 3"):
        parse("ring q=32003 vars x,y\nideal I = x\nideal I = y\n")
    with pytest.raises(InputError, match="line 1"):
        parse("bogus line\n")


def test_json_output_validates():
    code, out, _ = execute(EXAMPLE, as_json=True)
    schema = output_schema()
    records = [json.loads(line) for line in out]
    assert [r["index"] for r in records] == list(range(1, 12))
    for r in records:
        jsonschema.validate(r, schema)
    assert records[2]["mu"] == [0, 0, 1]
    assert records[8]["relation"] == "violation"


def test_json_error_record_validates():
    code, out, _ = execute("ring q=32003 vars x,y\nrun bass\n", as_json=True)
    rec = json.loads(out[0])
    jsonschema.validate(rec, output_schema())
    assert rec["index"] == 1 and "error" in rec


def test_characteristic_precedence(monkeypatch):
    text = "ring q=32003 vars x,y\nmodule F = free (0,0)\nrun bass F {x,y}\n"
    monkeypatch.setenv("SPECCALC_CHAR", "7")
    assert execute(text)[1] == ["mu = [0,0,1]"]
    monkeypatch.setenv("SPECCALC_CHAR", "8")
    assert execute(text)[0] == 1
    assert execute(text, q=5)[0] == 0


def test_round_trip():
    s = parse(EXAMPLE)
    text = format_session(s)
    assert format_session(parse(text)) == text
    assert parse(text) == s or format_session(parse(text)) == text


names = st.sampled_from(["x", "y", "z"])


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=3),
       st.frozensets(st.integers(0, 7), min_size=1))
def test_round_trip_generated(gens, masks):
    vars_ = ("x", "y", "z")
    mono = []
    for g in gens:
        factors = [f"{v}^{e}" if e > 1 else v for v, e in zip(vars_, g) if e]
        mono.append("*".join(factors) or "1")
    sets = ["{" + ",".join(v for k, v in enumerate(vars_) if (m >> k) & 1) + "}" for m in sorted(masks)]
    text = (f"ring q=32003 vars x,y,z\nideal I = {', '.join(mono)}\nset P = {', '.join(sets)}\n"
            "module M = quotient I\nrun supp M\nrun coherent P\n")
    canon = format_session(parse(text))
    assert format_session(parse(canon)) == canon


def test_main_entry_point(tmp_path, capsys):
    f = tmp_path / "s.sc"
    f.write_text("ring q=32003 vars x,y\nideal I = x*y\nrun dim I\n")
    assert main(["run", str(f)]) == 0
    assert capsys.readouterr().out.strip() == "dim = 1"
    assert main(["run", str(f), "--json", "--box-pad", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["dim"] == 1
    assert main(["run", str(tmp_path / "missing.sc")]) == 1


def test_module_invocation(tmp_path):
    f = tmp_path / "s.sc"
    f.write_text("ring q=32003 vars x\nrun check-dim\n")
    res = subprocess.run([sys.executable, "-m", "speccalc", "run", str(f)], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.strip() == "all 4 subsets coherent; dim theorem verified"
