import json
import random
from fractions import Fraction
from pathlib import Path

import jsonschema
import pytest

from hznf.algebra import THETA, E
from hznf.cli import ParseError, parse_field, run, serialize_field

from helpers import random_field

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "docs" / "result.schema.json").read_text())


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_parse_rotation_and_quadratic():
    assert parse_field("hznf 1\nrotation 1\nE 1 1 [] 1\n") == THETA() + E(1, 1)


def test_parse_parametric_term():
    v = parse_field("hznf 1\nparams 3\nE 0 1 [0,1,0] 3/2\n")
    assert v.q == 3 and v.coeff(0, 1, (0, 1, 0)) == Fraction(3, 2)


def test_parse_sums_duplicates_and_skips_comments():
    v = parse_field("hznf 1\n# header done\nE 1 1 [] 1\nE 1 1 [] 1/2  # again\n")
    assert v == E(1, 1, Fraction(3, 2))


@pytest.mark.parametrize("text,line", [
    ("hznf 1\nE 2 1 [] 1\n", 2),
    ("hznf 1\nparams 2\nE 0 1 [1] 1\n", 3),
    ("hznf 1\nE 1 1 [] 0.5\n", 2),
    ("hznf 1\nE 0 0 [] 1\n", 2),
    ("hznf 1\nfoo\n", 2),
    ("E 1 1 [] 1\n", 1),
])
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(ParseError) as exc:
        parse_field(text)
    assert exc.value.line == line


def test_serialize_is_canonical_and_idempotent():
    rng = random.Random(51)
    for _ in range(5):
        v = random_field(rng, 8)
        text = serialize_field(v)
        assert parse_field(text) == v
        assert serialize_field(parse_field(text)) == text
    keys = [tuple(map(int, l.split()[1:3])) for l in serialize_field(E(0, 2) + E(1, 1) + E(0, 1)).splitlines()
            if l.startswith("E ")]
    assert keys == sorted(keys)


def test_normalize_json_matches_schema(tmp_path, capsys):
    f = write(tmp_path, "f.hz", "hznf 1\nrotation 1\nE 1 1 [] 2\nE 0 1 [] 1\nE 1 2 [] 3\nE 0 3 [] 1\n")
    rc = run(["normalize", "--mode", "orbital", "--input", f, "--max-grade", "12",
              "--format", "json", "--emit-transforms", "--verify"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["mode"] == "orbital"
    assert all(isinstance(t["coeff"], str) for t in doc["field"]["terms"])
    assert all(doc["verification"].values())


def test_normalize_is_deterministic(tmp_path, capsys):
    f = write(tmp_path, "f.hz", serialize_field(random_field(random.Random(52), 10)))
    outs = []
    for _ in range(2):
        assert run(["normalize", "-i", f, "--format", "json"]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_normalize_text_output_reparses(tmp_path, capsys):
    f = write(tmp_path, "f.hz", "hznf 1\nrotation 1\nE 1 1 [] 1\nE 0 1 [] 1\nE 2 2 [] 1\n")
    assert run(["normalize", "-i", f]) == 0
    out = capsys.readouterr().out
    assert parse_field(out).coeff(1, 1) == 1


def test_parametric_from_file(tmp_path, capsys):
    text = ("hznf 1\nparams 3\nrotation 1\nE 0 0 [1,0,0] 1\nE 0 1 [0,1,0] 1\nE 0 2 [0,0,1] 1\n"
            "E 1 1 [0,0,0] 1\nE 0 1 [0,0,0] 1/2\nE 0 2 [0,0,0] 3\n")
    f = write(tmp_path, "p.hz", text)
    assert run(["normalize", "--mode", "parametric", "-i", f, "--max-param-degree", "3",
                "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    jsonschema.validate(doc, SCHEMA)
    assert doc["r"] == 2


def test_exit_codes(tmp_path, capsys):
    bad = write(tmp_path, "bad.hz", "hznf 1\nE 2 1 [] 1\n")
    flat = write(tmp_path, "flat.hz", "hznf 1\nrotation 1\nE 0 1 [] 1\n")
    assert run(["normalize", "-i", bad]) == 2
    assert run(["normalize", "-i", flat]) == 1
    assert run(["normalize", "-i", str(tmp_path / "missing.hz")]) == 2
    assert run(["normalize", "--mode", "nonsense"]) == 2
    assert run([]) == 2
    err = capsys.readouterr().err
    assert "line 2" in err


def test_bracket(tmp_path, capsys):
    a = write(tmp_path, "a.hz", "hznf 1\nE 1 1 [] 1\n")
    b = write(tmp_path, "b.hz", "hznf 1\nE 0 2 [] 1\n")
    assert run(["bracket", a, b]) == 0
    assert parse_field(capsys.readouterr().out) == E(1, 3)


def test_check_integral(tmp_path, capsys):
    f = write(tmp_path, "f.hz", "hznf 1\nrotation 1\nE 1 1 [] 1\n")
    assert run(["check-integral", "--input", f, "--max-deg", "8"]) == 0
    assert capsys.readouterr().out.strip() == "dimension: 0"


def test_symmetry(tmp_path, capsys):
    f = write(tmp_path, "u.hz", "hznf 1\nE 1 1 [] 1\nE 0 1 [] 1\nE 0 2 [] 1\n")
    assert run(["symmetry", "-i", f, "--l", "1", "--k", "2", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["S"]


def test_example_subcommand_reports(capsys):
    rc = run(["example", "--seed", "7", "--trials", "2", "--format", "json"])
    doc = json.loads(capsys.readouterr().out)
    assert doc["trials"] == 2 and len(doc["reports"]) == 2
    assert all(r["beta1_ok"] and r["unit_unfolding"] for r in doc["reports"])
    assert rc == (0 if doc["passed"] == 2 else 1)
