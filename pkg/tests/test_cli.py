import json
import shutil

import jsonschema
import pytest

from flatholo.cli import OUTPUT_SCHEMAS, main
from flatholo.fixtures import FixtureDocument, catalog_dir, named_group


def fixture(name):
    return str(catalog_dir() / f"{name}.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def machine(capsys, command, *argv):
    code, out, err = run(capsys, command, "--format", "machine", *argv)
    assert code == 0, err
    data = json.loads(out)
    jsonschema.validate(data, OUTPUT_SCHEMAS[command])
    return data


def test_analyze_torus(capsys):
    d = machine(capsys, "analyze", fixture("torus-2d"))
    assert d["group"]["order"] == "1"
    assert d["homogeneity"]["homogeneous"] is True
    assert d["extension"]["torsion_free"] is True


def test_analyze_klein(capsys):
    d = machine(capsys, "analyze", fixture("klein-bottle"))
    assert d["homogeneity"]["components"] == "2"
    assert d["extension"]["torsion_free"] is True
    assert d["extension"]["agree"] is True


def test_analyze_hantzsche_wendt(capsys):
    d = machine(capsys, "analyze", fixture("hantzsche-wendt"))
    assert d["homogeneity"]["components"] == "3"
    assert d["extension"]["torsion_free"] is True
    assert d["socle"]["elementary_abelian_factors"] is True


def test_analyze_is_deterministic(capsys):
    outs = set()
    for _ in range(2):
        code, out, _ = run(capsys, "analyze", "--format", "machine", "--seed", "3", fixture("hyperelliptic"))
        assert code == 0
        outs.add(out)
    assert len(outs) == 1


def test_human_output(capsys):
    code, out, _ = run(capsys, "analyze", fixture("klein-bottle"))
    assert code == 0
    assert "components" in out and not out.lstrip().startswith("{")


@pytest.mark.parametrize("name", [p.stem for p in sorted(catalog_dir().glob("*.json"))])
def test_analyze_every_fixture(capsys, name):
    machine(capsys, "analyze", fixture(name))


def test_verify_theorem_catalog(capsys):
    d = machine(capsys, "verify-theorem")
    assert d["passed"] is True and d["violations"] == []
    rows = {r["name"]: r for r in d["fixtures"]}
    assert len(rows) >= 7
    c3 = rows["c3-rotation"]
    assert c3["homogeneous"] is True and c3["h2"] == "0" and c3["special_classes"] == "0"


def test_verify_theorem_tori_only(capsys, tmp_path):
    for n in (1, 2, 3):
        shutil.copy(fixture(f"torus-{n}d"), tmp_path)
    d = machine(capsys, "verify-theorem", str(tmp_path))
    assert d["passed"] is True
    assert all(r["homogeneous"] is True for r in d["fixtures"])


def test_verify_theorem_reports_expected_mismatch(capsys, tmp_path):
    doc = FixtureDocument.load(fixture("klein-bottle"))
    doc.expected = dict(doc.expected, components="1")
    doc.save(tmp_path / "klein-bottle.json")
    code, out, _ = run(capsys, "verify-theorem", "--format", "machine", str(tmp_path))
    assert code == 1
    assert json.loads(out)["passed"] is False


def test_h2_trivial_c2(capsys):
    d = machine(capsys, "h2", "--group", "C2")
    assert d["h2"] == "Z/2"
    d = machine(capsys, "h2", "--group", "C2", "--action", "[[[-1]]]")
    assert d["h2"] == "0"


def test_special(capsys):
    d = machine(capsys, "special", fixture("hantzsche-wendt"))
    assert d["special_count"] == "1"
    own = [c for c in d["classes"] if c["fixture_class"]]
    assert len(own) == 1 and own[0]["special"] is True


def test_torsion(capsys):
    d = machine(capsys, "torsion", fixture("split-c2"))
    assert d["agree"] is True and d["torsion_free"] is False
    d = machine(capsys, "torsion", fixture("tri-cosm"))
    assert d["agree"] is True and d["torsion_free"] is True


def test_chartable_s3(capsys):
    d = machine(capsys, "chartable", "--group", "S3")
    assert sorted(d["degrees"]) == ["1", "1", "2"]
    assert len(d["rows"]) == 3 and all(len(r) == 3 for r in d["rows"])


def test_realify_hyperelliptic(capsys, tmp_path):
    out = tmp_path / "real.json"
    code, _, err = run(capsys, "realify", fixture("hyperelliptic"), "-o", str(out))
    assert code == 0, err
    doc = FixtureDocument.load(out)
    assert doc.kind == "abstract" and doc.dimension == 4
    jsonschema.validate(json.loads(out.read_text()), OUTPUT_SCHEMAS["realify"])
    d = machine(capsys, "analyze", str(out))
    assert d["homogeneity"]["components"] == "2"
    assert d["extension"]["torsion_free"] is True


def test_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "analyze", str(bad))[0] == 2
    assert run(capsys, "analyze", str(tmp_path / "missing.json"))[0] == 2

    invalid = FixtureDocument("abstract", "bad", 2, {"group": named_group("C2"),
                                                     "action": [[["0", "-1"], ["1", "-1"]]]})
    (tmp_path / "invalid.json").write_text(json.dumps(invalid.to_dict()))
    code, _, err = run(capsys, "analyze", str(tmp_path / "invalid.json"))
    assert code == 3 and "FixtureInvalid" in err

    code, _, err = run(capsys, "h2", "--group", "S4", "--max-h2-order", "12")
    assert code == 4 and err

    code, _, _ = run(capsys, "analyze", "--max-order", "2", fixture("hantzsche-wendt"))
    assert code == 4

    with pytest.raises(SystemExit) as exc:
        main(["chartable"])
    assert exc.value.code == 2
    capsys.readouterr()

    assert run(capsys, "h2")[0] == 2
    assert run(capsys, "h2", "--group", "C2", "--action", "[[")[0] == 2
    assert run(capsys, "torsion", fixture("c3-rotation"))[0] == 3
