import json

import pytest

from flatholo.catalog_build import fixtures, write_catalog
from flatholo.exceptions import FixtureInvalid, ParseError
from flatholo.fixtures import (
    FORMAT_VERSION,
    FixtureDocument,
    canonical_json,
    catalog_dir,
    load_catalog,
    matrix_group,
    named_group,
)

CATALOG = load_catalog()


def test_catalog_size_and_kinds():
    assert len(CATALOG) >= 7
    assert {d.kind for d in CATALOG} == {"abstract", "affine", "complex"}
    names = [d.name for d in CATALOG]
    assert names == sorted(names)
    for required in ("torus-1d", "torus-2d", "torus-3d", "klein-bottle", "half-turn-3d",
                     "hantzsche-wendt", "hyperelliptic", "split-c2"):
        assert required in names


@pytest.mark.parametrize("doc", CATALOG, ids=lambda d: d.name)
def test_round_trip_is_canonical(doc):
    path = catalog_dir() / f"{doc.name}.json"
    text = path.read_text()
    assert doc.dumps() == text
    again = FixtureDocument.loads(text)
    assert again.dumps() == text


def test_shipped_files_match_builder(tmp_path):
    write_catalog(tmp_path)
    for doc in fixtures():
        assert (tmp_path / f"{doc.name}.json").read_text() == (catalog_dir() / f"{doc.name}.json").read_text()
    assert len(list(catalog_dir().glob("*.json"))) == len(fixtures())


def test_numbers_are_strings():
    def walk(x):
        if isinstance(x, dict):
            for v in x.values():
                yield from walk(v)
        elif isinstance(x, list):
            for v in x:
                yield from walk(v)
        else:
            yield x

    for doc in CATALOG:
        for leaf in walk(doc.to_dict()):
            assert isinstance(leaf, (str, bool)), (doc.name, leaf)


def test_affine_fixture_objects():
    klein = next(d for d in CATALOG if d.name == "klein-bottle")
    gens = klein.affine_generators()
    assert gens[0].translation[0] == 0.5
    with pytest.raises(FixtureInvalid):
        klein.lattice()


def base():
    return FixtureDocument.from_abstract("c2-sign", named_group("C2"), action=[[[-1]]]).to_dict()


def test_schema_rejections():
    good = base()
    FixtureDocument.from_dict(good)

    bad = json.loads(json.dumps(good))
    bad["format_version"] = "2"
    with pytest.raises(ParseError):
        FixtureDocument.from_dict(bad)

    bad = json.loads(json.dumps(good))
    bad["abstract"]["action"] = [[[-1]]]  # a bare number, not a string
    with pytest.raises(ParseError):
        FixtureDocument.from_dict(bad)

    bad = json.loads(json.dumps(good))
    bad["affine"] = {"generators": [{"linear": [["1"]], "translation": ["0"]}]}
    with pytest.raises(ParseError):
        FixtureDocument.from_dict(bad)

    bad = json.loads(json.dumps(good))
    bad["abstract"]["action"] = [[["1/0"]]]
    with pytest.raises(ParseError):
        FixtureDocument.from_dict(bad)

    with pytest.raises(ParseError):
        FixtureDocument.loads("{not json")


def test_validation_rejections():
    # not a homomorphism: C2 generator acting with order 3
    bad = FixtureDocument("abstract", "bad", 2, {"group": named_group("C2"),
                                                 "action": [[["0", "-1"], ["1", "-1"]]]})
    with pytest.raises(FixtureInvalid):
        bad.validate()
    # wrong declared dimension
    wrong = base()
    wrong["metadata"]["dimension"] = "2"
    with pytest.raises(FixtureInvalid):
        FixtureDocument.from_dict(wrong)
    # cocycle with the wrong number of values
    short = base()
    short["abstract"]["cocycle"] = ["1", "0"]
    with pytest.raises(FixtureInvalid):
        FixtureDocument.from_dict(short)


def test_abstract_with_cocycle():
    doc = FixtureDocument.from_abstract("c2-trivial", named_group("C2"), action=[[[1]]], cocycle=[1])
    L = doc.lattice()
    assert L.rank == 1 and doc.dimension == 1
    assert doc.cocycle(L).flat == (1,)


def test_matrix_group_without_action():
    doc = FixtureDocument.from_abstract("rot", matrix_group([[[0, -1], [1, 0]]]))
    assert doc.lattice().group.order == 4


def test_canonical_json_format():
    assert canonical_json({"b": "1", "a": ["2"]}) == '{\n  "a": [\n    "2"\n  ],\n  "b": "1"\n}\n'
    assert FORMAT_VERSION == "1"


def test_duplicate_names_rejected(tmp_path):
    doc = fixtures()[0]
    doc.save(tmp_path / "a.json")
    doc.save(tmp_path / "b.json")
    with pytest.raises(FixtureInvalid):
        load_catalog(tmp_path)
