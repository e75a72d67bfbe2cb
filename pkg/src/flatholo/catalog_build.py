"""Definitions of the shipped fixtures; ``python -m flatholo.catalog_build`` rewrites them."""

from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

from .crystal import AffinePair
from .fixtures import FixtureDocument, catalog_dir, matrix_group
from .kahler import ComplexAffinePair

F = Fraction


def _translations(n: int) -> list[AffinePair]:
    return [AffinePair.translation_by([int(i == j) for j in range(n)]) for i in range(n)]


def _complex_translations(n: int) -> list[ComplexAffinePair]:
    I = [[int(i == j) for j in range(n)] for i in range(n)]
    out = []
    for i in range(n):
        for unit in (1, (0, 1)):
            out.append(ComplexAffinePair(I, [unit if j == i else 0 for j in range(n)]))
    return out


def _exp(bieberbach: bool, order: int, components: int, h2: str) -> dict:
    return {"bieberbach": bieberbach, "holonomy_order": str(order),
            "components": str(components), "h2": h2}


def fixtures() -> list[FixtureDocument]:
    docs = []
    for n in (1, 2, 3):
        docs.append(FixtureDocument.from_affine(
            f"torus-{n}d", _translations(n),
            description=f"flat {n}-torus", expected=_exp(True, 1, 1, "0")))

    docs.append(FixtureDocument.from_affine(
        "klein-bottle", [AffinePair([[1, 0], [0, -1]], [F(1, 2), 0])] + _translations(2),
        description="glide reflection", expected=_exp(True, 2, 2, "Z/2")))
    docs.append(FixtureDocument.from_affine(
        "half-turn-3d",
        [AffinePair([[1, 0, 0], [0, -1, 0], [0, 0, -1]], [F(1, 2), 0, 0])] + _translations(3),
        description="screw motion by a half turn", expected=_exp(True, 2, 2, "Z/2")))
    docs.append(FixtureDocument.from_affine(
        "quarter-turn-3d",
        [AffinePair([[1, 0, 0], [0, 0, -1], [0, 1, 0]], [F(1, 4), 0, 0])] + _translations(3),
        description="screw motion by a quarter turn", expected=_exp(True, 4, 2, "Z/4")))
    docs.append(FixtureDocument.from_affine(
        "tri-cosm",
        [AffinePair([[1, 0, 0], [0, 0, -1], [0, 1, -1]], [F(1, 3), 0, 0])] + _translations(3),
        description="screw motion by a third of a turn", expected=_exp(True, 3, 2, "Z/3")))
    docs.append(FixtureDocument.from_affine(
        "hantzsche-wendt",
        [AffinePair([[1, 0, 0], [0, -1, 0], [0, 0, -1]], [F(1, 2), F(1, 2), 0]),
         AffinePair([[-1, 0, 0], [0, 1, 0], [0, 0, -1]], [0, F(1, 2), F(1, 2)])] + _translations(3),
        description="holonomy C2 x C2 with three distinct sign characters",
        expected=_exp(True, 4, 3, "Z/2 x Z/2 x Z/2")))
    docs.append(FixtureDocument.from_affine(
        "split-c2", [AffinePair([[1, 0], [0, -1]], [0, 0])] + _translations(2),
        description="reflection group, has torsion", expected=_exp(False, 2, 2, "Z/2")))

    docs.append(FixtureDocument.from_abstract(
        "c3-rotation", matrix_group([[[0, -1], [1, -1]]]),
        description="homogeneous rank-2 lattice of C3; only the split extension exists",
        expected={"bieberbach": False, "holonomy_order": "3", "components": "1", "h2": "0"}))

    docs.append(FixtureDocument.from_complex(
        "complex-torus", _complex_translations(2),
        description="complex 2-torus", expected={"c_components": "1", "components": "1"}))
    docs.append(FixtureDocument.from_complex(
        "hyperelliptic",
        [ComplexAffinePair([[1, 0], [0, -1]], [F(1, 2), 0])] + _complex_translations(2),
        description="hyperelliptic surface, holonomy C2",
        expected={"c_components": "2", "components": "2"}))
    docs.append(FixtureDocument.from_complex(
        "hyperelliptic-c4",
        [ComplexAffinePair([[1, 0], [0, (0, 1)]], [F(1, 4), 0])] + _complex_translations(2),
        description="hyperelliptic surface, holonomy C4",
        expected={"c_components": "2", "components": "2"}))
    return docs


def write_catalog(directory=None) -> list[Path]:
    directory = catalog_dir() if directory is None else Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for doc in fixtures():
        p = directory / f"{doc.name}.json"
        doc.save(p)
        paths.append(p)
    return paths


if __name__ == "__main__":
    for p in write_catalog(sys.argv[1] if len(sys.argv) > 1 else None):
        print(p)
