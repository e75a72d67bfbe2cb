"""JSON fixture documents and the shipped catalog.

A document has a top-level ``format_version``, a ``kind`` and exactly one
payload under the key named by ``kind``:

``abstract``
    ``group`` (a named group, permutation generators or integer matrix
    generators), ``action`` (one integer matrix per group generator, optional
    for matrix groups) and an optional ``cocycle``: the flat list of normalised
    values ``f(g, h)`` for non-identity ``g, h`` in element-enumeration order.
``affine``
    ``generators``: affine pairs ``{"linear": ..., "translation": ...}``.
``complex``
    ``generators``: complex affine pairs whose entries are ``[re, im]``.

Every number is a decimal string, rationals as ``"p/q"``. The canonical
serialisation is ``json.dumps(sort_keys=True, indent=2)`` plus a newline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Sequence

import jsonschema

from .cohomology import Cochain2
from .crystal import AffinePair
from .exceptions import FixtureInvalid, ParseError, ValidationError
from .groups import DEFAULT_ORDER_CAP, NAMED_GROUPS, FiniteGroup, GroupSpec
from .kahler import ComplexAffinePair, Gaussian
from .lattices import GLattice
from .linalg import IntMatrix

FORMAT_VERSION = "1"
KINDS = ("abstract", "affine", "complex")

_INT = {"type": "string", "pattern": r"^-?[0-9]+$"}
_RAT = {"type": "string", "pattern": r"^-?[0-9]+(/[1-9][0-9]*)?$"}
_GAUSS = {"type": "array", "items": _RAT, "minItems": 2, "maxItems": 2}


def _matrix(entry):
    return {"type": "array", "items": {"type": "array", "items": entry}}


def _vector(entry):
    return {"type": "array", "items": entry}


_PAIR = {
    "type": "object",
    "required": ["linear", "translation"],
    "additionalProperties": False,
    "properties": {"linear": _matrix(_RAT), "translation": _vector(_RAT)},
}
_CPAIR = {
    "type": "object",
    "required": ["linear", "translation"],
    "additionalProperties": False,
    "properties": {"linear": _matrix(_GAUSS), "translation": _vector(_GAUSS)},
}
_GROUP = {
    "oneOf": [
        {"type": "object", "required": ["type", "name"], "additionalProperties": False,
         "properties": {"type": {"const": "named"}, "name": {"enum": sorted(NAMED_GROUPS)}}},
        {"type": "object", "required": ["type", "degree", "generators"], "additionalProperties": False,
         "properties": {"type": {"const": "permutation"}, "degree": _INT,
                        "generators": _matrix(_INT)}},
        {"type": "object", "required": ["type", "degree", "generators"], "additionalProperties": False,
         "properties": {"type": {"const": "matrix"}, "degree": _INT,
                        "generators": {"type": "array", "items": _matrix(_INT)}}},
    ]
}

FIXTURE_SCHEMA = {
    "type": "object",
    "required": ["format_version", "kind", "metadata"],
    "additionalProperties": False,
    "properties": {
        "format_version": {"const": FORMAT_VERSION},
        "kind": {"enum": list(KINDS)},
        "metadata": {
            "type": "object",
            "required": ["name", "dimension"],
            "additionalProperties": False,
            "properties": {
                "name": {"type": "string", "pattern": "^[a-z0-9][a-z0-9-]*$"},
                "dimension": _INT,
                "description": {"type": "string"},
                "expected": {"type": "object"},
            },
        },
        "abstract": {
            "type": "object",
            "required": ["group"],
            "additionalProperties": False,
            "properties": {
                "group": _GROUP,
                "action": {"type": "array", "items": _matrix(_INT)},
                "rank": _INT,
                "cocycle": _vector(_INT),
            },
        },
        "affine": {
            "type": "object", "required": ["generators"], "additionalProperties": False,
            "properties": {"generators": {"type": "array", "items": _PAIR, "minItems": 1}},
        },
        "complex": {
            "type": "object", "required": ["generators"], "additionalProperties": False,
            "properties": {"generators": {"type": "array", "items": _CPAIR, "minItems": 1}},
        },
    },
}


def _rows(m) -> list:
    return m.tolist() if isinstance(m, IntMatrix) else [list(r) for r in m]


def _s(x) -> str:
    return str(Fraction(x))


def _gs(z) -> list[str]:
    z = Gaussian.of(z)
    return [str(z.re), str(z.im)]


@dataclass
class FixtureDocument:
    kind: str
    name: str
    dimension: int
    payload: dict
    description: str = ""
    expected: dict = field(default_factory=dict)

    # construction ---------------------------------------------------------------

    @classmethod
    def from_affine(cls, name: str, generators: Sequence[AffinePair], **meta) -> "FixtureDocument":
        gens = [{"linear": [[_s(x) for x in r] for r in g.linear],
                 "translation": [_s(x) for x in g.translation]} for g in generators]
        return cls("affine", name, generators[0].dimension, {"generators": gens}, **meta)

    @classmethod
    def from_complex(cls, name: str, generators: Sequence[ComplexAffinePair], **meta) -> "FixtureDocument":
        gens = [{"linear": [[_gs(x) for x in r] for r in g.linear],
                 "translation": [_gs(x) for x in g.translation]} for g in generators]
        return cls("complex", name, 2 * len(generators[0].translation), {"generators": gens}, **meta)

    @classmethod
    def from_abstract(cls, name: str, group: dict, action: Optional[Sequence] = None,
                      cocycle: Optional[Sequence[int]] = None, rank: Optional[int] = None,
                      **meta) -> "FixtureDocument":
        """``group`` is the JSON group spec; ``action`` holds integer matrices."""
        payload: dict[str, Any] = {"group": group}
        if action is not None:
            payload["action"] = [[[str(int(x)) for x in r] for r in _rows(m)] for m in action]
        if rank is not None:
            payload["rank"] = str(rank)
        if cocycle is not None:
            payload["cocycle"] = [str(int(x)) for x in cocycle]
        doc = cls("abstract", name, 0, payload, **meta)
        doc.dimension = doc.lattice().rank
        return doc

    # serialisation --------------------------------------------------------------

    def to_dict(self) -> dict:
        meta: dict[str, Any] = {"name": self.name, "dimension": str(self.dimension)}
        if self.description:
            meta["description"] = self.description
        if self.expected:
            meta["expected"] = self.expected
        return {"format_version": FORMAT_VERSION, "kind": self.kind, "metadata": meta,
                self.kind: self.payload}

    def dumps(self) -> str:
        return canonical_json(self.to_dict())

    def save(self, path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def from_dict(cls, data: Any) -> "FixtureDocument":
        try:
            jsonschema.validate(data, FIXTURE_SCHEMA)
        except jsonschema.ValidationError as exc:
            raise ParseError(f"fixture does not match the schema: {exc.message}") from None
        kind = data["kind"]
        present = [k for k in KINDS if k in data]
        if present != [kind]:
            raise ParseError(f"kind is {kind!r} but payloads present: {present}")
        meta = data["metadata"]
        doc = cls(kind, meta["name"], int(meta["dimension"]), data[kind],
                  meta.get("description", ""), meta.get("expected", {}))
        doc.validate()
        return doc

    @classmethod
    def loads(cls, text: str) -> "FixtureDocument":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "FixtureDocument":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ParseError(f"cannot read {path}: {exc}") from None
        return cls.loads(text)

    # interpretation -------------------------------------------------------------

    def validate(self) -> None:
        """Build the mathematical objects once so that bad data fails early."""
        try:
            if self.kind == "abstract":
                L = self.lattice()
                if L.rank != self.dimension:
                    raise FixtureInvalid(f"dimension {self.dimension} but lattice rank {L.rank}")
                self.cocycle()
            elif self.kind == "affine":
                gens = self.affine_generators()
                if any(g.dimension != self.dimension for g in gens):
                    raise FixtureInvalid("generator dimension differs from metadata")
            else:
                gens = self.complex_generators()
                if any(2 * len(g.translation) != self.dimension for g in gens):
                    raise FixtureInvalid("generator dimension differs from metadata")
        except FixtureInvalid:
            raise
        except ValidationError as exc:
            raise FixtureInvalid(f"{self.name}: {exc}") from exc

    def group(self, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
        self._require("abstract")
        return group_from_json(self.payload["group"], order_cap)

    def lattice(self, order_cap: int = DEFAULT_ORDER_CAP) -> GLattice:
        self._require("abstract")
        G = self.group(order_cap)
        if "action" not in self.payload:
            if G.kind != "matrix":
                raise FixtureInvalid("action is required unless the group is a matrix group")
            return GLattice.natural(G)
        action = [IntMatrix([[int(x) for x in r] for r in m]) for m in self.payload["action"]]
        rank = int(self.payload["rank"]) if "rank" in self.payload else None
        if rank is None and not action:
            raise FixtureInvalid("rank is required when the group has no generators")
        return GLattice(G, action, rank=rank)

    def cocycle(self, L: Optional[GLattice] = None) -> Optional[Cochain2]:
        self._require("abstract")
        if "cocycle" not in self.payload:
            return None
        L = self.lattice() if L is None else L
        return Cochain2(L.group.order, L.rank, tuple(int(x) for x in self.payload["cocycle"]))

    def affine_generators(self) -> list[AffinePair]:
        self._require("affine")
        return [AffinePair([[Fraction(x) for x in r] for r in g["linear"]],
                           [Fraction(x) for x in g["translation"]])
                for g in self.payload["generators"]]

    def complex_generators(self) -> list[ComplexAffinePair]:
        self._require("complex")
        return [ComplexAffinePair([[Gaussian(*z) for z in r] for r in g["linear"]],
                                  [Gaussian(*z) for z in g["translation"]])
                for g in self.payload["generators"]]

    def _require(self, kind: str) -> None:
        if self.kind != kind:
            raise FixtureInvalid(f"fixture {self.name} is {self.kind}, not {kind}")


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def group_from_json(spec: dict, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    t = spec["type"]
    if t == "named":
        return NAMED_GROUPS[spec["name"]]()
    deg = int(spec["degree"])
    if t == "permutation":
        gens = [[int(x) for x in p] for p in spec["generators"]]
        return FiniteGroup.from_spec(GroupSpec.permutations(gens, degree=deg, order_cap=order_cap))
    mats = [[[int(x) for x in r] for r in m] for m in spec["generators"]]
    return FiniteGroup.from_spec(GroupSpec.matrices(mats, degree=deg, order_cap=order_cap))


def named_group(name: str) -> dict:
    return {"type": "named", "name": name}


def matrix_group(mats: Sequence, degree: Optional[int] = None) -> dict:
    mats = [_rows(m) for m in mats]
    degree = len(mats[0]) if degree is None else degree
    return {"type": "matrix", "degree": str(degree),
            "generators": [[[str(x) for x in r] for r in m] for m in mats]}


def catalog_dir() -> Path:
    return Path(str(resources.files("flatholo") / "catalog"))


def load_catalog(directory=None) -> list[FixtureDocument]:
    """All ``*.json`` fixtures in ``directory`` (default: the shipped catalog), by name."""
    directory = catalog_dir() if directory is None else Path(directory)
    docs = [FixtureDocument.load(p) for p in sorted(directory.glob("*.json"))]
    names = [d.name for d in docs]
    if len(set(names)) != len(names):
        raise FixtureInvalid("duplicate fixture names in catalog")
    return sorted(docs, key=lambda d: d.name)
