"""Command-line interface and the catalog harness.

Every command builds one nested dict. ``--format machine`` prints it as
canonical JSON with every integer written as a string; ``--format human``
prints the same data as indented ``key: value`` lines. Errors go to stderr
with exit code 2 (parse), 3 (validation), 4 (cap exceeded) or 5 (internal
invariant violated).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from .characters import CharacterTable, character_table, galois_orbits, lift_to_cyclotomic, principal_block_test
from .cohomology import DEFAULT_COHOMOLOGY_CAP, H2Group, h2, is_special, special_classes
from .crystal import CrystalGroup, ExtractedData, build_extension, extract_data, torsion_search
from .exceptions import (
    CapExceeded,
    FixtureInvalid,
    FlatHoloError,
    InvariantViolation,
    OracleDisagreement,
    ParseError,
    ValidationError,
)
from .fixtures import FixtureDocument, canonical_json, load_catalog, matrix_group
from .groups import (
    DEFAULT_ORDER_CAP,
    NAMED_GROUPS,
    FiniteGroup,
    is_elementary_abelian,
    is_prime,
    socle,
    structure_summary,
)
from .kahler import kahler_theorem_check, realify_affine
from .lattices import (
    GLattice,
    homogeneity_test,
    idempotent_component_count,
    irr_constituents,
    is_faithful,
)
from .linalg import IntMatrix

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_CAP, EXIT_INVARIANT = 0, 2, 3, 4, 5


@dataclass
class Options:
    seed: int = 0
    max_order: int = DEFAULT_ORDER_CAP
    max_h2_order: int = DEFAULT_COHOMOLOGY_CAP


# output -----------------------------------------------------------------------------

def machine_form(x: Any) -> Any:
    """Integers become decimal strings; everything else keeps its JSON type."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, dict):
        return {str(k): machine_form(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [machine_form(v) for v in x]
    raise TypeError(f"cannot serialise {type(x).__name__}")


def human_form(x: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    out = []
    if isinstance(x, dict):
        for k, v in x.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                out.append(f"{pad}{k}:")
                out.extend(human_form(v, indent + 1))
            else:
                out.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(x, list):
        for v in x:
            if isinstance(v, (dict, list)) and not _flat_list(v):
                out.append(f"{pad}-")
                out.extend(human_form(v, indent + 1))
            else:
                out.append(f"{pad}- {_scalar(v)}")
    else:
        out.append(pad + _scalar(x))
    return out


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    return str(v)


def render(data: dict, fmt: str) -> str:
    if fmt == "machine":
        return canonical_json(machine_form(data))
    return "\n".join(human_form(data)) + "\n"


_SCALAR_ONLY = {
    "$defs": {
        "node": {
            "anyOf": [
                {"type": ["string", "boolean", "null"]},
                {"type": "array", "items": {"$ref": "#/$defs/node"}},
                {"type": "object", "additionalProperties": {"$ref": "#/$defs/node"}},
            ]
        }
    },
}


def _schema(required: Sequence[str]) -> dict:
    return {**_SCALAR_ONLY, "type": "object", "required": list(required),
            "additionalProperties": {"$ref": "#/$defs/node"}}


OUTPUT_SCHEMAS = {
    "analyze": _schema(["name", "kind", "group", "lattice", "homogeneity", "h2", "blocks", "socle"]),
    "verify-theorem": _schema(["fixtures", "violations", "passed"]),
    "h2": _schema(["group_order", "rank", "invariant_factors", "h2"]),
    "special": _schema(["h2", "classes", "special_count"]),
    "torsion": _schema(["cohomological", "brute_force", "agree", "torsion_free"]),
    "chartable": _schema(["group_order", "prime", "degrees", "classes", "rows"]),
    "realify": _schema(["format_version", "kind", "metadata", "abstract"]),
}


# shared builders --------------------------------------------------------------------

@dataclass
class Instance:
    """What a fixture determines: a lattice and, when present, an extension."""

    doc: FixtureDocument
    lattice: GLattice
    extension: Optional[CrystalGroup]
    extracted: Optional[ExtractedData] = None

    @property
    def group(self) -> FiniteGroup:
        return self.lattice.group


def realified_generators(doc: FixtureDocument):
    return [realify_affine(g.linear, g.translation) for g in doc.complex_generators()]


def instantiate(doc: FixtureDocument, opts: Options) -> Instance:
    if doc.kind == "abstract":
        L = doc.lattice(opts.max_order)
        f = doc.cocycle(L)
        ext = build_extension(L.group, L, f) if f is not None else None
        return Instance(doc, L, ext)
    gens = doc.affine_generators() if doc.kind == "affine" else realified_generators(doc)
    ex = extract_data(gens, order_cap=opts.max_order)
    return Instance(doc, ex.lattice, ex.extension(), ex)


def _table(G: FiniteGroup, opts: Options) -> CharacterTable:
    return character_table(G, seed=opts.seed)


def _h2(L: GLattice, opts: Options) -> H2Group:
    return h2(L.group, L, cap=opts.max_h2_order)


def homogeneity_section(L: GLattice, T: CharacterTable) -> dict:
    fast = homogeneity_test(L, T)
    slow, ranks = idempotent_component_count(L, T)
    if fast.component_count != slow:
        raise OracleDisagreement(f"orbit count {fast.component_count} but idempotent count {slow}")
    if sum(ranks) != L.rank:
        raise OracleDisagreement(f"isotypic ranks {ranks} do not sum to {L.rank}")
    return {
        "homogeneous": fast.homogeneous,
        "components": fast.component_count,
        "idempotent_components": slow,
        "isotypic_ranks": ranks,
    }


def torsion_section(ext: CrystalGroup, H: H2Group) -> dict:
    """Both torsion verdicts; raises :class:`OracleDisagreement` if they differ."""
    alpha = H.class_of(ext.cocycle)
    sp_cyclic = is_special(alpha, "cyclic")
    sp_cochain = is_special(alpha, "cochain")
    witness = torsion_search(ext)
    brute = witness is None
    if not (sp_cyclic == sp_cochain == brute):
        raise OracleDisagreement(
            f"special (cyclic) {sp_cyclic}, special (cochain) {sp_cochain}, torsion-free {brute}")
    return {
        "class": list(alpha.coords),
        "cohomological": {"special_cyclic": sp_cyclic, "special_cochain": sp_cochain},
        "brute_force": {"torsion_free": brute,
                        "witness": None if witness is None else {"m": list(witness[0]), "g": witness[1]}},
        "agree": True,
        "torsion_free": brute,
    }


def blocks_section(G: FiniteGroup, T: CharacterTable, rows: Sequence[int]) -> dict:
    primes = [p for p in range(2, G.order + 1) if G.order % p == 0 and is_prime(p)]
    return {str(p): {str(r): principal_block_test(G, T, r, p) for r in rows} for p in primes}


def socle_section(G: FiniteGroup) -> dict:
    if G.order == 1:
        return {"order": 1, "minimal_normal_orders": [], "elementary_abelian_factors": True}
    S, mins = socle(G)
    return {
        "order": len(S),
        "minimal_normal_orders": [len(N) for N in mins],
        "elementary_abelian_factors": all(is_elementary_abelian(G, N) for N in mins),
    }


# commands ---------------------------------------------------------------------------

def analyze(doc: FixtureDocument, opts: Options) -> dict:
    inst = instantiate(doc, opts)
    L, G = inst.lattice, inst.group
    T = _table(G, opts)
    cons = irr_constituents(L, T)
    H = _h2(L, opts)
    summary = structure_summary(G)
    report: dict[str, Any] = {
        "name": doc.name,
        "kind": doc.kind,
        "group": {k: summary[k] for k in ("order", "abelian", "cyclic", "exponent", "class_sizes")},
        "lattice": {"rank": L.rank, "faithful": is_faithful(L)},
        "constituents": [{"row": r, "degree": T.degrees[r], "multiplicity": m} for r, m in cons],
        "galois_orbits": len(galois_orbits(T)),
        "homogeneity": homogeneity_section(L, T),
        "h2": {"invariant_factors": list(H.invariant_factors), "describe": H.describe()},
        "blocks": blocks_section(G, T, [r for r, _ in cons]),
        "socle": socle_section(G),
    }
    if inst.extension is not None:
        report["extension"] = torsion_section(inst.extension, H)
    else:
        report["special_classes"] = len(special_classes(H))
    if doc.kind == "complex":
        report["kahler"] = kahler_section(doc, opts)
    return report


def kahler_section(doc: FixtureDocument, opts: Options) -> dict:
    v = kahler_theorem_check(doc.complex_generators(), seed=opts.seed, order_cap=opts.max_order)
    return {
        "c_components": v.c_components,
        "realified_components": v.realified_components,
        "realified_homogeneous": v.realified_homogeneous,
        "character_identity": v.character_identity,
        "consistent": v.consistent,
        "theorem_holds": v.theorem_holds,
    }


def verify_entry(doc: FixtureDocument, opts: Options) -> dict:
    inst = instantiate(doc, opts)
    L, G = inst.lattice, inst.group
    hom = homogeneity_section(L, _table(G, opts))
    row: dict[str, Any] = {
        "name": doc.name,
        "kind": doc.kind,
        "holonomy_order": G.order,
        "components": hom["components"],
        "homogeneous": hom["homogeneous"],
    }
    H = _h2(L, opts)
    row["h2"] = H.describe()
    if inst.extension is not None:
        row["bieberbach"] = torsion_section(inst.extension, H)["torsion_free"]
    else:
        row["bieberbach"] = None
    if hom["homogeneous"] and G.order > 1:
        # no special class means no torsion-free extension realises this lattice
        row["special_classes"] = len(special_classes(H))
    if doc.kind == "complex":
        row["kahler"] = kahler_section(doc, opts)
    row["expected_ok"] = _expected_ok(doc, row)
    return row


def _expected_ok(doc: FixtureDocument, row: dict) -> bool:
    exp = doc.expected
    checks = {
        "bieberbach": row.get("bieberbach"),
        "holonomy_order": str(row["holonomy_order"]),
        "components": str(row["components"]),
        "h2": row["h2"],
    }
    if "c_components" in exp:
        checks["c_components"] = str(row["kahler"]["c_components"])
    return all(exp[k] == v for k, v in checks.items() if k in exp and v is not None)


def verify_theorem(docs: Sequence[FixtureDocument], opts: Options) -> dict:
    rows = [verify_entry(d, opts) for d in sorted(docs, key=lambda d: d.name)]
    violations = []
    for r in rows:
        nontrivial = r["holonomy_order"] > 1
        if r["bieberbach"] and nontrivial and r["homogeneous"]:
            violations.append(f"{r['name']}: Bieberbach, non-torus and homogeneous")
        if r["bieberbach"] and not nontrivial and r["components"] != 1:
            violations.append(f"{r['name']}: torus with {r['components']} components")
        if r.get("special_classes"):
            violations.append(f"{r['name']}: homogeneous non-torus lattice has a special class")
        if "kahler" in r and not (r["kahler"]["consistent"] and r["kahler"]["theorem_holds"]
                                  and r["kahler"]["character_identity"]):
            violations.append(f"{r['name']}: Kaehler check failed")
        if not r["expected_ok"]:
            violations.append(f"{r['name']}: differs from the expected metadata")
    return {"fixtures": rows, "violations": violations, "passed": not violations}


def cmd_h2(L: GLattice, opts: Options) -> dict:
    H = _h2(L, opts)
    return {"group_order": L.group.order, "rank": L.rank,
            "invariant_factors": list(H.invariant_factors), "h2": H.describe()}


def cmd_special(L: GLattice, opts: Options, ext: Optional[CrystalGroup] = None) -> dict:
    H = _h2(L, opts)
    own = H.class_of(ext.cocycle).coords if ext is not None else None
    classes = []
    for a in H.elements():
        s1, s2 = is_special(a, "cyclic"), is_special(a, "cochain")
        if s1 != s2:
            raise OracleDisagreement(f"restriction routes disagree on class {a.coords}")
        classes.append({"class": list(a.coords), "special": s1, "fixture_class": a.coords == own})
    return {"h2": H.describe(), "classes": classes,
            "special_count": sum(1 for c in classes if c["special"])}


def cmd_torsion(ext: CrystalGroup, opts: Options) -> dict:
    return torsion_section(ext, _h2(ext.lattice, opts))


def cmd_chartable(G: FiniteGroup, opts: Options) -> dict:
    T = _table(G, opts)
    if not (T.row_orthogonality() and T.column_orthogonality()):
        raise InvariantViolation("character table fails orthogonality")
    rows = []
    for r in range(len(T.values)):
        rows.append([_cyclotomic_str(v) for v in lift_to_cyclotomic(T, r)])
    return {
        "group_order": G.order,
        "prime": T.prime,
        "degrees": list(T.degrees),
        "classes": [{"size": s, "order": G.orders[g]} for s, g in zip(G.class_sizes, G.class_reps)],
        "rows": rows,
        "zeta_order": G.exponent,
    }


def _cyclotomic_str(v) -> str:
    terms = []
    for j, c in enumerate(v.coeffs):
        if c == 0:
            continue
        mono = "" if j == 0 else ("z" if j == 1 else f"z^{j}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append("-" + mono)
        else:
            terms.append(f"{c}*{mono}")
    return "+".join(terms).replace("+-", "-") or "0"


def cmd_realify(doc: FixtureDocument, opts: Options) -> FixtureDocument:
    """Abstract fixture of the realified lattice and its cocycle."""
    ex = extract_data(realified_generators(doc), order_cap=opts.max_order)
    G = ex.group
    gens = [G.elements[g] for g in G.generators]
    out = FixtureDocument.from_abstract(
        f"{doc.name}-realified", matrix_group(gens, degree=ex.lattice.rank),
        cocycle=ex.cocycle.flat, description=f"realification of {doc.name}")
    return out


# argument handling ------------------------------------------------------------------

def _lattice_from_args(args, opts: Options) -> tuple[GLattice, Optional[CrystalGroup]]:
    if args.fixture:
        inst = instantiate(FixtureDocument.load(args.fixture), opts)
        return inst.lattice, inst.extension
    if not args.group:
        raise ParseError("give a fixture path or --group")
    G = NAMED_GROUPS[args.group]()
    if args.action:
        try:
            mats = json.loads(args.action)
        except json.JSONDecodeError as exc:
            raise ParseError(f"--action is not JSON: {exc}") from None
        return GLattice(G, [IntMatrix(m) for m in mats], rank=None if mats else args.rank), None
    return GLattice.trivial(G, args.rank), None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "machine"), default="human")
    common.add_argument("--seed", type=int, default=0, help="seed for character tables")
    common.add_argument("--max-order", type=int, default=DEFAULT_ORDER_CAP,
                        help="cap on enumerated group orders")
    common.add_argument("--max-h2-order", type=int, default=DEFAULT_COHOMOLOGY_CAP,
                        help="largest |G| for the cochain computation of H^2")

    p = argparse.ArgumentParser(prog="flatholo", description="Holonomy of flat manifolds")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("analyze", parents=[common], help="full report for one fixture")
    s.add_argument("fixture")
    s = sub.add_parser("verify-theorem", parents=[common], help="run the catalog harness")
    s.add_argument("catalog", nargs="?", help="directory of fixtures (default: shipped catalog)")
    for name, helptext in (("h2", "second cohomology"), ("special", "special classes of H^2")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("fixture", nargs="?")
        s.add_argument("--group", choices=sorted(NAMED_GROUPS))
        s.add_argument("--action", help="JSON list of integer matrices, one per generator")
        s.add_argument("--rank", type=int, default=1, help="rank of the trivial lattice")
    s = sub.add_parser("torsion", parents=[common], help="both torsion verdicts for an extension")
    s.add_argument("fixture")
    s = sub.add_parser("chartable", parents=[common], help="character table")
    s.add_argument("--group", choices=sorted(NAMED_GROUPS), required=True)
    s = sub.add_parser("realify", parents=[common], help="abstract fixture of a realified complex fixture")
    s.add_argument("fixture")
    s.add_argument("-o", "--output", help="write the fixture here instead of stdout")
    return p


def run(args: argparse.Namespace) -> tuple[str, dict]:
    opts = Options(args.seed, args.max_order, args.max_h2_order)
    cmd = args.command
    if cmd == "analyze":
        return cmd, analyze(FixtureDocument.load(args.fixture), opts)
    if cmd == "verify-theorem":
        return cmd, verify_theorem(load_catalog(args.catalog), opts)
    if cmd == "h2":
        L, _ = _lattice_from_args(args, opts)
        return cmd, cmd_h2(L, opts)
    if cmd == "special":
        L, ext = _lattice_from_args(args, opts)
        return cmd, cmd_special(L, opts, ext)
    if cmd == "torsion":
        inst = instantiate(FixtureDocument.load(args.fixture), opts)
        if inst.extension is None:
            raise FixtureInvalid("fixture has no cocycle")
        return cmd, cmd_torsion(inst.extension, opts)
    if cmd == "chartable":
        return cmd, cmd_chartable(NAMED_GROUPS[args.group](), opts)
    if cmd == "realify":
        return cmd, cmd_realify(FixtureDocument.load(args.fixture), opts).to_dict()
    raise ParseError(f"unknown command {cmd}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cmd, data = run(args)
    except ParseError as exc:
        return _fail(EXIT_PARSE, exc)
    except ValidationError as exc:
        return _fail(EXIT_VALIDATION, exc)
    except CapExceeded as exc:
        return _fail(EXIT_CAP, exc)
    except InvariantViolation as exc:
        return _fail(EXIT_INVARIANT, exc)
    except FlatHoloError as exc:
        return _fail(EXIT_INVARIANT, exc)
    if cmd == "realify":
        text = canonical_json(data)
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
            return EXIT_OK
        sys.stdout.write(text)
        return EXIT_OK
    sys.stdout.write(render(data, args.format))
    if cmd == "verify-theorem" and not data["passed"]:
        return 1
    return EXIT_OK


def _fail(code: int, exc: Exception) -> int:
    print(f"flatholo: {type(exc).__name__}: {exc}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
