"""Crystallographic groups as extensions ``0 -> M -> Gamma -> G -> 1``.

Everything is in lattice coordinates: the point group acts on ``M = Z^n`` by
integer matrices and elements of ``Gamma`` are pairs ``(m, g)`` with
``(m, g) (m', g') = (m + g m' + f(g, g'), g g')``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

from .cohomology import Cochain2, cocycle_defect, h2
from .exceptions import (
    InvariantViolation,
    LatticeRankDeficient,
    NotACocycle,
    OrderCapExceeded,
    PointGroupInfinite,
    ValidationError,
)
from .groups import DEFAULT_ORDER_CAP, FiniteGroup, GroupSpec, is_prime
from .lattices import GLattice
from .linalg import (
    IntMatrix,
    SmithDecomposition,
    as_rational_vector,
    hermite_normal_form,
    rational_inverse,
    rational_matmul,
    rational_matvec,
    smith_normal_form,
)


@dataclass(frozen=True)
class AffinePair:
    """``x -> linear @ x + translation`` with exact rational entries."""

    linear: tuple
    translation: tuple

    def __post_init__(self):
        object.__setattr__(self, "linear", tuple(tuple(Fraction(x) for x in r) for r in self.linear))
        object.__setattr__(self, "translation", as_rational_vector(self.translation))
        n = len(self.translation)
        if len(self.linear) != n or any(len(r) != n for r in self.linear):
            raise ValidationError("affine pair dimensions disagree")

    @property
    def dimension(self) -> int:
        return len(self.translation)

    @classmethod
    def translation_by(cls, vec: Sequence) -> "AffinePair":
        n = len(vec)
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), tuple(vec))

    def __mul__(self, other: "AffinePair") -> "AffinePair":
        A = rational_matmul(self.linear, other.linear)
        t = rational_matvec(self.linear, other.translation)
        return AffinePair(tuple(map(tuple, A)), tuple(a + b for a, b in zip(t, self.translation)))

    def inverse(self) -> "AffinePair":
        Ai = rational_inverse(self.linear)
        t = rational_matvec(Ai, self.translation)
        return AffinePair(tuple(map(tuple, Ai)), tuple(-x for x in t))

    def is_translation(self) -> bool:
        n = self.dimension
        return all(self.linear[i][j] == (i == j) for i in range(n) for j in range(n))

    def apply(self, x: Sequence) -> tuple:
        return tuple(a + b for a, b in zip(rational_matvec(self.linear, x), self.translation))


@dataclass(eq=False)
class CrystalGroup:
    """Extension of ``lattice.group`` by ``lattice`` with cocycle ``cocycle``."""

    lattice: GLattice
    cocycle: Cochain2

    @property
    def group(self) -> FiniteGroup:
        return self.lattice.group

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def identity(self) -> tuple:
        return ((0,) * self.rank, 0)

    def multiply(self, x: tuple, y: tuple) -> tuple:
        (m, g), (m2, g2) = x, y
        gm2 = self.lattice.act(g, m2)
        f = self.cocycle(g, g2)
        return (tuple(a + b + c for a, b, c in zip(m, gm2, f)), self.group.table[g][g2])

    def inverse(self, x: tuple) -> tuple:
        m, g = x
        gi = self.group.inverse[g]
        w = [a + b for a, b in zip(m, self.cocycle(g, gi))]
        return (tuple(-c for c in self.lattice.act(gi, w)), gi)

    def power(self, x: tuple, k: int) -> tuple:
        out = self.identity()
        for _ in range(k):
            out = self.multiply(out, x)
        return out

    def project(self, x: tuple) -> int:
        return x[1]

    def translation(self, m: Sequence[int]) -> tuple:
        return (tuple(m), 0)

    def vector_system(self) -> list[tuple]:
        return vector_system(self)

    def affine_generators(self) -> list[AffinePair]:
        """Point-group generators realised affinely, followed by unit translations."""
        v = self.vector_system()
        G, n = self.group, self.rank
        gens = [AffinePair(tuple(map(tuple, self.lattice.action[i].tolist())), v[g])
                for i, g in enumerate(G.generators)]
        gens += [AffinePair.translation_by([int(i == j) for j in range(n)]) for i in range(n)]
        return gens

    def affine(self, x: tuple, v: Optional[list] = None) -> AffinePair:
        v = self.vector_system() if v is None else v
        m, g = x
        return AffinePair(tuple(map(tuple, self.lattice.matrices[g].tolist())),
                          tuple(Fraction(a) + b for a, b in zip(m, v[g])))


def build_extension(G: FiniteGroup, L: GLattice, f: Cochain2) -> CrystalGroup:
    if L.group is not G:
        raise ValidationError("lattice is over a different group")
    if f.order != G.order or f.rank != L.rank:
        raise ValidationError("cochain does not match the group and lattice")
    bad = cocycle_defect(L, f)
    if bad is not None:
        raise NotACocycle(f"cocycle identity fails at {bad}")
    return CrystalGroup(L, f)


def vector_system(gamma: CrystalGroup) -> list[tuple]:
    """Rational ``v_g`` with ``v_g + g v_h - v_gh = f(g, h)`` and ``v_1 = 0``.

    ``v_g = (1/|G|) sum_h f(g, h)`` works for every cocycle.
    """
    G, n = gamma.group, gamma.rank
    N = G.order
    out = []
    for g in range(N):
        acc = [0] * n
        for h in range(N):
            acc = [a + b for a, b in zip(acc, gamma.cocycle(g, h))]
        out.append(tuple(Fraction(a, N) for a in acc))
    return out


def _norm_solver(gamma: CrystalGroup, g: int) -> SmithDecomposition:
    L = gamma.lattice
    cache = L.__dict__.setdefault("_norm_snf", {})
    if g not in cache:
        G = L.group
        N = IntMatrix.zeros(L.rank, L.rank)
        x = 0
        for _ in range(G.orders[g]):
            N = N + L.matrices[x]
            x = G.table[x][g]
        cache[g] = smith_normal_form(N)
    return cache[g]


def torsion_search(gamma: CrystalGroup) -> Optional[tuple]:
    """An element of prime order in ``gamma``, or ``None`` if it is torsion-free.

    ``(m, g)^p = (N_g m + t_g, 1)`` with ``t_g = sum_{i=1}^{p-1} f(g^i, g)``,
    so a witness exists iff ``N_g m = -t_g`` is solvable over the integers.
    """
    G = gamma.group
    for g in G.class_reps:
        p = G.orders[g]
        if not is_prime(p):
            continue
        t = [0] * gamma.rank
        x = g
        for _ in range(1, p):
            t = [a + b for a, b in zip(t, gamma.cocycle(x, g))]
            x = G.table[x][g]
        m = _norm_solver(gamma, g).solve([-a for a in t])
        if m is not None:
            witness = (tuple(m), g)
            if gamma.power(witness, p) != gamma.identity():
                raise InvariantViolation("torsion witness fails the group law")
            return witness
    return None


def is_bieberbach(gamma: CrystalGroup) -> bool:
    return gamma.rank == gamma.lattice.rank and torsion_search(gamma) is None


# affine input -----------------------------------------------------------------------

@dataclass(eq=False)
class ExtractedData:
    """Point group, holonomy lattice and cocycle recovered from affine generators.

    ``basis`` holds the translation lattice basis as columns in the input
    coordinates.
    """

    group: FiniteGroup
    lattice: GLattice
    cocycle: Cochain2
    basis: list = field(repr=False)

    def extension(self) -> CrystalGroup:
        return build_extension(self.group, self.lattice, self.cocycle)

    def cohomology_class(self):
        H = h2(self.group, self.lattice)
        return H, H.class_of(self.cocycle)


def _matrix_key(A) -> tuple:
    return tuple(tuple(Fraction(x) for x in r) for r in A)


def extract_data(generators: Sequence[AffinePair], order_cap: int = DEFAULT_ORDER_CAP) -> ExtractedData:
    """Recover ``(G, M, f)`` from affine generators of a crystallographic group.

    The section sends each point-group element to the product of generators
    along its shortlex-least word. Pure translations come from Schreier
    generators ``s(g) gamma_i s(g gamma_i)^-1``, which generate the whole
    translation subgroup.
    """
    if not generators:
        raise ValidationError("no generators given")
    n = generators[0].dimension
    lin = [_matrix_key(a.linear) for a in generators]
    ident = _matrix_key([[int(i == j) for j in range(n)] for i in range(n)])
    try:
        G_std = FiniteGroup.from_generators(
            lin, lambda a, b: _matrix_key(rational_matmul(a, b)), ident, order_cap=order_cap)
    except OrderCapExceeded as exc:
        raise PointGroupInfinite(str(exc)) from exc

    N = G_std.order
    section: list[Optional[AffinePair]] = [None] * N
    section[0] = AffinePair(ident, (0,) * n)
    for g in range(1, N):
        w = G_std.words[g]
        parent = G_std.table[g][G_std.inverse[G_std.generators[w[-1]]]]
        section[g] = section[parent] * generators[w[-1]]

    translations = []
    for g in range(N):
        for i, gamma in enumerate(generators):
            h = G_std.table[g][G_std.generators[i]]
            t = section[g] * gamma * section[h].inverse()
            if not t.is_translation():
                raise InvariantViolation("Schreier generator is not a translation")
            translations.append(t.translation)

    den = lcm(*(x.denominator for t in translations for x in t)) if translations else 1
    ints = IntMatrix([[int(x * den) for x in t] for t in translations], cols=n)
    H, _ = hermite_normal_form(ints)
    rows = [r for r in H if any(r)]
    if len(rows) < n:
        raise LatticeRankDeficient(f"translations span rank {len(rows)} < {n}")
    basis = [[Fraction(rows[j][i], den) for j in range(n)] for i in range(n)]  # columns
    basis_inv = rational_inverse(basis)

    def to_lattice(A):
        C = rational_matmul(rational_matmul(basis_inv, A), basis)
        if any(x.denominator != 1 for r in C for x in r):
            raise ValidationError("point group does not preserve the translation lattice")
        return IntMatrix([[int(x) for x in r] for r in C], cols=n)

    conj_gens = [to_lattice(A) for A in lin]
    G = FiniteGroup.from_spec(GroupSpec.matrices(conj_gens, degree=n, order_cap=order_cap))
    if G.order != N or G.table != G_std.table:
        raise InvariantViolation("conjugated point group does not match")
    L = GLattice.natural(G)

    v = [rational_matvec(basis_inv, section[g].translation) for g in range(N)]

    def f(g, h):
        Av = rational_matvec(L.matrices[g].tolist(), v[h])
        val = [a + b - c for a, b, c in zip(v[g], Av, v[G.table[g][h]])]
        if any(x.denominator != 1 for x in val):
            raise InvariantViolation("cocycle value is not integral")
        return tuple(int(x) for x in val)

    cocycle = Cochain2.from_function(G, n, f)
    return ExtractedData(G, L, cocycle, basis)


def same_class(L: GLattice, f1: Cochain2, f2: Cochain2) -> bool:
    """Do two cocycles differ by a coboundary?"""
    return h2(L.group, L).class_of(f1 - f2).is_zero()
