"""Integral G-lattices and the homogeneity decision.

Homogeneity over Q is decided twice: by counting Galois orbits of the complex
constituents (fast) and by ranks of rational central idempotents (slow).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .characters import (
    CharacterTable,
    cached_table,
    galois_orbits,
    multiplicities,
)
from .exceptions import ValidationError, ZeroRank
from .groups import FiniteGroup, GroupSpec
from .linalg import IntMatrix, kernel_basis, rank


@dataclass(eq=False)
class GLattice:
    """``Z^n`` with ``G`` acting through ``action[i]`` on generator ``i``.

    ``matrices[g]`` is the matrix of every element, obtained by multiplying
    along the element's generator word; construction verifies that this is a
    homomorphism.
    """

    group: FiniteGroup
    action: tuple
    rank: Optional[int] = None
    matrices: list = field(init=False, repr=False)

    def __post_init__(self):
        G = self.group
        self.action = tuple(a if isinstance(a, IntMatrix) else IntMatrix(a) for a in self.action)
        if len(self.action) != len(G.generators):
            raise ValidationError("need one action matrix per generator")
        if self.action:
            n = self.action[0].rows
        elif self.rank is None:
            raise ValidationError("rank must be given when the group has no generators")
        else:
            n = self.rank
        for a in self.action:
            if a.shape != (n, n) or abs(a.det()) != 1:
                raise ValidationError("action matrices must be square, of equal size, with det +-1")
        self.rank = n
        mats: list[Optional[IntMatrix]] = [None] * G.order
        mats[0] = IntMatrix.identity(n)
        for g in range(1, G.order):
            w = G.words[g]
            parent = G.table[g][G.inverse[G.generators[w[-1]]]]
            mats[g] = mats[parent] @ self.action[w[-1]] if mats[parent] is not None else None
        if any(m is None for m in mats):
            # words are BFS-ordered, so parents always precede children
            raise ValidationError("inconsistent generator words")
        for x in range(G.order):
            for i, gi in enumerate(G.generators):
                if mats[x] @ self.action[i] != mats[G.table[x][gi]]:
                    raise ValidationError("action does not respect the group law")
        self.matrices = mats

    @classmethod
    def natural(cls, group: FiniteGroup) -> "GLattice":
        """Lattice of a matrix group acting on column vectors."""
        if group.kind != "matrix":
            raise ValidationError("natural lattice needs a matrix group")
        return cls(group, [group.elements[g] for g in group.generators],
                   rank=group.elements[0].rows)

    @classmethod
    def trivial(cls, group: FiniteGroup, n: int) -> "GLattice":
        return cls(group, [IntMatrix.identity(n)] * len(group.generators), rank=n)

    def __call__(self, g: int) -> IntMatrix:
        return self.matrices[g]

    def act(self, g: int, v: Sequence[int]) -> tuple:
        return self.matrices[g] @ v

    def restrict(self, H: FiniteGroup) -> "GLattice":
        """Restriction to a subgroup built with :meth:`FiniteGroup.subgroup`."""
        emb = H.parent_indices
        return GLattice(H, [self.matrices[emb[h]] for h in H.generators], rank=self.rank)


def direct_sum(L1: GLattice, L2: GLattice) -> GLattice:
    if L1.group is not L2.group:
        raise ValidationError("summands must share their group")
    n1, n2 = L1.rank, L2.rank

    def block(a: IntMatrix, b: IntMatrix) -> IntMatrix:
        rows = [list(r) + [0] * n2 for r in a] + [[0] * n1 + list(r) for r in b]
        return IntMatrix(rows, cols=n1 + n2)

    gens = [block(a, b) for a, b in zip(L1.action, L2.action)]
    return GLattice(L1.group, gens, rank=n1 + n2)


@dataclass(frozen=True)
class LatticeCharacter:
    values: tuple

    def __getitem__(self, c: int) -> int:
        return self.values[c]


def lattice_character(L: GLattice) -> LatticeCharacter:
    return LatticeCharacter(tuple(L.matrices[g].trace() for g in L.group.class_reps))


def _table(L: GLattice, table: Optional[CharacterTable]) -> CharacterTable:
    return table if table is not None else cached_table(L.group)


def irr_constituents(L: GLattice, table: Optional[CharacterTable] = None) -> list[tuple[int, int]]:
    """``(row, multiplicity)`` pairs of the complex constituents of ``C (x) M``."""
    return multiplicities(_table(L, table), lattice_character(L).values)


@dataclass(frozen=True)
class HomogeneityResult:
    homogeneous: bool
    component_count: int
    orbits_hit: tuple


def homogeneity_test(L: GLattice, table: Optional[CharacterTable] = None) -> HomogeneityResult:
    if L.rank == 0:
        raise ZeroRank("homogeneity is undefined for the zero lattice")
    T = _table(L, table)
    rows = {r for r, _ in irr_constituents(L, T)}
    hit = tuple(orb for orb in galois_orbits(T) if rows & set(orb))
    return HomogeneityResult(len(hit) == 1, len(hit), hit)


def isotypic_projector(L: GLattice, orbit: Sequence[int], table: Optional[CharacterTable] = None) -> IntMatrix:
    """``|G|`` times the rational central idempotent of ``orbit``, acting on ``Z^n``.

    ``sum_{chi in orbit} chi(1) chi(g^-1)`` is a rational integer bounded by
    ``|G| < l/2``, so the symmetric residue is its exact value.
    """
    T = _table(L, table)
    G = L.group
    n = L.rank
    coeff = []
    for g in range(G.order):
        c = G.class_of[G.inverse[g]]
        coeff.append(T.symmetric(sum(T.degrees[r] * T.values[r][c] for r in orbit)))
    acc = [[0] * n for _ in range(n)]
    for g, c in enumerate(coeff):
        if c:
            for i, row in enumerate(L.matrices[g]):
                ai = acc[i]
                for j, x in enumerate(row):
                    if x:
                        ai[j] += c * x
    return IntMatrix(acc, cols=n)


def isotypic_rank(L: GLattice, orbit: Sequence[int], table: Optional[CharacterTable] = None) -> int:
    return rank(isotypic_projector(L, orbit, table))


def idempotent_component_count(L: GLattice, table: Optional[CharacterTable] = None) -> tuple[int, list[int]]:
    """Slow-path component count and the isotypic rank of every orbit."""
    T = _table(L, table)
    ranks = [isotypic_rank(L, orb, T) for orb in galois_orbits(T)]
    return sum(1 for r in ranks if r > 0), ranks


def fixed_sublattice(L: GLattice, H: Optional[Sequence[int]] = None) -> IntMatrix:
    """Saturated basis (as rows) of the vectors fixed by every element of ``H``."""
    G = L.group
    H = range(G.order) if H is None else H
    n = L.rank
    I = IntMatrix.identity(n)
    stacked = []
    for h in H:
        if h != 0:
            stacked.extend((L.matrices[h] - I).tolist())
    if not stacked:
        return I
    return kernel_basis(IntMatrix(stacked, cols=n))


def is_faithful(L: GLattice) -> bool:
    I = IntMatrix.identity(L.rank)
    return all(L.matrices[g] != I for g in range(1, L.group.order))


def kernel_of_action(L: GLattice) -> tuple:
    I = IntMatrix.identity(L.rank)
    return tuple(g for g in range(L.group.order) if L.matrices[g] == I)


def diagonal_lattice(G: FiniteGroup, signs: Sequence[Sequence[int]]) -> GLattice:
    """Generator ``i`` acts by ``diag(signs[i])``."""
    n = len(signs[0]) if signs else 0
    return GLattice(G, [IntMatrix.diag(s) for s in signs], rank=n)


def matrix_group_lattice(mats: Sequence) -> GLattice:
    """Convenience: the natural lattice of the matrix group generated by ``mats``."""
    G = FiniteGroup.from_spec(GroupSpec.matrices(mats))
    return GLattice.natural(G)
