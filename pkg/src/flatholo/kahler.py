"""Realification of complex affine data and flat Kaehler holonomy checks.

Complex entries are Gaussian rationals ``a + b i`` with ``a, b`` exact
fractions, so real and imaginary parts are read off without rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .characters import CharacterTable, character_table, multiplicities
from .crystal import AffinePair, extract_data, is_bieberbach
from .exceptions import NonCharacter, NotBieberbach, ValidationError
from .groups import DEFAULT_ORDER_CAP, FiniteGroup
from .lattices import homogeneity_test, lattice_character


@dataclass(frozen=True)
class Gaussian:
    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def of(cls, x) -> "Gaussian":
        if isinstance(x, Gaussian):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, (tuple, list)):
            return cls(Fraction(x[0]), Fraction(x[1]))
        return cls(Fraction(x))

    def __add__(self, o: "Gaussian") -> "Gaussian":
        return Gaussian(self.re + o.re, self.im + o.im)

    def __sub__(self, o: "Gaussian") -> "Gaussian":
        return Gaussian(self.re - o.re, self.im - o.im)

    def __mul__(self, o: "Gaussian") -> "Gaussian":
        return Gaussian(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def __neg__(self) -> "Gaussian":
        return Gaussian(-self.re, -self.im)

    def conjugate(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    def is_integral(self) -> bool:
        return self.re.denominator == 1 and self.im.denominator == 1

    def __str__(self) -> str:
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


ZERO = Gaussian(0)
ONE = Gaussian(1)

ComplexMatrix = tuple  # tuple of rows of Gaussian


def cmatrix(rows: Sequence[Sequence]) -> ComplexMatrix:
    return tuple(tuple(Gaussian.of(x) for x in r) for r in rows)


def cmatmul(A: ComplexMatrix, B: ComplexMatrix) -> ComplexMatrix:
    cols = list(zip(*B))
    out = []
    for r in A:
        row = []
        for c in cols:
            acc = ZERO
            for x, y in zip(r, c):
                acc = acc + x * y
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def cmatvec(A: ComplexMatrix, v: Sequence[Gaussian]) -> tuple:
    out = []
    for r in A:
        acc = ZERO
        for x, y in zip(r, v):
            acc = acc + x * y
        out.append(acc)
    return tuple(out)


def ctrace(A: ComplexMatrix) -> Gaussian:
    acc = ZERO
    for i in range(len(A)):
        acc = acc + A[i][i]
    return acc


def cidentity(n: int) -> ComplexMatrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class ComplexAffinePair:
    """``z -> linear z + translation`` on ``C^n``."""

    linear: ComplexMatrix
    translation: tuple

    def __post_init__(self):
        object.__setattr__(self, "linear", cmatrix(self.linear))
        object.__setattr__(self, "translation", tuple(Gaussian.of(x) for x in self.translation))

    def __mul__(self, other: "ComplexAffinePair") -> "ComplexAffinePair":
        t = cmatvec(self.linear, other.translation)
        return ComplexAffinePair(cmatmul(self.linear, other.linear),
                                 tuple(a + b for a, b in zip(t, self.translation)))


def realify_matrix(A: ComplexMatrix) -> tuple:
    """``[[Re A, -Im A], [Im A, Re A]]``."""
    top = [[x.re for x in r] + [-x.im for x in r] for r in A]
    bottom = [[x.im for x in r] + [x.re for x in r] for r in A]
    return tuple(tuple(r) for r in top + bottom)


def realify_affine(A: ComplexMatrix, a: Sequence) -> AffinePair:
    A = cmatrix(A)
    a = [Gaussian.of(x) for x in a]
    return AffinePair(realify_matrix(A), tuple(x.re for x in a) + tuple(x.im for x in a))


@dataclass(eq=False)
class ComplexRep:
    """Finite matrix group ``phi(G)`` in ``GL(n, Q(i))``; the group is its closure."""

    degree: int
    group: FiniteGroup
    generators: tuple

    @classmethod
    def from_generators(cls, mats: Sequence, degree: Optional[int] = None,
                        order_cap: int = DEFAULT_ORDER_CAP) -> "ComplexRep":
        gens = [cmatrix(m) for m in mats]
        if degree is None:
            if not gens:
                raise ValidationError("degree required without generators")
            degree = len(gens[0])
        for g in gens:
            if len(g) != degree or any(len(r) != degree for r in g):
                raise ValidationError("generator has the wrong shape")
        G = FiniteGroup.from_generators(gens, cmatmul, cidentity(degree), order_cap=order_cap,
                                        kind="complex")
        return cls(degree, G, tuple(gens))

    def matrix(self, g: int) -> ComplexMatrix:
        return self.group.elements[g]

    def character(self) -> list[Gaussian]:
        return [ctrace(self.matrix(g)) for g in self.group.class_reps]


@dataclass(eq=False)
class RealifiedRep:
    degree: int
    group: FiniteGroup
    generators: tuple
    matrices: list

    def character(self) -> list[Fraction]:
        return [sum(self.matrices[g][i][i] for i in range(self.degree)) for g in self.group.class_reps]


def realify_rep(phi: ComplexRep) -> RealifiedRep:
    mats = [realify_matrix(phi.matrix(g)) for g in range(phi.group.order)]
    gens = tuple(realify_matrix(m) for m in phi.generators)
    return RealifiedRep(2 * phi.degree, phi.group, gens, mats)


def complex_table(phi: ComplexRep, seed: int = 0) -> CharacterTable:
    """Character table whose prime also contains a fourth root of unity."""
    return character_table(phi.group, seed=seed, conductor=4)


def reduced_character(phi: ComplexRep, T: CharacterTable) -> list[int]:
    i_mod = T.root_of_order(4)
    out = []
    for v in phi.character():
        if not v.is_integral():
            raise NonCharacter(f"trace {v} is not a Gaussian integer")
        out.append((int(v.re) + int(v.im) * i_mod) % T.prime)
    return out


def c_constituents(phi: ComplexRep, T: Optional[CharacterTable] = None) -> list[tuple[int, int]]:
    T = complex_table(phi) if T is None else T
    return multiplicities(T, reduced_character(phi, T))


def c_homogeneity(phi: ComplexRep, T: Optional[CharacterTable] = None) -> int:
    """Number of distinct irreducible complex characters occurring in ``phi``."""
    return len(c_constituents(phi, T))


@dataclass(frozen=True)
class KahlerVerdict:
    holonomy_order: int
    c_components: int
    realified_components: int
    realified_homogeneous: bool
    bieberbach: bool
    character_identity: bool
    consistent: bool
    theorem_holds: bool


def kahler_theorem_check(generators: Sequence[ComplexAffinePair], seed: int = 0,
                         order_cap: int = DEFAULT_ORDER_CAP) -> KahlerVerdict:
    """Realify a complex crystallographic group and compare complex and rational homogeneity.

    Raises :class:`NotBieberbach` if the realified group has torsion.
    """
    phi = ComplexRep.from_generators([g.linear for g in generators], order_cap=order_cap)
    real_gens = [realify_affine(g.linear, g.translation) for g in generators]
    ex = extract_data(real_gens, order_cap=order_cap)
    gamma = ex.extension()
    if not is_bieberbach(gamma):
        raise NotBieberbach("realified group has torsion")
    if ex.group.table != phi.group.table:
        raise ValidationError("realified point group does not match the complex holonomy")
    hom = homogeneity_test(ex.lattice)
    c_count = c_homogeneity(phi, complex_table(phi, seed))
    real_char = realify_rep(phi).character()
    lat_char = lattice_character(ex.lattice).values
    identity_ok = all(
        r == 2 * c.re == lc for r, c, lc in zip(real_char, phi.character(), lat_char)
    )
    consistent = (c_count != 1) or hom.homogeneous
    theorem = phi.group.order == 1 or (c_count >= 2 and hom.component_count >= 2)
    return KahlerVerdict(
        holonomy_order=phi.group.order,
        c_components=c_count,
        realified_components=hom.component_count,
        realified_homogeneous=hom.homogeneous,
        bieberbach=True,
        character_identity=identity_ok,
        consistent=consistent,
        theorem_holds=theorem,
    )
