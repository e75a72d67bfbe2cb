"""Second cohomology ``H^2(G, M)`` of a finite group with lattice coefficients.

Cochains are normalised (they vanish when an argument is the identity), so the
coordinates of a 2-cochain are indexed by pairs of non-identity elements. For
a finite group ``H^2(G, Q^n) = 0``, so ``ker d2`` is the saturation of
``im d1`` and ``H^2`` is the torsion of ``coker d1``; the Smith form of ``d1``
alone presents it. The free part of ``coker d1`` is checked against the rank
of ``d2`` over a large prime field.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .exceptions import (
    GroupTooLarge,
    InternalFreePartDetected,
    InvariantViolation,
    NotCyclic,
    PropertyViolated,
    ValidationError,
)
from .groups import FiniteGroup, cyclic_generator, is_cyclic, prime_order_subgroups
from .lattices import GLattice
from .linalg import IntMatrix, SmithDecomposition, kernel_basis, rank_mod_p, smith_normal_form

DEFAULT_COHOMOLOGY_CAP = 16
_FREE_PART_CHECK_LIMIT = 4_000_000


@dataclass(frozen=True)
class Cochain2:
    """Normalised 2-cochain stored as a flat vector of length ``(|G|-1)^2 n``."""

    order: int
    rank: int
    flat: tuple

    def __post_init__(self):
        if len(self.flat) != (self.order - 1) ** 2 * self.rank:
            raise ValidationError("cochain has the wrong number of coordinates")

    @classmethod
    def zero(cls, order: int, rank: int) -> "Cochain2":
        return cls(order, rank, (0,) * ((order - 1) ** 2 * rank))

    @classmethod
    def from_function(cls, G: FiniteGroup, rank: int, f) -> "Cochain2":
        """Sample ``f(g, h)`` on non-identity pairs; identity values must vanish."""
        N = G.order
        flat = []
        for g in range(1, N):
            for h in range(1, N):
                v = tuple(f(g, h))
                if len(v) != rank:
                    raise ValidationError("cochain value has the wrong length")
                flat.extend(v)
        for g in range(N):
            if any(f(0, g)) or any(f(g, 0)):
                raise ValidationError("cochain is not normalised")
        return cls(N, rank, tuple(int(x) for x in flat))

    def __call__(self, g: int, h: int) -> tuple:
        if g == 0 or h == 0:
            return (0,) * self.rank
        start = ((g - 1) * (self.order - 1) + (h - 1)) * self.rank
        return self.flat[start:start + self.rank]

    def __add__(self, other: "Cochain2") -> "Cochain2":
        return Cochain2(self.order, self.rank, tuple(a + b for a, b in zip(self.flat, other.flat)))

    def __sub__(self, other: "Cochain2") -> "Cochain2":
        return Cochain2(self.order, self.rank, tuple(a - b for a, b in zip(self.flat, other.flat)))

    def scale(self, c: int) -> "Cochain2":
        return Cochain2(self.order, self.rank, tuple(c * a for a in self.flat))


def cocycle_defect(L: GLattice, f: Cochain2) -> Optional[tuple]:
    """First triple violating the 2-cocycle identity, or ``None``."""
    G = L.group
    t = G.table
    mats = L.matrices
    N = G.order
    for g in range(1, N):
        A = mats[g]
        for h in range(1, N):
            gh = t[g][h]
            fgh = f(g, h)
            for k in range(1, N):
                lhs = A @ f(h, k)
                a, b = f(gh, k), f(g, t[h][k])
                if any(x - y + z - w for x, y, z, w in zip(lhs, a, b, fgh)):
                    return (g, h, k)
    return None


def is_cocycle(L: GLattice, f: Cochain2) -> bool:
    return cocycle_defect(L, f) is None


def _check_cap(G: FiniteGroup, cap: int) -> None:
    if G.order > cap:
        raise GroupTooLarge(f"|G| = {G.order} exceeds the cohomology cap {cap}")


def coboundary_d1_rows(L: GLattice) -> list[list[int]]:
    """``d1`` as dense rows: normalised 1-cochains to normalised 2-cochains."""
    G, n = L.group, L.rank
    N = G.order
    m = N - 1
    rows = [[0] * (m * n) for _ in range(m * m * n)]
    for g in range(1, N):
        A = L.matrices[g]
        for h in range(1, N):
            base = ((g - 1) * m + (h - 1)) * n
            gh = G.table[g][h]
            for i in range(n):
                row = rows[base + i]
                for j in range(n):
                    row[(h - 1) * n + j] += A[i, j]
                if gh:
                    row[(gh - 1) * n + i] -= 1
                row[(g - 1) * n + i] += 1
    return rows


def coboundary_d2_array(L: GLattice) -> np.ndarray:
    """``d2`` as an int64 array (entries are action-matrix entries, so tiny)."""
    G, n = L.group, L.rank
    N = G.order
    m = N - 1
    D = np.zeros((m ** 3 * n, m * m * n), dtype=np.int64)
    mats = [np.array(M.tolist(), dtype=np.int64).reshape(n, n) for M in L.matrices]
    eye = np.eye(n, dtype=np.int64)

    def col(a, b):
        return ((a - 1) * m + (b - 1)) * n

    for g in range(1, N):
        for h in range(1, N):
            gh = G.table[g][h]
            for k in range(1, N):
                r = (((g - 1) * m + (h - 1)) * m + (k - 1)) * n
                hk = G.table[h][k]
                D[r:r + n, col(h, k):col(h, k) + n] += mats[g]
                if gh:
                    D[r:r + n, col(gh, k):col(gh, k) + n] -= eye
                if hk:
                    D[r:r + n, col(g, hk):col(g, hk) + n] += eye
                D[r:r + n, col(g, h):col(g, h) + n] -= eye
    return D


def coboundary_matrices(G: FiniteGroup, L: GLattice,
                        cap: int = DEFAULT_COHOMOLOGY_CAP) -> tuple[IntMatrix, IntMatrix]:
    """``(D1, D2)`` on normalised cochain coordinates; ``D2 @ D1 = 0``."""
    _check_cap(G, cap)
    m, n = G.order - 1, L.rank
    D1 = IntMatrix(coboundary_d1_rows(L), cols=m * n)
    D2 = IntMatrix(coboundary_d2_array(L).tolist(), cols=m * m * n)
    return D1, D2


@dataclass(frozen=True)
class H2Element:
    """Class in a presented cohomology group: coordinates mod the invariant factors."""

    parent: object = field(repr=False, compare=False)
    coords: tuple

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "H2Element") -> "H2Element":
        return self.parent.element([a + b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "H2Element":
        return self.parent.element([-a for a in self.coords])

    def __eq__(self, other) -> bool:
        return isinstance(other, H2Element) and self.parent is other.parent and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)


@dataclass(eq=False)
class H2Group:
    """``H^2(G, M)`` presented by invariant factors, with lift and class maps."""

    lattice: GLattice
    invariant_factors: tuple
    snf: Optional[SmithDecomposition] = field(repr=False, default=None)
    positions: tuple = field(repr=False, default=())
    free_positions: tuple = field(repr=False, default=())

    @property
    def group(self) -> FiniteGroup:
        return self.lattice.group

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def describe(self) -> str:
        return " x ".join(f"Z/{d}" for d in self.invariant_factors) or "0"

    def element(self, coords: Sequence[int]) -> H2Element:
        if len(coords) != len(self.invariant_factors):
            raise ValidationError("wrong number of class coordinates")
        return H2Element(self, tuple(c % d for c, d in zip(coords, self.invariant_factors)))

    def zero(self) -> H2Element:
        return self.element([0] * len(self.invariant_factors))

    def elements(self) -> Iterator[H2Element]:
        for coords in itertools.product(*(range(d) for d in self.invariant_factors)):
            yield H2Element(self, coords)

    def generators(self) -> list[H2Element]:
        k = len(self.invariant_factors)
        return [self.element([int(i == j) for j in range(k)]) for i in range(k)]

    def lift(self, alpha: Union[H2Element, Sequence[int]]) -> Cochain2:
        """Cocycle representative, built from columns of ``U^-1``."""
        coords = alpha.coords if isinstance(alpha, H2Element) else tuple(alpha)
        G, n = self.group, self.lattice.rank
        size = (G.order - 1) ** 2 * n
        flat = [0] * size
        for c, pos in zip(coords, self.positions):
            if c:
                for i, x in enumerate(self._lift_cols[pos]):
                    if x:
                        flat[i] += c * x
        return Cochain2(G.order, n, tuple(flat))

    def class_of(self, f: Cochain2, check: bool = True) -> H2Element:
        """Class of a cocycle ``f``."""
        if check and not is_cocycle(self.lattice, f):
            raise ValidationError("cochain is not a cocycle")
        if self.snf is None:
            return self.zero()
        U = self.snf.U
        for pos in self.free_positions:
            if sum(a * b for a, b in zip(U.row(pos), f.flat)):
                raise InternalFreePartDetected("cocycle has a component outside the saturation of im d1")
        coords = [sum(a * b for a, b in zip(U.row(pos), f.flat)) for pos in self.positions]
        return self.element(coords)

    def is_coboundary(self, f: Cochain2) -> bool:
        return self.class_of(f).is_zero()

    def __post_init__(self):
        self._lift_cols = {}
        if self.snf is not None and self.snf.U_inv is not None:
            Ui = self.snf.U_inv
            for pos in self.positions:
                self._lift_cols[pos] = Ui.column(pos)


def h2(G: FiniteGroup, L: GLattice, cap: int = DEFAULT_COHOMOLOGY_CAP,
       check_free_part: bool = True) -> H2Group:
    """``ker d2 / im d1`` via the Smith form of ``d1``."""
    if L.group is not G:
        raise ValidationError("lattice is over a different group")
    _check_cap(G, cap)
    n = L.rank
    m = G.order - 1
    if m == 0 or n == 0:
        return H2Group(L, ())
    D1 = IntMatrix(coboundary_d1_rows(L), cols=m * n)
    snf = smith_normal_form(D1, with_inverse=True)
    diag = snf.diagonal
    r = snf.rank
    positions = tuple(i for i, d in enumerate(diag) if d > 1)
    factors = tuple(diag[i] for i in positions)
    free_positions = tuple(range(r, D1.rows))
    if any(G.order % d for d in factors):
        raise InvariantViolation("H^2 is not annihilated by |G|")
    if check_free_part and free_positions:
        size = m ** 3 * n * m * m * n
        if size <= _FREE_PART_CHECK_LIMIT:
            rk2 = rank_mod_p(coboundary_d2_array(L))
            if rk2 != len(free_positions):
                raise InternalFreePartDetected(
                    f"rank d2 = {rk2} but coker d1 has free rank {len(free_positions)}")
    return H2Group(L, factors, snf, positions, free_positions)


# cyclic groups ------------------------------------------------------------------

@dataclass(eq=False)
class CyclicH2:
    """``M^C / N M`` for the cyclic group generated by ``generator`` acting on ``lattice``.

    ``fixed`` holds a basis of ``M^C`` as rows; classes are coordinates
    relative to the Smith form of the norm image written in that basis.
    """

    lattice: GLattice
    generator: int
    cyclic_order: int
    fixed: IntMatrix
    norm: IntMatrix
    invariant_factors: tuple
    _fixed_snf: Optional[SmithDecomposition] = field(default=None, repr=False)
    _image_snf: Optional[SmithDecomposition] = field(default=None, repr=False)
    _positions: tuple = field(default=(), repr=False)

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def describe(self) -> str:
        return " x ".join(f"Z/{d}" for d in self.invariant_factors) or "0"

    def element(self, coords: Sequence[int]) -> H2Element:
        return H2Element(self, tuple(c % d for c, d in zip(coords, self.invariant_factors)))

    def zero(self) -> H2Element:
        return self.element([0] * len(self.invariant_factors))

    def elements(self) -> Iterator[H2Element]:
        for coords in itertools.product(*(range(d) for d in self.invariant_factors)):
            yield H2Element(self, coords)

    def class_of_fixed_vector(self, w: Sequence[int]) -> H2Element:
        """Class of ``w in M^C`` in ``M^C / N M``."""
        if not self.invariant_factors:
            if self._fixed_snf is not None and self._fixed_snf.solve(w) is None:
                raise ValidationError("vector is not fixed by the cyclic group")
            return self.zero()
        y = self._fixed_snf.solve(w)
        if y is None:
            raise ValidationError("vector is not fixed by the cyclic group")
        z = self._image_snf.U @ y
        return self.element([z[p] for p in self._positions])

    def class_of(self, f: Cochain2) -> H2Element:
        """Image of a cocycle on the ambient group: ``sum_i f(c^i, c)``."""
        G = self.lattice.group
        c = self.generator
        w = [0] * self.lattice.rank
        x = 0
        for _ in range(self.cyclic_order):
            w = [a + b for a, b in zip(w, f(x, c))]
            x = G.table[x][c]
        return self.class_of_fixed_vector(w)


def cyclic_h2_data(L: GLattice, c: int) -> CyclicH2:
    """``H^2(<c>, M)`` as ``M^C / N M`` for an element ``c`` of ``L.group``."""
    G = L.group
    n = L.rank
    m = G.orders[c]
    I = IntMatrix.identity(n)
    A = L.matrices[c]
    K = kernel_basis(A - I) if n else IntMatrix([], cols=0)
    N = IntMatrix.zeros(n, n)
    x = 0
    for _ in range(m):
        N = N + L.matrices[x]
        x = G.table[x][c]
    k = K.rows
    if k == 0:
        return CyclicH2(L, c, m, K, N, ())
    KT = K.T  # n x k, full column rank
    fixed_snf = smith_normal_form(KT)
    cols = []
    for j in range(n):
        y = fixed_snf.solve(N.column(j))
        if y is None:
            raise InvariantViolation("norm image is not inside the fixed sublattice")
        cols.append(y)
    Y = IntMatrix([list(r) for r in zip(*cols)], cols=n)  # k x n
    image_snf = smith_normal_form(Y)
    diag = image_snf.diagonal
    if image_snf.rank < k:
        raise InternalFreePartDetected("norm image has infinite index in the fixed lattice")
    positions = tuple(i for i, d in enumerate(diag) if d > 1)
    factors = tuple(diag[i] for i in positions)
    return CyclicH2(L, c, m, K, N, factors, fixed_snf, image_snf, positions)


def h2_cyclic(L: GLattice) -> CyclicH2:
    """``H^2(C, M) = M^C / N M`` for a lattice over a cyclic group."""
    G = L.group
    if not is_cyclic(G):
        raise NotCyclic("h2_cyclic needs a cyclic group")
    if G.order == 1:
        return CyclicH2(L, 0, 1, IntMatrix.identity(L.rank), IntMatrix.identity(L.rank), ())
    return cyclic_h2_data(L, cyclic_generator(G))


# restriction and special classes ----------------------------------------------------

def _cyclic_cache(H: H2Group) -> dict:
    return H.__dict__.setdefault("_cyclic", {})


def restrict_class(alpha: H2Element, H: Sequence[int], method: str = "auto") -> H2Element:
    """Restriction of ``alpha`` to the subgroup ``H`` (sorted element indices).

    ``method="cyclic"`` routes through ``M^C / N M`` (needs ``H`` cyclic);
    ``method="cochain"`` recomputes ``H^2`` of the subgroup from its own
    cochain complex. ``"auto"`` picks the cyclic route when possible.
    """
    parent: H2Group = alpha.parent
    L = parent.lattice
    G = L.group
    H = tuple(sorted(H))
    if method == "auto":
        method = "cyclic" if is_cyclic(G, H) else "cochain"
    f = parent.lift(alpha)
    if method == "cyclic":
        if len(H) == 1:
            return H2Element(None, ())
        c = cyclic_generator(G, H)
        cache = _cyclic_cache(parent)
        if c not in cache:
            cache[c] = cyclic_h2_data(L, c)
        return cache[c].class_of(f)
    if method != "cochain":
        raise ValueError(f"unknown restriction method {method!r}")
    cache = parent.__dict__.setdefault("_sub", {})
    if H not in cache:
        sub = G.subgroup(H)
        LH = L.restrict(sub)
        cache[H] = (sub, h2(sub, LH))
    sub, h2H = cache[H]
    emb = sub.parent_indices
    fH = Cochain2.from_function(sub, L.rank, lambda a, b: f(emb[a], emb[b]))
    return h2H.class_of(fH, check=False)


def is_special(alpha: H2Element, method: str = "cyclic") -> bool:
    """Nonzero restriction to every subgroup of prime order (up to conjugacy)."""
    G = alpha.parent.group
    return all(not restrict_class(alpha, P, method).is_zero() for P in prime_order_subgroups(G))


def special_classes(H: H2Group, method: str = "cyclic") -> list[H2Element]:
    return [a for a in H.elements() if is_special(a, method)]


@dataclass(frozen=True)
class TrivialConstituentVerdict:
    h2_nonzero: bool
    fixed_rank: int
    holds: bool


def trivial_constituent_check(L: GLattice, c: Optional[int] = None) -> TrivialConstituentVerdict:
    """If ``H^2(C, M) != 0`` then ``M^C != 0`` for ``C = <c>``.

    ``c`` defaults to a generator of ``L.group``, which must then be cyclic.
    Raises :class:`PropertyViolated` if the implication fails.
    """
    if c is None:
        data = h2_cyclic(L)
    else:
        data = cyclic_h2_data(L, c) if c != 0 else CyclicH2(
            L, 0, 1, IntMatrix.identity(L.rank), IntMatrix.identity(L.rank), ())
    nonzero = data.order > 1
    fixed_rank = data.fixed.rows
    if nonzero and fixed_rank < 1:
        raise PropertyViolated("H^2(C, M) is nonzero but M^C vanishes")
    return TrivialConstituentVerdict(nonzero, fixed_rank, True)
